#pragma once

#include "blendnet/chem/fingerprint.hpp"
#include "blendnet/data/dataset.hpp"

namespace blendnet::data {

struct FingerprintParams {
  int radius = chem::kDefaultFingerprintRadius;
  int width = chem::kDefaultFingerprintWidth;
};

inline constexpr double kDefaultLambda = 10.0;

// A training sample: fingerprints in canonical pair order, the composition
// of the canonical-first polymer, and the regression target (0 compatible,
// lambda incompatible).
struct ModelInput {
  chem::Fingerprint fp_first;
  chem::Fingerprint fp_second;
  double composition = 0.5;
  double target = 0.0;

  friend bool operator==(const ModelInput&, const ModelInput&) = default;
};

// Fingerprints both polymers, canonicalizes the pair orientation
// (complementing the fraction when the pair swaps), and assigns the
// regression target. vectorize(A,B,x) == vectorize(B,A,1-x) exactly.
ModelInput vectorize(const BlendEntry& entry, double lambda = kDefaultLambda,
                     const FingerprintParams& fp = {});

std::vector<ModelInput> vectorize_all(const std::vector<BlendEntry>& entries,
                                      double lambda = kDefaultLambda,
                                      const FingerprintParams& fp = {});

}  // namespace blendnet::data
