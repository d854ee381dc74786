#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blendnet/data/vectorize.hpp"
#include "blendnet/models/model.hpp"
#include "blendnet/models/sweep.hpp"

namespace blendnet::attrib {

// One attributable input position: a bit of either polymer's fingerprint,
// or the composition scalar.
struct FeatureId {
  enum class Slot { FirstFp, SecondFp, Composition };
  Slot slot = Slot::FirstFp;
  int bit = 0;  // ignored for Composition

  friend bool operator==(const FeatureId&, const FeatureId&) = default;
};

std::string feature_name(const FeatureId& f);

// What a masked feature falls back to. Defaults to all-zero fingerprints
// and the midpoint composition; a background dataset can supply its mean
// composition instead.
struct Baseline {
  chem::Fingerprint fp_first;
  chem::Fingerprint fp_second;
  double composition = 0.5;
};

Baseline zero_baseline(const models::ModelInstance& model);

// The mean composition of a background sample, for callers that have one.
double mean_composition(const std::vector<data::ModelInput>& background);

// The positions where the instance differs from the baseline and the model
// can see it: active fingerprint bits plus (when the variant uses it) the
// composition slot.
std::vector<FeatureId> default_features(const models::ModelInstance& model,
                                        const data::ModelInput& instance);

struct AttributionReport {
  std::vector<FeatureId> features;
  std::vector<double> phi;      // per-feature Shapley value, same order
  double baseline_value = 0.0;  // f(baseline)
  double instance_value = 0.0;  // f(instance)
  double residual = 0.0;        // |f(x) - f(b) - sum(phi)|, always reported
};

// Monte Carlo permutation estimate: each sampled feature order contributes
// every feature's marginal effect, and phi is the mean. Deterministic for
// a fixed seed.
AttributionReport shapley_sample(const models::ModelInstance& model,
                                 const data::ModelInput& instance, const Baseline& baseline,
                                 const std::vector<FeatureId>& features, int n_samples,
                                 std::uint64_t seed);

// Exact Shapley values by full coalition enumeration, feasible up to 20
// features. The oracle the sampler is tested against.
AttributionReport exact_shapley(const models::ModelInstance& model,
                                const data::ModelInput& instance, const Baseline& baseline,
                                const std::vector<FeatureId>& features);

// Side-by-side study of a pair against a structurally edited copy:
// composition sweeps for both, plus the named fingerprint dimension's phi
// across sampled compositions.
struct StructureComparison {
  models::SweepResult normal_sweep;
  models::SweepResult lacking_sweep;
  std::vector<double> fractions;
  std::vector<double> phi_normal;   // phi of the dimension, per fraction
  std::vector<double> phi_lacking;
};

StructureComparison compare_structures(const models::ModelInstance& model,
                                       const std::string& normal_a, const std::string& normal_b,
                                       const std::string& lacking_a, const std::string& lacking_b,
                                       int dimension, int sweep_steps, int n_fractions,
                                       int n_samples, std::uint64_t seed,
                                       int fp_radius = chem::kDefaultFingerprintRadius);

}  // namespace blendnet::attrib
