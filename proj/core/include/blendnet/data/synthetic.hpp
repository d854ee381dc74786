#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blendnet/data/dataset.hpp"
#include "blendnet/data/vectorize.hpp"

namespace blendnet::data {

// Desk-scale data generator: draws random (unit pair, fraction) tuples from
// a pool of repeating units and labels them with a structure rule, so a
// model has something real to learn without any external dataset.
struct SyntheticSpec {
  int n = 400;
  std::uint64_t seed = 0;
  std::vector<std::string> pool;  // empty = default_unit_pool()
  double t0 = 0.25;               // tanimoto threshold
  double alpha = 0.30;            // composition weight in the rule
  FingerprintParams fp;
};

// Repeating units of common commodity polymers, written with * attachment
// points.
const std::vector<std::string>& default_unit_pool();

// Labels a draw compatible iff
//   tanimoto(fpA, fpB) > t0 - alpha * |fraction_a - 0.5|.
bool synthetic_rule(double tanimoto_ab, double fraction_a, double t0, double alpha);

// Deterministic for a given spec; the rule parameters ride along in each
// entry's source_id. Requires >= 8 distinct parseable pool units.
std::vector<BlendEntry> gen_synthetic(const SyntheticSpec& spec);

}  // namespace blendnet::data
