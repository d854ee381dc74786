#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "blendnet/models/model.hpp"

namespace blendnet::models {

struct SweepPoint {
  double fraction_a = 0.0;
  double score = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double criterion = 0.0;  // the horizontal rule a plot draws
};

// Scores the pair across fraction_a = 0, 1/(steps-1), ..., 1. Each point
// goes through the same vectorization as dataset entries, so the sweep of
// (A, B) equals the sweep of (B, A) read right to left.
SweepResult composition_sweep(const ModelInstance& model, std::string_view smiles_a,
                              std::string_view smiles_b, int steps,
                              int fp_radius = chem::kDefaultFingerprintRadius);

}  // namespace blendnet::models
