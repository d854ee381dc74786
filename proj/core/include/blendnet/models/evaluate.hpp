#pragma once

#include <vector>

#include "blendnet/data/vectorize.hpp"
#include "blendnet/models/model.hpp"
#include "blendnet/stats/metrics.hpp"

namespace blendnet::models {

struct EvalReport {
  stats::ConfusionMatrix confusion;
  stats::MetricsReport metrics;  // carries the raw-score MSE alongside
};

// Scores every input, classifies at the model criterion, and reports the
// confusion-matrix metrics plus the mean squared error of the raw scores
// against their {0, lambda} targets.
EvalReport evaluate(const ModelInstance& model, const std::vector<data::ModelInput>& inputs);

}  // namespace blendnet::models
