#pragma once

#include <cstdint>
#include <vector>

#include "blendnet/data/vectorize.hpp"
#include "blendnet/models/model.hpp"

namespace blendnet::models {

struct TrainConfig {
  int epochs = 1000;
  int batch_size = 20;
  double learning_rate = 1e-4;
  double lambda = data::kDefaultLambda;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainHistory {
  std::vector<double> train_loss;      // mean squared error per epoch
  std::vector<double> valid_accuracy;  // at the fixed criterion, per epoch
  int selected_epoch = -1;             // -1 when no epochs ran
};

struct TrainResult {
  ModelInstance model;
  TrainHistory history;
};

// Mini-batch Adam on mean squared error against the {0, lambda} targets
// carried by the inputs. Each epoch reshuffles with the config seed's
// stream, scores the validation set at the model criterion, and the
// returned weights come from the epoch with the best validation accuracy
// (earliest wins ties). Deterministic for fixed (model, data, config).
TrainResult train(const ModelInstance& init, const std::vector<data::ModelInput>& train_set,
                  const std::vector<data::ModelInput>& valid_set, const TrainConfig& config);

}  // namespace blendnet::models
