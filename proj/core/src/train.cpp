#include "blendnet/models/train.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "blendnet/error.hpp"
#include "blendnet/nn/adam.hpp"
#include "blendnet/nn/loss.hpp"
#include "blendnet/rng.hpp"

namespace blendnet::models {

void TrainConfig::validate() const {
  if (epochs < 0) {
    throw Error(Errc::BadDims, "epoch count must be non-negative");
  }
  if (batch_size < 1) {
    throw Error(Errc::BadDims, "batch size must be at least 1");
  }
  if (!(learning_rate > 0.0)) {
    throw Error(Errc::BadDims, "learning rate must be positive");
  }
  if (!(lambda > 0.0)) {
    throw Error(Errc::BadDims, "lambda must be positive");
  }
}

namespace {

double valid_accuracy(const ModelInstance& model, const std::vector<data::ModelInput>& valid) {
  const std::vector<double> scores = predict_batch(model, valid);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < valid.size(); ++i) {
    const data::Label truth =
        valid[i].target > 0.0 ? data::Label::Incompatible : data::Label::Compatible;
    if (classify(scores[i], model.criterion) == truth) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(valid.size());
}

}  // namespace

TrainResult train(const ModelInstance& init, const std::vector<data::ModelInput>& train_set,
                  const std::vector<data::ModelInput>& valid_set, const TrainConfig& config) {
  config.validate();
  if (train_set.empty() || valid_set.empty()) {
    throw Error(Errc::EmptySet, "training needs non-empty train and valid sets");
  }

  TrainResult out;
  out.model = init;
  if (config.epochs == 0) return out;

  nn::Graph& g = out.model.graph;
  std::vector<double> params = g.params();
  nn::AdamState adam;
  nn::AdamConfig adam_cfg;
  adam_cfg.lr = config.learning_rate;

  Rng rng(config.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const std::size_t n = train_set.size();
  const std::size_t bs = static_cast<std::size_t>(config.batch_size);

  double best_accuracy = -1.0;
  std::vector<double> best_params = params;

  std::vector<data::ModelInput> batch;
  batch.reserve(bs);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);

    double sq_err = 0.0;
    for (std::size_t at = 0; at < n; at += bs) {
      const std::size_t stop = std::min(n, at + bs);
      batch.clear();
      std::vector<double> targets;
      targets.reserve(stop - at);
      for (std::size_t k = at; k < stop; ++k) {
        batch.push_back(train_set[order[k]]);
        targets.push_back(train_set[order[k]].target);
      }

      nn::Tape tape;
      const nn::Matrix pred = g.forward(pack_batch(out.model, batch, 0, batch.size()), &tape);
      const nn::LossResult loss = nn::mse_loss(pred, targets);
      if (!std::isfinite(loss.value)) {
        throw Error(Errc::DivergedLoss,
                    "non-finite loss at epoch " + std::to_string(epoch));
      }
      sq_err += loss.value * static_cast<double>(stop - at);

      const std::vector<double> grad = g.backward(tape, loss.grad);
      nn::adam_step(params, grad, adam, adam_cfg);
      g.set_params(params);
    }

    out.history.train_loss.push_back(sq_err / static_cast<double>(n));
    const double acc = valid_accuracy(out.model, valid_set);
    out.history.valid_accuracy.push_back(acc);
    if (acc > best_accuracy) {
      best_accuracy = acc;
      best_params = params;
      out.history.selected_epoch = epoch;
    }
  }

  g.set_params(best_params);
  return out;
}

}  // namespace blendnet::models
