#include "blendnet/models/evaluate.hpp"

#include "blendnet/error.hpp"

namespace blendnet::models {

EvalReport evaluate(const ModelInstance& model, const std::vector<data::ModelInput>& inputs) {
  if (inputs.empty()) {
    throw Error(Errc::EmptySet, "evaluation over an empty set");
  }

  const std::vector<double> scores = predict_batch(model, inputs);
  std::vector<data::Label> predictions;
  std::vector<data::Label> labels;
  predictions.reserve(inputs.size());
  labels.reserve(inputs.size());

  double sq_err = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    predictions.push_back(classify(scores[i], model.criterion));
    labels.push_back(inputs[i].target > 0.0 ? data::Label::Incompatible
                                            : data::Label::Compatible);
    const double diff = scores[i] - inputs[i].target;
    sq_err += diff * diff;
  }

  EvalReport report;
  report.confusion = stats::confusion(predictions, labels);
  report.metrics = stats::metrics(report.confusion, sq_err / static_cast<double>(inputs.size()));
  return report;
}

}  // namespace blendnet::models
