#include "blendnet/stats/metrics.hpp"

#include "blendnet/error.hpp"

namespace blendnet::stats {

ConfusionMatrix confusion(const std::vector<data::Label>& predictions,
                          const std::vector<data::Label>& labels) {
  if (predictions.size() != labels.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(predictions.size()) + " predictions vs " +
                                          std::to_string(labels.size()) + " labels");
  }
  if (predictions.empty()) {
    throw Error(Errc::Empty, "confusion matrix over an empty set");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool pred_pos = predictions[i] == data::Label::Incompatible;
    const bool is_pos = labels[i] == data::Label::Incompatible;
    if (pred_pos && is_pos) ++cm.tp;
    else if (pred_pos && !is_pos) ++cm.fp;
    else if (!pred_pos && is_pos) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

std::vector<std::string> MetricsReport::undefined() const {
  std::vector<std::string> names;
  if (!accuracy) names.push_back("accuracy");
  if (!precision) names.push_back("precision");
  if (!recall) names.push_back("recall");
  if (!specificity) names.push_back("specificity");
  if (!f1) names.push_back("f1");
  return names;
}

MetricsReport metrics(const ConfusionMatrix& cm, double mse) {
  MetricsReport r;
  r.mse = mse;
  const double tp = static_cast<double>(cm.tp);
  const double fp = static_cast<double>(cm.fp);
  const double tn = static_cast<double>(cm.tn);
  const double fn = static_cast<double>(cm.fn);
  if (cm.total() > 0) r.accuracy = (tp + tn) / (tp + tn + fp + fn);
  if (cm.tp + cm.fp > 0) r.precision = tp / (tp + fp);
  if (cm.tp + cm.fn > 0) r.recall = tp / (tp + fn);
  if (cm.tn + cm.fp > 0) r.specificity = tn / (tn + fp);
  if (r.precision && r.recall && *r.precision + *r.recall > 0.0) {
    r.f1 = 2.0 * *r.precision * *r.recall / (*r.precision + *r.recall);
  }
  return r;
}

}  // namespace blendnet::stats
