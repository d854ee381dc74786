#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blendnet/data/dataset.hpp"

namespace blendnet::stats {

// Counts with incompatible as the positive class.
struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;
  std::int64_t total() const { return tp + fp + tn + fn; }
};

ConfusionMatrix confusion(const std::vector<data::Label>& predictions,
                          const std::vector<data::Label>& labels);

// A metric whose denominator is zero stays unset rather than poisoning the
// rest of the report.
struct MetricsReport {
  double mse = 0.0;
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> specificity;
  std::optional<double> f1;

  // Names of the metrics left unset, for surfacing in reports.
  std::vector<std::string> undefined() const;
};

// accuracy=(tp+tn)/total, precision=tp/(tp+fp), recall=tp/(tp+fn),
// specificity=tn/(tn+fp), f1=harmonic mean of precision and recall. The mse
// rides along because evaluation reports carry both.
MetricsReport metrics(const ConfusionMatrix& cm, double mse = 0.0);

}  // namespace blendnet::stats
