#include "blendnet/attrib/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <utility>

#include "blendnet/data/vectorize.hpp"
#include "blendnet/error.hpp"
#include "blendnet/hash.hpp"
#include "blendnet/rng.hpp"

namespace blendnet::attrib {

std::string feature_name(const FeatureId& f) {
  switch (f.slot) {
    case FeatureId::Slot::FirstFp: return "fp_first[" + std::to_string(f.bit) + "]";
    case FeatureId::Slot::SecondFp: return "fp_second[" + std::to_string(f.bit) + "]";
    case FeatureId::Slot::Composition: return "composition";
  }
  return "?";
}

Baseline zero_baseline(const models::ModelInstance& model) {
  Baseline b;
  b.fp_first = chem::Fingerprint(model.dims.fp_width, 0);
  b.fp_second = chem::Fingerprint(model.dims.fp_width, 0);
  b.composition = 0.5;
  return b;
}

double mean_composition(const std::vector<data::ModelInput>& background) {
  if (background.empty()) {
    throw Error(Errc::EmptySet, "background sample is empty");
  }
  double sum = 0.0;
  for (const data::ModelInput& in : background) sum += in.composition;
  return sum / static_cast<double>(background.size());
}

std::vector<FeatureId> default_features(const models::ModelInstance& model,
                                        const data::ModelInput& instance) {
  std::vector<FeatureId> features;
  for (int bit : instance.fp_first.set_bits()) {
    features.push_back({FeatureId::Slot::FirstFp, bit});
  }
  for (int bit : instance.fp_second.set_bits()) {
    features.push_back({FeatureId::Slot::SecondFp, bit});
  }
  if (model.takes_composition()) {
    features.push_back({FeatureId::Slot::Composition, 0});
  }
  return features;
}

namespace {

// Dense copies of the baseline and instance inputs, so coalition rows are
// plain array writes instead of fingerprint edits.
struct Workspace {
  const models::ModelInstance* model = nullptr;
  std::size_t width = 0;
  std::vector<double> base_a, base_b, inst_a, inst_b;
  double base_x = 0.5;
  double inst_x = 0.5;
};

std::vector<double> dense_bits(const chem::Fingerprint& fp) {
  std::vector<double> row(static_cast<std::size_t>(fp.width()), 0.0);
  for (int bit : fp.set_bits()) row[static_cast<std::size_t>(bit)] = 1.0;
  return row;
}

Workspace make_workspace(const models::ModelInstance& model, const data::ModelInput& instance,
                         const Baseline& baseline, const std::vector<FeatureId>& features) {
  const int width = model.dims.fp_width;
  if (instance.fp_first.width() != width || instance.fp_second.width() != width ||
      baseline.fp_first.width() != width || baseline.fp_second.width() != width) {
    throw Error(Errc::ShapeMismatch,
                "instance and baseline fingerprints must match the model fp_width");
  }
  for (const FeatureId& f : features) {
    if (f.slot != FeatureId::Slot::Composition && (f.bit < 0 || f.bit >= width)) {
      throw Error(Errc::IndexOutOfRange, "feature bit " + std::to_string(f.bit) +
                                             " outside fingerprint width " + std::to_string(width));
    }
  }

  Workspace ws;
  ws.model = &model;
  ws.width = static_cast<std::size_t>(width);
  ws.base_a = dense_bits(baseline.fp_first);
  ws.base_b = dense_bits(baseline.fp_second);
  ws.inst_a = dense_bits(instance.fp_first);
  ws.inst_b = dense_bits(instance.fp_second);
  ws.base_x = baseline.composition;
  ws.inst_x = instance.composition;
  return ws;
}

// Scores one coalition per mask row; masks[r][j] != 0 switches feature j
// from its baseline value to the instance value.
std::vector<double> eval_masked(const Workspace& ws, const std::vector<FeatureId>& features,
                                const std::vector<std::vector<std::uint8_t>>& masks) {
  const std::size_t n = masks.size();
  nn::Matrix a(n, ws.width);
  nn::Matrix b(n, ws.width);
  nn::Matrix x(n, 1);
  for (std::size_t r = 0; r < n; ++r) {
    std::copy(ws.base_a.begin(), ws.base_a.end(), a.row(r));
    std::copy(ws.base_b.begin(), ws.base_b.end(), b.row(r));
    x(r, 0) = ws.base_x;
    for (std::size_t j = 0; j < features.size(); ++j) {
      if (!masks[r][j]) continue;
      const FeatureId& f = features[j];
      switch (f.slot) {
        case FeatureId::Slot::FirstFp:
          a.row(r)[static_cast<std::size_t>(f.bit)] = ws.inst_a[static_cast<std::size_t>(f.bit)];
          break;
        case FeatureId::Slot::SecondFp:
          b.row(r)[static_cast<std::size_t>(f.bit)] = ws.inst_b[static_cast<std::size_t>(f.bit)];
          break;
        case FeatureId::Slot::Composition:
          x(r, 0) = ws.inst_x;
          break;
      }
    }
  }

  std::vector<nn::Matrix> batch;
  batch.push_back(std::move(a));
  batch.push_back(std::move(b));
  if (ws.model->takes_composition()) batch.push_back(std::move(x));
  const nn::Matrix out = ws.model->graph.forward(batch);
  std::vector<double> values(n);
  for (std::size_t r = 0; r < n; ++r) values[r] = out(r, 0);
  return values;
}

// f(baseline) and f(instance) in one small batch.
std::pair<double, double> endpoint_values(const Workspace& ws,
                                          const std::vector<FeatureId>& features) {
  std::vector<std::vector<std::uint8_t>> masks(2, std::vector<std::uint8_t>(features.size(), 0));
  std::fill(masks[1].begin(), masks[1].end(), std::uint8_t{1});
  const std::vector<double> v = eval_masked(ws, features, masks);
  return {v[0], v[1]};
}

}  // namespace

AttributionReport shapley_sample(const models::ModelInstance& model,
                                 const data::ModelInput& instance, const Baseline& baseline,
                                 const std::vector<FeatureId>& features, int n_samples,
                                 std::uint64_t seed) {
  if (features.empty()) {
    throw Error(Errc::EmptyFeatures, "attribution needs at least one feature");
  }
  if (n_samples < 1) {
    throw Error(Errc::DomainError, "sample count must be at least 1");
  }

  const Workspace ws = make_workspace(model, instance, baseline, features);
  const std::size_t m = features.size();
  const auto [f_b, f_x] = endpoint_values(ws, features);

  AttributionReport report;
  report.features = features;
  report.phi.assign(m, 0.0);
  report.baseline_value = f_b;
  report.instance_value = f_x;

  Rng rng(seed);
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::vector<std::uint8_t>> masks(m, std::vector<std::uint8_t>(m, 0));

  for (int s = 0; s < n_samples; ++s) {
    rng.shuffle(perm);
    // Row j holds the coalition of the first j+1 features in this order.
    std::vector<std::uint8_t> cumulative(m, 0);
    for (std::size_t j = 0; j < m; ++j) {
      cumulative[perm[j]] = 1;
      masks[j] = cumulative;
    }
    const std::vector<double> values = eval_masked(ws, features, masks);
    double prev = f_b;
    for (std::size_t j = 0; j < m; ++j) {
      report.phi[perm[j]] += values[j] - prev;
      prev = values[j];
    }
  }

  for (double& p : report.phi) p /= static_cast<double>(n_samples);
  const double total = std::accumulate(report.phi.begin(), report.phi.end(), 0.0);
  report.residual = std::abs(f_x - f_b - total);
  return report;
}

AttributionReport exact_shapley(const models::ModelInstance& model,
                                const data::ModelInput& instance, const Baseline& baseline,
                                const std::vector<FeatureId>& features) {
  if (features.empty()) {
    throw Error(Errc::EmptyFeatures, "attribution needs at least one feature");
  }
  if (features.size() > 20) {
    throw Error(Errc::TooManyFeatures, "exact enumeration caps at 20 features, got " +
                                           std::to_string(features.size()));
  }

  const Workspace ws = make_workspace(model, instance, baseline, features);
  const std::size_t m = features.size();
  const std::size_t total = std::size_t{1} << m;

  // Score every coalition, chunked to keep the batch matrices small.
  std::vector<double> value(total);
  const std::size_t chunk = 512;
  std::vector<std::vector<std::uint8_t>> masks;
  for (std::size_t base = 0; base < total; base += chunk) {
    const std::size_t stop = std::min(total, base + chunk);
    masks.assign(stop - base, std::vector<std::uint8_t>(m, 0));
    for (std::size_t s = base; s < stop; ++s) {
      for (std::size_t j = 0; j < m; ++j) {
        masks[s - base][j] = (s >> j) & 1 ? 1 : 0;
      }
    }
    const std::vector<double> v = eval_masked(ws, features, masks);
    std::copy(v.begin(), v.end(), value.begin() + static_cast<std::ptrdiff_t>(base));
  }

  // Shapley weight for a coalition of size s: 1 / (m * C(m-1, s)).
  std::vector<unsigned long long> choose(m, 1);
  for (std::size_t s = 1; s < m; ++s) {
    choose[s] = choose[s - 1] * (m - s) / s;
  }
  std::vector<double> weight(m);
  for (std::size_t s = 0; s < m; ++s) {
    weight[s] = 1.0 / (static_cast<double>(m) * static_cast<double>(choose[s]));
  }

  AttributionReport report;
  report.features = features;
  report.phi.assign(m, 0.0);
  report.baseline_value = value[0];
  report.instance_value = value[total - 1];

  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    double phi = 0.0;
    for (std::size_t s = 0; s < total; ++s) {
      if (s & bit) continue;
      phi += weight[static_cast<std::size_t>(std::popcount(s))] * (value[s | bit] - value[s]);
    }
    report.phi[j] = phi;
  }

  const double sum = std::accumulate(report.phi.begin(), report.phi.end(), 0.0);
  report.residual = std::abs(report.instance_value - report.baseline_value - sum);
  return report;
}

StructureComparison compare_structures(const models::ModelInstance& model,
                                       const std::string& normal_a, const std::string& normal_b,
                                       const std::string& lacking_a, const std::string& lacking_b,
                                       int dimension, int sweep_steps, int n_fractions,
                                       int n_samples, std::uint64_t seed, int fp_radius) {
  if (n_fractions < 1) {
    throw Error(Errc::DomainError, "need at least one sampled composition");
  }
  if (dimension < 0 || dimension >= model.dims.fp_width) {
    throw Error(Errc::IndexOutOfRange, "dimension " + std::to_string(dimension) +
                                           " outside fingerprint width " +
                                           std::to_string(model.dims.fp_width));
  }

  data::FingerprintParams fp;
  fp.radius = fp_radius;
  fp.width = model.dims.fp_width;

  data::BlendEntry probe;
  probe.smiles_a = normal_a;
  probe.smiles_b = normal_b;
  probe.fraction_a = 0.5;
  const data::ModelInput probe_input = data::vectorize(probe, model.lambda, fp);
  if (!probe_input.fp_first.test(dimension) && !probe_input.fp_second.test(dimension)) {
    throw Error(Errc::DomainError, "dimension " + std::to_string(dimension) +
                                       " is not active in either polymer of the normal pair");
  }

  StructureComparison cmp;
  cmp.normal_sweep = composition_sweep(model, normal_a, normal_b, sweep_steps, fp_radius);
  cmp.lacking_sweep = composition_sweep(model, lacking_a, lacking_b, sweep_steps, fp_radius);

  Rng rng(seed);
  cmp.fractions.reserve(static_cast<std::size_t>(n_fractions));
  for (int i = 0; i < n_fractions; ++i) cmp.fractions.push_back(rng.real01());
  std::sort(cmp.fractions.begin(), cmp.fractions.end());

  const Baseline baseline = zero_baseline(model);
  auto phi_of_dimension = [&](const std::string& a, const std::string& b, double fraction,
                              std::uint64_t point_seed) {
    data::BlendEntry e;
    e.smiles_a = a;
    e.smiles_b = b;
    e.fraction_a = fraction;
    const data::ModelInput input = data::vectorize(e, model.lambda, fp);
    const std::vector<FeatureId> features = default_features(model, input);
    const AttributionReport report =
        shapley_sample(model, input, baseline, features, n_samples, point_seed);
    double phi = 0.0;
    for (std::size_t j = 0; j < features.size(); ++j) {
      if (features[j].slot != FeatureId::Slot::Composition && features[j].bit == dimension) {
        phi += report.phi[j];
      }
    }
    return phi;
  };

  for (std::size_t i = 0; i < cmp.fractions.size(); ++i) {
    const std::uint64_t normal_seed = Fnv1a64().add_u64(seed).add_u64(i).add_u8(0).digest();
    const std::uint64_t lacking_seed = Fnv1a64().add_u64(seed).add_u64(i).add_u8(1).digest();
    cmp.phi_normal.push_back(phi_of_dimension(normal_a, normal_b, cmp.fractions[i], normal_seed));
    cmp.phi_lacking.push_back(
        phi_of_dimension(lacking_a, lacking_b, cmp.fractions[i], lacking_seed));
  }
  return cmp;
}

}  // namespace blendnet::attrib
