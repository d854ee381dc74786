#include "blendnet/models/model.hpp"

#include <string>

#include "blendnet/error.hpp"
#include "blendnet/rng.hpp"

namespace blendnet::models {

const char* variant_name(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::Hddn: return "HDDN";
    case ModelVariant::HddnNoc: return "HDDN-noc";
    case ModelVariant::HddnNodense: return "HDDN-nodense";
    case ModelVariant::HddnNodiff: return "HDDN-nodiff";
    case ModelVariant::HddnNoabs: return "HDDN-noabs";
    case ModelVariant::Mlp: return "MLP";
    case ModelVariant::Cdn: return "CDN";
    case ModelVariant::Dn: return "DN";
  }
  return "?";
}

ModelVariant parse_variant(std::string_view name) {
  for (ModelVariant v : kAllVariants) {
    if (name == variant_name(v)) return v;
  }
  throw Error(Errc::UnknownVariant, "unknown model variant '" + std::string(name) + "'");
}

void Dims::validate() const {
  if (fp_width < 1 || feature_width < 1 || n_dense_layers < 1) {
    throw Error(Errc::BadDims, "fp_width, feature_width and n_dense_layers must be positive");
  }
  for (int w : decision_widths) {
    if (w < 1) throw Error(Errc::BadDims, "decision widths must be positive");
  }
}

namespace {

enum class TowerStyle { DenseAdd, Chain, DenseConcat };

// One feature-extraction tower: a projection layer then n_dense_layers
// hidden layers, relu throughout. `owners` records the parameter-owning
// linear ids on the first build so the second polymer thread can share
// them.
int build_tower(nn::Graph& g, int in, const Dims& dims, TowerStyle style,
                std::vector<int>* owners, bool reuse) {
  std::size_t next_owner = 0;
  auto layer = [&](int arg, int width) {
    int lin;
    if (reuse) {
      lin = g.linear_shared(arg, (*owners)[next_owner++]);
    } else {
      lin = g.linear(arg, width);
      if (owners) owners->push_back(lin);
    }
    return g.relu(lin);
  };

  int h = layer(in, dims.feature_width);
  switch (style) {
    case TowerStyle::DenseAdd: {
      // h_l = relu(W_l (h_0 + ... + h_{l-1}) + b_l); the running sum keeps
      // every layer at feature_width.
      int sum = h;
      for (int l = 0; l < dims.n_dense_layers; ++l) {
        h = layer(sum, dims.feature_width);
        if (l + 1 < dims.n_dense_layers) sum = g.add(sum, h);
      }
      break;
    }
    case TowerStyle::Chain: {
      for (int l = 0; l < dims.n_dense_layers; ++l) {
        h = layer(h, dims.feature_width);
      }
      break;
    }
    case TowerStyle::DenseConcat: {
      // h_l = relu(W_l concat(h_0, ..., h_{l-1}) + b_l); fan-in grows by
      // feature_width per layer.
      std::vector<int> history = {h};
      for (int l = 0; l < dims.n_dense_layers; ++l) {
        int joined = history.size() == 1 ? history[0] : g.concat(history);
        h = layer(joined, dims.feature_width * static_cast<int>(history.size()));
        history.push_back(h);
      }
      break;
    }
  }
  return h;
}

int plain_decision(nn::Graph& g, int in, const Dims& dims) {
  int h = in;
  for (int w : dims.decision_widths) {
    h = g.relu(g.linear(h, w));
  }
  return g.linear(h, 1);
}

// Decision stack with additive dense connections, which forces one shared
// width across its hidden layers; the first entry of decision_widths sets
// it.
int dense_decision(nn::Graph& g, int in, const Dims& dims) {
  if (dims.decision_widths.empty()) {
    return g.linear(in, 1);
  }
  const int width = dims.decision_widths[0];
  int h = g.relu(g.linear(in, width));
  int sum = h;
  const std::size_t layers = dims.decision_widths.size();
  for (std::size_t l = 1; l < layers; ++l) {
    h = g.relu(g.linear(sum, width));
    if (l + 1 < layers) sum = g.add(sum, h);
  }
  return g.linear(h, 1);
}

}  // namespace

ModelInstance build_model(ModelVariant variant, const Dims& dims, std::uint64_t seed) {
  dims.validate();

  ModelInstance m;
  m.variant = variant;
  m.dims = dims;
  nn::Graph& g = m.graph;

  const int in_a = g.input(dims.fp_width);
  const int in_b = g.input(dims.fp_width);
  const int in_x = m.takes_composition() ? g.input(1) : -1;

  switch (variant) {
    case ModelVariant::Hddn:
    case ModelVariant::HddnNoc:
    case ModelVariant::HddnNodense:
    case ModelVariant::HddnNoabs:
    case ModelVariant::Cdn:
    case ModelVariant::Dn: {
      const TowerStyle style = variant == ModelVariant::HddnNodense ? TowerStyle::Chain
                               : variant == ModelVariant::Cdn       ? TowerStyle::DenseConcat
                                                                    : TowerStyle::DenseAdd;
      std::vector<int> owners;
      const int feat_a = build_tower(g, in_a, dims, style, &owners, false);
      const int feat_b = build_tower(g, in_b, dims, style, &owners, true);
      int fused = g.sub(feat_a, feat_b);
      if (variant != ModelVariant::HddnNoabs) fused = g.abs(fused);
      const int dec_in = in_x >= 0 ? g.concat({fused, in_x}) : fused;
      const int out = variant == ModelVariant::Dn ? dense_decision(g, dec_in, dims)
                                                  : plain_decision(g, dec_in, dims);
      g.set_output(out);
      break;
    }
    case ModelVariant::HddnNodiff: {
      const int joined = g.concat({in_a, in_b});
      const int feat = build_tower(g, joined, dims, TowerStyle::DenseAdd, nullptr, false);
      const int dec_in = g.concat({feat, in_x});
      g.set_output(plain_decision(g, dec_in, dims));
      break;
    }
    case ModelVariant::Mlp: {
      // Same depth and widths as the main variant, with every structural
      // trick removed: one plain stack over the whole input.
      int h = g.concat({in_a, in_b, in_x});
      h = g.relu(g.linear(h, dims.feature_width));
      for (int l = 0; l < dims.n_dense_layers; ++l) {
        h = g.relu(g.linear(h, dims.feature_width));
      }
      g.set_output(plain_decision(g, h, dims));
      break;
    }
  }

  Rng rng(seed);
  g.init_uniform(rng);
  return m;
}

std::vector<nn::Matrix> pack_batch(const ModelInstance& model,
                                   const std::vector<data::ModelInput>& inputs,
                                   std::size_t begin, std::size_t end) {
  if (begin > end || end > inputs.size()) {
    throw Error(Errc::IndexOutOfRange, "batch range [" + std::to_string(begin) + ", " +
                                           std::to_string(end) + ") over " +
                                           std::to_string(inputs.size()) + " inputs");
  }
  const std::size_t n = end - begin;
  const int width = model.dims.fp_width;

  nn::Matrix a(n, static_cast<std::size_t>(width));
  nn::Matrix b(n, static_cast<std::size_t>(width));
  nn::Matrix x(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const data::ModelInput& in = inputs[begin + i];
    if (in.fp_first.width() != width || in.fp_second.width() != width) {
      throw Error(Errc::ShapeMismatch, "input fingerprint width " +
                                           std::to_string(in.fp_first.width()) +
                                           " does not match model fp_width " +
                                           std::to_string(width));
    }
    for (int bit : in.fp_first.set_bits()) a(i, static_cast<std::size_t>(bit)) = 1.0;
    for (int bit : in.fp_second.set_bits()) b(i, static_cast<std::size_t>(bit)) = 1.0;
    x(i, 0) = in.composition;
  }

  std::vector<nn::Matrix> batch;
  batch.push_back(std::move(a));
  batch.push_back(std::move(b));
  if (model.takes_composition()) batch.push_back(std::move(x));
  return batch;
}

double predict(const ModelInstance& model, const data::ModelInput& input) {
  const std::vector<data::ModelInput> one = {input};
  const nn::Matrix out = model.graph.forward(pack_batch(model, one, 0, 1));
  return out(0, 0);
}

std::vector<double> predict_batch(const ModelInstance& model,
                                  const std::vector<data::ModelInput>& inputs) {
  if (inputs.empty()) return {};
  const nn::Matrix out = model.graph.forward(pack_batch(model, inputs, 0, inputs.size()));
  std::vector<double> scores(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) scores[i] = out(i, 0);
  return scores;
}

data::Label classify(double score, double criterion) {
  return score >= criterion ? data::Label::Incompatible : data::Label::Compatible;
}

}  // namespace blendnet::models
