#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "blendnet/data/dataset.hpp"
#include "blendnet/data/vectorize.hpp"
#include "blendnet/nn/graph.hpp"

namespace blendnet::models {

// The blend-compatibility network and its variations. The first five share
// the Siamese feature towers with absolute-difference fusion; the last
// three are the comparison architectures.
enum class ModelVariant {
  Hddn,         // dense-connected towers, |f(A) - f(B)|, composition at decision
  HddnNoc,      // composition input removed
  HddnNodense,  // plain chained towers instead of dense connections
  HddnNodiff,   // one tower over both fingerprints concatenated
  HddnNoabs,    // signed difference instead of absolute
  Mlp,          // everything concatenated through a plain stack
  Cdn,          // dense connections concatenate instead of add, width grows
  Dn,           // additive dense connections also inside the decision stack
};

inline constexpr std::array<ModelVariant, 8> kAllVariants = {
    ModelVariant::Hddn,     ModelVariant::HddnNoc,    ModelVariant::HddnNodense,
    ModelVariant::HddnNodiff, ModelVariant::HddnNoabs, ModelVariant::Mlp,
    ModelVariant::Cdn,      ModelVariant::Dn,
};

const char* variant_name(ModelVariant variant);
ModelVariant parse_variant(std::string_view name);

struct Dims {
  int fp_width = 2048;
  int feature_width = 256;
  int n_dense_layers = 3;
  std::vector<int> decision_widths = {64, 16};

  void validate() const;
  bool operator==(const Dims&) const = default;
};

struct ModelInstance {
  ModelVariant variant = ModelVariant::Hddn;
  Dims dims;
  nn::Graph graph;
  double lambda = data::kDefaultLambda;
  double criterion = data::kDefaultLambda / 2.0;

  // Every variant except HddnNoc feeds the blend fraction to the network.
  bool takes_composition() const { return variant != ModelVariant::HddnNoc; }
};

// Builds the variant's graph at the given dimensions and draws the initial
// weights from the seed, U[-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer in
// creation order.
ModelInstance build_model(ModelVariant variant, const Dims& dims, std::uint64_t seed);

// Packs vectorized entries [begin, end) into the model's input matrices,
// fingerprint bits as 0/1 doubles.
std::vector<nn::Matrix> pack_batch(const ModelInstance& model,
                                   const std::vector<data::ModelInput>& inputs,
                                   std::size_t begin, std::size_t end);

// Raw scalar network output, the "prediction difference" a score is read
// from. Inputs are used as given; pair canonicalization is vectorize's job.
double predict(const ModelInstance& model, const data::ModelInput& input);
std::vector<double> predict_batch(const ModelInstance& model,
                                  const std::vector<data::ModelInput>& inputs);

// Incompatible iff score >= criterion; a score exactly at the criterion is
// deliberately incompatible so the tie rule is fixed.
data::Label classify(double score, double criterion);

}  // namespace blendnet::models
