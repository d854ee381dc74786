#include "blendnet/models/checkpoint.hpp"

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "blendnet/error.hpp"

namespace blendnet::models {

namespace {

constexpr const char* kMagic = "HDDN";
constexpr int kVersion = 1;

// Owner linear nodes in parameter order, the layers a checkpoint names.
std::vector<const nn::Node*> owner_layers(const nn::Graph& g) {
  std::vector<const nn::Node*> owners;
  for (const nn::Node& n : g.nodes()) {
    if (n.kind == nn::OpKind::Linear && n.share < 0) owners.push_back(&n);
  }
  return owners;
}

}  // namespace

void save_checkpoint(const ModelInstance& model, const std::filesystem::path& path) {
  nlohmann::json j;
  j["magic"] = kMagic;
  j["version"] = kVersion;
  j["variant"] = variant_name(model.variant);
  j["dims"] = {
      {"fp_width", model.dims.fp_width},
      {"feature_width", model.dims.feature_width},
      {"n_dense_layers", model.dims.n_dense_layers},
      {"decision_widths", model.dims.decision_widths},
  };
  j["lambda"] = model.lambda;
  j["criterion"] = model.criterion;

  nlohmann::json weights = nlohmann::json::object();
  const std::vector<const nn::Node*> owners = owner_layers(model.graph);
  for (std::size_t k = 0; k < owners.size(); ++k) {
    weights["w" + std::to_string(k)] = owners[k]->weight.data();
    weights["b" + std::to_string(k)] = owners[k]->bias;
  }
  j["weights"] = std::move(weights);

  std::ofstream out(path);
  if (!out || !(out << j.dump(2) << "\n")) {
    throw Error(Errc::IoError, "cannot write checkpoint " + path.string());
  }
}

ModelInstance load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::MissingFile, "cannot open checkpoint " + path.string());
  }

  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptPayload, "unparseable checkpoint: " + std::string(e.what()));
  }

  if (!j.is_object() || !j.contains("magic") || !j["magic"].is_string() ||
      j["magic"].get<std::string>() != kMagic) {
    throw Error(Errc::BadMagic, path.string() + " is not a model checkpoint");
  }
  if (!j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != kVersion) {
    throw Error(Errc::VersionMismatch, "checkpoint format version is not " +
                                           std::to_string(kVersion));
  }

  try {
    Dims dims;
    dims.fp_width = j.at("dims").at("fp_width").get<int>();
    dims.feature_width = j.at("dims").at("feature_width").get<int>();
    dims.n_dense_layers = j.at("dims").at("n_dense_layers").get<int>();
    dims.decision_widths = j.at("dims").at("decision_widths").get<std::vector<int>>();

    ModelInstance model =
        build_model(parse_variant(j.at("variant").get<std::string>()), dims, 0);
    model.lambda = j.at("lambda").get<double>();
    model.criterion = j.at("criterion").get<double>();
    if (!(model.lambda > 0.0) || !(model.criterion > 0.0)) {
      throw Error(Errc::CorruptPayload, "lambda and criterion must be positive");
    }

    const nlohmann::json& weights = j.at("weights");
    const std::vector<const nn::Node*> owners = owner_layers(model.graph);
    std::vector<double> flat;
    flat.reserve(model.graph.param_count());
    for (std::size_t k = 0; k < owners.size(); ++k) {
      const auto w = weights.at("w" + std::to_string(k)).get<std::vector<double>>();
      const auto b = weights.at("b" + std::to_string(k)).get<std::vector<double>>();
      if (w.size() != owners[k]->weight.data().size() || b.size() != owners[k]->bias.size()) {
        throw Error(Errc::CorruptPayload,
                    "layer " + std::to_string(k) + " weight sizes do not match the dims");
      }
      flat.insert(flat.end(), w.begin(), w.end());
      flat.insert(flat.end(), b.begin(), b.end());
    }
    model.graph.set_params(flat);
    return model;
  } catch (const Error& e) {
    if (e.code() == Errc::CorruptPayload) throw;
    throw Error(Errc::CorruptPayload, std::string("bad checkpoint payload: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptPayload, std::string("bad checkpoint payload: ") + e.what());
  }
}

}  // namespace blendnet::models
