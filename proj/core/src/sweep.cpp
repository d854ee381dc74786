#include "blendnet/models/sweep.hpp"

#include "blendnet/data/vectorize.hpp"
#include "blendnet/error.hpp"

namespace blendnet::models {

SweepResult composition_sweep(const ModelInstance& model, std::string_view smiles_a,
                              std::string_view smiles_b, int steps, int fp_radius) {
  if (steps < 2) {
    throw Error(Errc::BadDims, "a sweep needs at least 2 steps");
  }

  data::FingerprintParams fp;
  fp.radius = fp_radius;
  fp.width = model.dims.fp_width;

  data::BlendEntry entry;
  entry.smiles_a = std::string(smiles_a);
  entry.smiles_b = std::string(smiles_b);
  entry.label = data::Label::Compatible;  // the target is unused here

  SweepResult result;
  result.criterion = model.criterion;
  result.points.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    entry.fraction_a = static_cast<double>(k) / static_cast<double>(steps - 1);
    const data::ModelInput input = data::vectorize(entry, model.lambda, fp);
    result.points.push_back({entry.fraction_a, predict(model, input)});
  }
  return result;
}

}  // namespace blendnet::models
