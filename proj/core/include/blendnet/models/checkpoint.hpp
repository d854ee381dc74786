#pragma once

#include <filesystem>

#include "blendnet/models/model.hpp"

namespace blendnet::models {

// Checkpoints are a JSON document: magic "HDDN", format version, variant
// tag, dimensions, lambda, criterion, and one row-major array per layer
// ("w0"/"b0", "w1"/"b1", ... in parameter order). Weights round-trip
// bit-exactly.
void save_checkpoint(const ModelInstance& model, const std::filesystem::path& path);
ModelInstance load_checkpoint(const std::filesystem::path& path);

}  // namespace blendnet::models
