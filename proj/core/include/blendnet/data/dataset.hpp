#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace blendnet::data {

enum class Label { Compatible, Incompatible };

const char* label_name(Label l);

// One dataset row: two repeating-unit structures, the fraction of polymer
// A in the blend, and the compatibility verdict.
struct BlendEntry {
  std::string smiles_a;
  std::string smiles_b;
  double fraction_a = 0.5;
  Label label = Label::Compatible;
  std::string source_id;
};

struct RejectedRow {
  int row = 0;  // 1-based line number in the file
  std::string reason;
};

// Ingestion is permissive: malformed rows land in `rejects` with their line
// number instead of aborting the load.
struct LoadResult {
  std::vector<BlendEntry> entries;
  std::vector<RejectedRow> rejects;
};

inline constexpr const char* kDatasetHeader = "smiles_a,smiles_b,fraction_a,label,source_id";

// Reads the dataset CSV (header above, '#' comment lines ignored). Rows with
// unparseable SMILES or an out-of-range fraction are itemized in the reject
// list; file order is preserved. Throws MissingFile / BadHeader.
LoadResult load_entries(const std::filesystem::path& path);

// Writes entries in the same CSV schema, fractions formatted so they parse
// back to the identical double.
void save_entries(const std::filesystem::path& path,
                  const std::vector<BlendEntry>& entries);

double incompatible_rate(const std::vector<BlendEntry>& entries);

}  // namespace blendnet::data
