#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "blendnet/data/dataset.hpp"

namespace blendnet::data {

enum class SplitMode { Random, Balanced };

const char* split_mode_name(SplitMode m);

struct SplitSpec {
  SplitMode mode = SplitMode::Random;
  std::uint64_t seed = 0;
  std::array<double, 3> ratios = {0.64, 0.16, 0.20};  // train, valid, test

  void validate() const;  // ratios strictly positive, sum 1 within 1e-9
};

struct SplitResult {
  std::vector<BlendEntry> train;
  std::vector<BlendEntry> valid;
  std::vector<BlendEntry> test;
};

// Seeded uniform shuffle partitioned by the ratios; valid and test sizes
// are rounded, train takes the remainder. Needs at least 5 entries.
SplitResult random_split(const std::vector<BlendEntry>& entries, const SplitSpec& spec);

// Pair-disjoint split with class balancing: entries are grouped by
// unordered SMILES pair, whole groups are dealt to the subsets by seeded
// shuffle to approximate the entry-count ratios, then each subset
// duplicates minority-class entries (cycling in seeded order) until the
// classes are equal. Test-set pairs never appear in train or valid.
SplitResult balanced_split(const std::vector<BlendEntry>& entries, const SplitSpec& spec);

SplitResult split(const std::vector<BlendEntry>& entries, const SplitSpec& spec);

// Writes train.csv / valid.csv / test.csv plus manifest.json (seed, mode,
// ratios, counts, class rates) into the directory, creating it if needed.
void write_split_files(const std::filesystem::path& dir, const SplitResult& result,
                       const SplitSpec& spec);

}  // namespace blendnet::data
