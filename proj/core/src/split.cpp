#include "blendnet/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "json.hpp"

#include "blendnet/error.hpp"
#include "blendnet/rng.hpp"

namespace blendnet::data {

namespace {

std::vector<BlendEntry> pick(const std::vector<BlendEntry>& entries,
                             const std::vector<std::size_t>& order,
                             std::size_t begin, std::size_t end) {
  std::vector<BlendEntry> out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) out.push_back(entries[order[i]]);
  return out;
}

// Equalize the classes by re-appending minority entries, walking a seeded
// permutation of them round-robin.
void oversample_to_balance(std::vector<BlendEntry>& subset, Rng& rng,
                           const char* subset_name) {
  std::vector<std::size_t> compat;
  std::vector<std::size_t> incompat;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    (subset[i].label == Label::Compatible ? compat : incompat).push_back(i);
  }
  if (compat.empty() || incompat.empty()) {
    throw Error(Errc::SingleClassSubset,
                std::string(subset_name) + " subset drew only one class");
  }
  auto& minority = compat.size() < incompat.size() ? compat : incompat;
  const std::size_t deficit =
      compat.size() < incompat.size() ? incompat.size() - compat.size()
                                      : compat.size() - incompat.size();
  rng.shuffle(minority);
  for (std::size_t k = 0; k < deficit; ++k) {
    subset.push_back(subset[minority[k % minority.size()]]);
  }
}

}  // namespace

const char* split_mode_name(SplitMode m) {
  return m == SplitMode::Random ? "random" : "balanced";
}

void SplitSpec::validate() const {
  double sum = 0.0;
  for (double r : ratios) {
    if (r <= 0.0) {
      throw Error(Errc::DomainError, "split ratios must be strictly positive");
    }
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(Errc::DomainError, "split ratios must sum to 1");
  }
}

SplitResult random_split(const std::vector<BlendEntry>& entries, const SplitSpec& spec) {
  spec.validate();
  if (entries.size() < 5) {
    throw Error(Errc::TooFewEntries, "random split needs at least 5 entries");
  }

  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(spec.seed);
  rng.shuffle(order);

  const std::size_t n = entries.size();
  const auto valid_n = static_cast<std::size_t>(std::lround(spec.ratios[1] * n));
  const auto test_n = static_cast<std::size_t>(std::lround(spec.ratios[2] * n));
  const std::size_t train_n = n - valid_n - test_n;

  SplitResult result;
  result.train = pick(entries, order, 0, train_n);
  result.valid = pick(entries, order, train_n, train_n + valid_n);
  result.test = pick(entries, order, train_n + valid_n, n);
  return result;
}

SplitResult balanced_split(const std::vector<BlendEntry>& entries, const SplitSpec& spec) {
  spec.validate();

  // Whole groups of one unordered polymer pair move together, which is what
  // keeps test pairs unseen during training.
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> by_pair;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto key = std::minmax(entries[i].smiles_a, entries[i].smiles_b);
    by_pair[key].push_back(i);
  }

  std::size_t compat_pairs = 0;
  std::size_t incompat_pairs = 0;
  for (const auto& [key, members] : by_pair) {
    bool any_compat = false;
    bool any_incompat = false;
    for (std::size_t i : members) {
      (entries[i].label == Label::Compatible ? any_compat : any_incompat) = true;
    }
    compat_pairs += any_compat;
    incompat_pairs += any_incompat;
  }
  if (compat_pairs < 2 || incompat_pairs < 2) {
    throw Error(Errc::TooFewPairs,
                "balanced split needs at least 2 distinct pairs per class");
  }

  std::vector<std::vector<std::size_t>> groups;
  groups.reserve(by_pair.size());
  for (auto& [key, members] : by_pair) groups.push_back(std::move(members));

  Rng rng(spec.seed);
  rng.shuffle(groups);

  // Deal each group to the subset with the largest remaining entry deficit.
  const double n = static_cast<double>(entries.size());
  double deficit[3] = {spec.ratios[0] * n, spec.ratios[1] * n, spec.ratios[2] * n};
  std::vector<std::size_t> member_of[3];
  for (const auto& group : groups) {
    int target = 0;
    for (int s = 1; s < 3; ++s) {
      if (deficit[s] > deficit[target]) target = s;
    }
    for (std::size_t i : group) member_of[target].push_back(i);
    deficit[target] -= static_cast<double>(group.size());
  }

  SplitResult result;
  std::vector<BlendEntry>* subsets[3] = {&result.train, &result.valid, &result.test};
  const char* names[3] = {"train", "valid", "test"};
  for (int s = 0; s < 3; ++s) {
    for (std::size_t i : member_of[s]) subsets[s]->push_back(entries[i]);
    oversample_to_balance(*subsets[s], rng, names[s]);
  }
  return result;
}

SplitResult split(const std::vector<BlendEntry>& entries, const SplitSpec& spec) {
  return spec.mode == SplitMode::Random ? random_split(entries, spec)
                                        : balanced_split(entries, spec);
}

void write_split_files(const std::filesystem::path& dir, const SplitResult& result,
                       const SplitSpec& spec) {
  std::filesystem::create_directories(dir);
  save_entries(dir / "train.csv", result.train);
  save_entries(dir / "valid.csv", result.valid);
  save_entries(dir / "test.csv", result.test);

  nlohmann::json manifest = {
      {"mode", split_mode_name(spec.mode)},
      {"seed", spec.seed},
      {"ratios", spec.ratios},
      {"counts",
       {{"train", result.train.size()},
        {"valid", result.valid.size()},
        {"test", result.test.size()}}},
      {"incompatible_rate",
       {{"train", incompatible_rate(result.train)},
        {"valid", incompatible_rate(result.valid)},
        {"test", incompatible_rate(result.test)}}},
  };
  std::ofstream out(dir / "manifest.json");
  if (!out) {
    throw Error(Errc::IoError, "cannot write manifest in " + dir.string());
  }
  out << manifest.dump(2) << "\n";
}

}  // namespace blendnet::data
