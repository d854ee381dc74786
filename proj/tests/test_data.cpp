#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"

#include "blendnet/chem/smiles.hpp"
#include "blendnet/data/dataset.hpp"
#include "blendnet/data/split.hpp"
#include "blendnet/data/synthetic.hpp"
#include "blendnet/data/vectorize.hpp"
#include "blendnet/error.hpp"

using namespace blendnet;
using namespace blendnet::data;

namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

// Unordered pair key used to check pair disjointness.
std::pair<std::string, std::string> pair_key(const BlendEntry& e) {
  return e.smiles_a <= e.smiles_b ? std::make_pair(e.smiles_a, e.smiles_b)
                                  : std::make_pair(e.smiles_b, e.smiles_a);
}

std::vector<BlendEntry> demo_entries(int n) {
  SyntheticSpec spec;
  spec.n = n;
  spec.seed = 99;
  spec.fp.width = 256;
  return gen_synthetic(spec);
}

}  // namespace

TEST_CASE("dataset round-trips through CSV") {
  const std::vector<BlendEntry> entries = demo_entries(40);
  const fs::path path = temp_file("blendnet_roundtrip.csv", "");
  save_entries(path, entries);

  const LoadResult loaded = load_entries(path);
  CHECK(loaded.rejects.empty());
  REQUIRE(loaded.entries.size() == entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CHECK(loaded.entries[i].smiles_a == entries[i].smiles_a);
    CHECK(loaded.entries[i].smiles_b == entries[i].smiles_b);
    CHECK(loaded.entries[i].fraction_a == entries[i].fraction_a);  // exact
    CHECK(loaded.entries[i].label == entries[i].label);
    CHECK(loaded.entries[i].source_id == entries[i].source_id);
  }
}

TEST_CASE("loader itemizes bad rows instead of aborting") {
  const fs::path path = temp_file("blendnet_rejects.csv",
                                  "smiles_a,smiles_b,fraction_a,label,source_id\n"
                                  "# a comment line\n"
                                  "*CC*,*CC(C)*,0.5,compatible,ok\n"
                                  "*CC*,*CC(C)*,0.5,sorta,bad-label\n"
                                  "*CC*,*CC(C)*,1.5,compatible,bad-fraction\n"
                                  "*CQ*,*CC(C)*,0.5,compatible,bad-smiles\n"
                                  "*CC*,*CC(C)*,0.5,compatible\n"
                                  "*CC*,*CC(C)*,x,compatible,bad-number\n"
                                  "*CC*,*CC(C)*,0.25,incompatible,ok2\n");
  const LoadResult loaded = load_entries(path);
  CHECK(loaded.entries.size() == 2);
  CHECK(loaded.rejects.size() == 5);
  CHECK(loaded.entries[0].source_id == "ok");
  CHECK(loaded.entries[1].label == Label::Incompatible);
  // row numbers are 1-based file lines
  CHECK(loaded.rejects[0].row == 4);
  CHECK(loaded.rejects[4].row == 8);
}

TEST_CASE("loader rejects missing files and foreign headers") {
  CHECK_THROWS_AS(load_entries("/nonexistent/nope.csv"), Error);
  const fs::path bad = temp_file("blendnet_badheader.csv", "a,b,c\n1,2,3\n");
  try {
    load_entries(bad);
    FAIL("expected BadHeader");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BadHeader);
  }
}

TEST_CASE("random split partitions by the requested ratios") {
  const std::vector<BlendEntry> entries = demo_entries(200);
  SplitSpec spec;
  spec.mode = SplitMode::Random;
  spec.seed = 5;
  const SplitResult r = split(entries, spec);

  CHECK(r.train.size() + r.valid.size() + r.test.size() == entries.size());
  CHECK(r.valid.size() == 32);  // round(200 * 0.16)
  CHECK(r.test.size() == 40);   // round(200 * 0.20)
  CHECK(r.train.size() == 128);

  // a partition: every entry appears exactly once
  auto key = [](const BlendEntry& e) {
    return e.smiles_a + "|" + e.smiles_b + "|" + std::to_string(e.fraction_a) + "|" + e.source_id;
  };
  std::multiset<std::string> seen;
  for (const auto* part : {&r.train, &r.valid, &r.test}) {
    for (const BlendEntry& e : *part) seen.insert(key(e));
  }
  std::multiset<std::string> expected;
  for (const BlendEntry& e : entries) expected.insert(key(e));
  CHECK(seen == expected);
}

TEST_CASE("random split is deterministic per seed and differs across seeds") {
  const std::vector<BlendEntry> entries = demo_entries(60);
  auto key = [](const BlendEntry& e) {
    return e.smiles_a + "|" + e.smiles_b + "|" + std::to_string(e.fraction_a);
  };

  SplitSpec a;
  a.mode = SplitMode::Random;
  a.seed = 1;
  SplitSpec b = a;
  const SplitResult r1 = split(entries, a);
  const SplitResult r2 = split(entries, b);
  REQUIRE(r1.train.size() == r2.train.size());
  for (std::size_t i = 0; i < r1.train.size(); ++i) {
    CHECK(key(r1.train[i]) == key(r2.train[i]));
  }

  SplitSpec c = a;
  c.seed = 2;
  const SplitResult r3 = split(entries, c);
  bool any_difference = r3.train.size() != r1.train.size();
  for (std::size_t i = 0; !any_difference && i < r1.train.size(); ++i) {
    any_difference = key(r1.train[i]) != key(r3.train[i]);
  }
  CHECK(any_difference);
}

TEST_CASE("balanced split equalizes classes and keeps test pairs unseen") {
  const std::vector<BlendEntry> entries = demo_entries(300);
  SplitSpec spec;
  spec.mode = SplitMode::Balanced;
  spec.seed = 3;
  const SplitResult r = split(entries, spec);

  for (const auto* part : {&r.train, &r.valid, &r.test}) {
    REQUIRE_FALSE(part->empty());
    CHECK(incompatible_rate(*part) == doctest::Approx(0.5));
  }

  std::set<std::pair<std::string, std::string>> test_pairs;
  for (const BlendEntry& e : r.test) test_pairs.insert(pair_key(e));
  for (const BlendEntry& e : r.train) CHECK(test_pairs.count(pair_key(e)) == 0);
  for (const BlendEntry& e : r.valid) CHECK(test_pairs.count(pair_key(e)) == 0);
}

TEST_CASE("split validates its spec and refuses degenerate inputs") {
  SplitSpec bad;
  bad.ratios = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(bad.validate(), Error);

  SplitSpec ok;
  const std::vector<BlendEntry> tiny = demo_entries(12);
  const std::vector<BlendEntry> too_small(tiny.begin(), tiny.begin() + 3);
  CHECK_THROWS_AS(split(too_small, ok), Error);
}

TEST_CASE("write_split_files emits three CSVs plus a manifest") {
  const std::vector<BlendEntry> entries = demo_entries(80);
  SplitSpec spec;
  spec.mode = SplitMode::Balanced;
  spec.seed = 9;
  const SplitResult r = split(entries, spec);

  const fs::path dir = fs::temp_directory_path() / "blendnet_split_out";
  fs::remove_all(dir);
  write_split_files(dir, r, spec);
  CHECK(fs::exists(dir / "train.csv"));
  CHECK(fs::exists(dir / "valid.csv"));
  CHECK(fs::exists(dir / "test.csv"));
  CHECK(fs::exists(dir / "manifest.json"));

  const LoadResult back = load_entries(dir / "train.csv");
  CHECK(back.entries.size() == r.train.size());

  std::ifstream in(dir / "manifest.json");
  std::string manifest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(manifest.find("\"mode\": \"balanced\"") != std::string::npos);
  CHECK(manifest.find("\"seed\": 9") != std::string::npos);
}

TEST_CASE("vectorize canonicalizes the pair orientation") {
  BlendEntry e;
  e.smiles_a = "*CC(C)*";
  e.smiles_b = "*CC(Cl)*";
  e.fraction_a = 0.3;
  e.label = Label::Incompatible;

  BlendEntry swapped = e;
  std::swap(swapped.smiles_a, swapped.smiles_b);
  swapped.fraction_a = 1.0 - e.fraction_a;

  const ModelInput a = vectorize(e);
  const ModelInput b = vectorize(swapped);
  CHECK(a == b);
  CHECK(a.target == 10.0);
  CHECK(a.composition == doctest::Approx(0.3));

  // the canonical-first fingerprint is lexicographically smallest
  CHECK(chem::canonical_pair_order(a.fp_first, a.fp_second) == chem::PairOrder::Keep);
}

TEST_CASE("vectorize folds the fraction when both fingerprints tie") {
  BlendEntry e;
  e.smiles_a = "*CC*";
  e.smiles_b = "*CC*";
  e.fraction_a = 0.8;
  const ModelInput lhs = vectorize(e);
  e.fraction_a = 1.0 - 0.8;
  const ModelInput rhs = vectorize(e);
  CHECK(lhs == rhs);
  CHECK(lhs.composition == doctest::Approx(0.2));
}

TEST_CASE("the swap identity is bit-exact for fractions that do not round-trip") {
  // 1 - (1 - x) lands an ulp away from x for most doubles below one half;
  // vectorize has to absorb that so the identity holds for every fraction.
  BlendEntry e;
  e.smiles_a = "*CC(C)*";
  e.smiles_b = "*CC(Cl)*";

  BlendEntry tie = e;
  tie.smiles_b = tie.smiles_a;

  for (int k = 1; k < 100; ++k) {
    for (const double x : {k / 100.0, k / 99.0, 0.01 * k + 1e-13}) {
      e.fraction_a = x;
      BlendEntry swapped = e;
      std::swap(swapped.smiles_a, swapped.smiles_b);
      swapped.fraction_a = 1.0 - x;
      CHECK(vectorize(e) == vectorize(swapped));

      tie.fraction_a = x;
      BlendEntry tie_swapped = tie;
      tie_swapped.fraction_a = 1.0 - x;
      CHECK(vectorize(tie) == vectorize(tie_swapped));
    }
  }
}

TEST_CASE("vectorize honors lambda and fingerprint params") {
  BlendEntry e;
  e.smiles_a = "*CC*";
  e.smiles_b = "*CC(C)*";
  e.label = Label::Incompatible;
  const ModelInput in = vectorize(e, 4.5, FingerprintParams{1, 128});
  CHECK(in.target == 4.5);
  CHECK(in.fp_first.width() == 128);
  CHECK(in.fp_first.radius() == 1);
}

TEST_CASE("synthetic generation is deterministic and carries its rule tag") {
  SyntheticSpec spec;
  spec.n = 50;
  spec.seed = 4;
  spec.fp.width = 512;
  const std::vector<BlendEntry> a = gen_synthetic(spec);
  const std::vector<BlendEntry> b = gen_synthetic(spec);
  REQUIRE(a.size() == 50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].smiles_a == b[i].smiles_a);
    CHECK(a[i].fraction_a == b[i].fraction_a);
    CHECK(a[i].label == b[i].label);
  }
  CHECK(a.front().source_id.find("synthetic:t0=0.25;alpha=0.3") != std::string::npos);

  for (const BlendEntry& e : a) {
    CHECK(e.smiles_a != e.smiles_b);  // partners drawn without replacement
    CHECK(e.fraction_a >= 0.05);
    CHECK(e.fraction_a <= 0.95);
  }
}

TEST_CASE("synthetic labels follow the similarity rule") {
  CHECK(synthetic_rule(0.30, 0.5, 0.25, 0.3));         // similar, mid blend
  CHECK_FALSE(synthetic_rule(0.20, 0.5, 0.25, 0.3));   // dissimilar, mid blend
  CHECK(synthetic_rule(0.14, 0.1, 0.25, 0.3));         // dissimilar but lopsided
  CHECK_FALSE(synthetic_rule(0.129, 0.1, 0.25, 0.3));  // below even the slack

  // reconstruct every label from the stored fingerprints
  SyntheticSpec spec;
  spec.n = 80;
  spec.seed = 21;
  spec.fp.width = 512;
  for (const BlendEntry& e : gen_synthetic(spec)) {
    const double t = chem::tanimoto(
        chem::ecfp_fingerprint(chem::parse_smiles(e.smiles_a), spec.fp.radius, spec.fp.width),
        chem::ecfp_fingerprint(chem::parse_smiles(e.smiles_b), spec.fp.radius, spec.fp.width));
    const Label expected = synthetic_rule(t, e.fraction_a, spec.t0, spec.alpha)
                               ? Label::Compatible
                               : Label::Incompatible;
    CHECK(e.label == expected);
  }
}

TEST_CASE("synthetic generation refuses a thin pool") {
  SyntheticSpec spec;
  spec.pool = {"*CC*", "*CC(C)*", "*CC*", "*CC*"};  // 2 distinct units
  try {
    gen_synthetic(spec);
    FAIL("expected PoolTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::PoolTooSmall);
  }
}
