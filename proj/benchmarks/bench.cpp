// Microbenchmarks for the hot paths: SMILES parsing, fingerprinting,
// blend vectorization, forward passes of every model variant, one training
// epoch, the exact binomial tail, and Shapley sampling. Narrow a run with
// --benchmark_filter=<regex>.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "blendnet/attrib/shapley.hpp"
#include "blendnet/chem/fingerprint.hpp"
#include "blendnet/chem/smiles.hpp"
#include "blendnet/data/synthetic.hpp"
#include "blendnet/data/vectorize.hpp"
#include "blendnet/models/model.hpp"
#include "blendnet/models/train.hpp"
#include "blendnet/rng.hpp"
#include "blendnet/stats/binomial.hpp"

namespace {

namespace attrib = blendnet::attrib;
namespace chem = blendnet::chem;
namespace data = blendnet::data;
namespace models = blendnet::models;
namespace stats = blendnet::stats;
using blendnet::Rng;

constexpr const char* kAspirin = "CC(=O)Oc1ccccc1C(=O)O";

data::ModelInput random_input(Rng& rng, int width, double density = 0.05) {
  data::ModelInput in;
  in.fp_first = chem::Fingerprint(width, 0);
  in.fp_second = chem::Fingerprint(width, 0);
  for (int b = 0; b < width; ++b) {
    if (rng.real01() < density) in.fp_first.set(b);
    if (rng.real01() < density) in.fp_second.set(b);
  }
  in.composition = rng.real01();
  return in;
}

void BM_ParseSmiles(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(chem::parse_smiles(kAspirin));
  }
}
BENCHMARK(BM_ParseSmiles);

void BM_Fingerprint(benchmark::State& state) {
  const chem::Molecule m = chem::parse_smiles(kAspirin);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chem::ecfp_fingerprint(m, 2, 2048));
  }
}
BENCHMARK(BM_Fingerprint);

void BM_Vectorize(benchmark::State& state) {
  data::BlendEntry entry;
  entry.smiles_a = "*CC(c1ccccc1)*";
  entry.smiles_b = "*CC(C)(C(=O)OC)*";
  entry.fraction_a = 0.35;
  for (auto _ : state) {
    benchmark::DoNotOptimize(data::vectorize(entry));
  }
}
BENCHMARK(BM_Vectorize);

// Forward pass of each variant at full dimensions, one blend at a time.
void BM_Predict(benchmark::State& state) {
  const models::ModelVariant variant =
      models::kAllVariants[static_cast<std::size_t>(state.range(0))];
  const models::ModelInstance model = models::build_model(variant, models::Dims{}, 1);
  Rng rng(7);
  const data::ModelInput input = random_input(rng, model.dims.fp_width);
  for (auto _ : state) {
    benchmark::DoNotOptimize(models::predict(model, input));
  }
  state.SetLabel(models::variant_name(variant));
}
BENCHMARK(BM_Predict)->DenseRange(0, 7);

void BM_TrainEpoch(benchmark::State& state) {
  models::Dims dims;
  dims.fp_width = 64;
  dims.feature_width = 16;
  dims.n_dense_layers = 2;
  dims.decision_widths = {8, 4};

  Rng rng(3);
  std::vector<data::ModelInput> train_set;
  std::vector<data::ModelInput> valid_set;
  for (int i = 0; i < 40; ++i) {
    train_set.push_back(random_input(rng, dims.fp_width, 0.2));
    train_set.back().target = (i % 2 == 0) ? 0.0 : data::kDefaultLambda;
  }
  for (int i = 0; i < 10; ++i) {
    valid_set.push_back(random_input(rng, dims.fp_width, 0.2));
    valid_set.back().target = (i % 2 == 0) ? 0.0 : data::kDefaultLambda;
  }

  const models::ModelInstance init =
      models::build_model(models::ModelVariant::Hddn, dims, 1);
  models::TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 10;
  cfg.learning_rate = 1e-3;
  cfg.seed = 2;

  for (auto _ : state) {
    benchmark::DoNotOptimize(models::train(init, train_set, valid_set, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(train_set.size()));
}
BENCHMARK(BM_TrainEpoch);

void BM_BinomPvalue(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::binom_pvalue(1530, 1159, 0.7307));
  }
}
BENCHMARK(BM_BinomPvalue);

void BM_ThetaAtSignificance(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::theta_at_significance(1530, 1159, 0.05));
  }
}
BENCHMARK(BM_ThetaAtSignificance);

void BM_ShapleySample(benchmark::State& state) {
  models::Dims dims;
  dims.fp_width = 32;
  dims.feature_width = 8;
  dims.n_dense_layers = 2;
  dims.decision_widths = {4, 2};
  const models::ModelInstance model =
      models::build_model(models::ModelVariant::Hddn, dims, 11);

  data::ModelInput instance;
  instance.fp_first = chem::Fingerprint(dims.fp_width, 0);
  instance.fp_second = chem::Fingerprint(dims.fp_width, 0);
  instance.fp_first.set(3);
  instance.fp_first.set(17);
  instance.fp_second.set(5);
  instance.fp_second.set(9);
  instance.composition = 0.4;

  const attrib::Baseline baseline = attrib::zero_baseline(model);
  const std::vector<attrib::FeatureId> features = attrib::default_features(model, instance);
  const int samples = static_cast<int>(state.range(0));

  for (auto _ : state) {
    benchmark::DoNotOptimize(
        attrib::shapley_sample(model, instance, baseline, features, samples, 13));
  }
  state.SetItemsProcessed(state.iterations() * samples);
}
BENCHMARK(BM_ShapleySample)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
