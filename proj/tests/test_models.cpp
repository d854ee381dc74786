#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "blendnet/data/synthetic.hpp"
#include "blendnet/data/vectorize.hpp"
#include "blendnet/error.hpp"
#include "blendnet/models/checkpoint.hpp"
#include "blendnet/models/evaluate.hpp"
#include "blendnet/models/model.hpp"
#include "blendnet/models/sweep.hpp"
#include "blendnet/models/train.hpp"

using namespace blendnet;
using namespace blendnet::models;

namespace {

namespace fs = std::filesystem;

Dims toy_dims() {
  Dims d;
  d.fp_width = 32;
  d.feature_width = 8;
  d.n_dense_layers = 2;
  d.decision_widths = {4, 2};
  return d;
}

// All weights one, all biases zero, so layer outputs are simple sums that
// can be tracked by hand.
std::vector<double> ones_weights(const nn::Graph& g) {
  std::vector<double> flat;
  for (const nn::Node& n : g.nodes()) {
    if (n.kind != nn::OpKind::Linear || n.share >= 0) continue;
    flat.insert(flat.end(), n.weight.data().size(), 1.0);
    flat.insert(flat.end(), n.bias.size(), 0.0);
  }
  return flat;
}

data::ModelInput two_bit_input(bool a0, bool a1, bool b0, bool b1, double composition) {
  data::ModelInput in;
  in.fp_first = chem::Fingerprint(2, 0);
  in.fp_second = chem::Fingerprint(2, 0);
  if (a0) in.fp_first.set(0);
  if (a1) in.fp_first.set(1);
  if (b0) in.fp_second.set(0);
  if (b1) in.fp_second.set(1);
  in.composition = composition;
  return in;
}

std::vector<data::ModelInput> synthetic_inputs(int n, std::uint64_t seed, int width) {
  data::SyntheticSpec spec;
  spec.n = n;
  spec.seed = seed;
  spec.fp.width = width;
  return data::vectorize_all(data::gen_synthetic(spec), 10.0, data::FingerprintParams{2, width});
}

}  // namespace

TEST_CASE("variant names round-trip") {
  for (const ModelVariant v : kAllVariants) {
    CHECK(parse_variant(variant_name(v)) == v);
  }
  CHECK(parse_variant("HDDN") == ModelVariant::Hddn);
  CHECK(parse_variant("HDDN-nodiff") == ModelVariant::HddnNodiff);
  try {
    parse_variant("resnet");
    FAIL("expected UnknownVariant");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownVariant);
  }
}

TEST_CASE("dims are validated") {
  Dims d = toy_dims();
  CHECK_NOTHROW(d.validate());
  d.fp_width = 0;
  CHECK_THROWS_AS(d.validate(), Error);
  d = toy_dims();
  d.n_dense_layers = 0;
  CHECK_THROWS_AS(d.validate(), Error);
  d = toy_dims();
  d.decision_widths = {4, 0};
  CHECK_THROWS_AS(d.validate(), Error);
  d = toy_dims();
  d.decision_widths.clear();
  CHECK_NOTHROW(d.validate());  // decision stack may be a bare readout
}

TEST_CASE("hand-computed score for the flagship network") {
  // fp width 2, feature width 2, one dense layer, decision stack [2], all
  // weights 1 and biases 0. For fpA = {bit0}, fpB = {bit1}, x = 0.5:
  //   projection: both fingerprints sum to 1 per unit -> (1, 1)
  //   dense layer: sums the projection -> (2, 2) on both towers
  //   difference: |(2,2) - (2,2)| = (0, 0)
  //   decision: relu(W (0, 0, 0.5)) = (0.5, 0.5), readout = 1.0
  Dims d;
  d.fp_width = 2;
  d.feature_width = 2;
  d.n_dense_layers = 1;
  d.decision_widths = {2};
  ModelInstance m = build_model(ModelVariant::Hddn, d, 0);
  m.graph.set_params(ones_weights(m.graph));

  CHECK(predict(m, two_bit_input(true, false, false, true, 0.5)) == doctest::Approx(1.0));

  // fpA = {bit0, bit1}: projection (2,2), dense (4,4), difference (2,2),
  // decision relu(2 + 2 + 0.5) = 4.5 twice, readout 9.0
  CHECK(predict(m, two_bit_input(true, true, false, true, 0.5)) == doctest::Approx(9.0));

  // the composition-free variant sees only the zero difference
  ModelInstance noc = build_model(ModelVariant::HddnNoc, d, 0);
  noc.graph.set_params(ones_weights(noc.graph));
  CHECK(predict(noc, two_bit_input(true, false, false, true, 0.5)) == doctest::Approx(0.0));
}

TEST_CASE("every variant builds, runs, and differs from its siblings") {
  const Dims d = toy_dims();
  const std::vector<data::ModelInput> inputs = synthetic_inputs(6, 3, d.fp_width);
  for (const ModelVariant v : kAllVariants) {
    CAPTURE(variant_name(v));
    ModelInstance m = build_model(v, d, 42);
    CHECK(m.graph.param_count() > 0);
    const std::vector<double> scores = predict_batch(m, inputs);
    REQUIRE(scores.size() == inputs.size());
    for (const double s : scores) CHECK(std::isfinite(s));
  }
}

TEST_CASE("the single-tower variant concatenates both fingerprints") {
  const Dims d = toy_dims();
  const ModelInstance m = build_model(ModelVariant::HddnNodiff, d, 1);
  // first linear layer consumes both fingerprints at once
  for (const nn::Node& n : m.graph.nodes()) {
    if (n.kind == nn::OpKind::Linear) {
      CHECK(n.weight.cols() == static_cast<std::size_t>(2 * d.fp_width));
      break;
    }
  }
}

TEST_CASE("siamese variants are invariant under pair swap after vectorization") {
  data::SyntheticSpec spec;
  spec.n = 60;
  spec.seed = 17;
  spec.fp.width = 32;
  const std::vector<data::BlendEntry> entries = data::gen_synthetic(spec);
  const data::FingerprintParams fp{2, 32};

  const Dims d = toy_dims();
  for (const ModelVariant v : {ModelVariant::Hddn, ModelVariant::HddnNoc,
                               ModelVariant::HddnNodense, ModelVariant::HddnNoabs}) {
    const ModelInstance m = build_model(v, d, 5);
    for (const data::BlendEntry& e : entries) {
      data::BlendEntry swapped = e;
      std::swap(swapped.smiles_a, swapped.smiles_b);
      swapped.fraction_a = 1.0 - e.fraction_a;
      const double lhs = predict(m, data::vectorize(e, 10.0, fp));
      const double rhs = predict(m, data::vectorize(swapped, 10.0, fp));
      CHECK(lhs == rhs);  // bit-exact
    }
  }
}

TEST_CASE("the signed-difference variant is order-sensitive before canonicalization") {
  // All-ones weights make the towers popcount counters, so the outcome is
  // exact: with popcounts 2 vs 1 the signed difference flips from +72 per
  // unit to -72, and the negated version dies in the decision relu.
  const Dims d = toy_dims();
  ModelInstance m = build_model(ModelVariant::HddnNoabs, d, 9);
  m.graph.set_params(ones_weights(m.graph));

  // hand-built inputs bypass vectorize's canonical ordering
  data::ModelInput fwd;
  fwd.fp_first = chem::Fingerprint(d.fp_width, 0);
  fwd.fp_second = chem::Fingerprint(d.fp_width, 0);
  fwd.fp_first.set(1);
  fwd.fp_first.set(7);
  fwd.fp_second.set(19);
  fwd.composition = 0.3;

  data::ModelInput rev = fwd;
  std::swap(rev.fp_first, rev.fp_second);
  rev.composition = 0.7;

  CHECK(predict(m, fwd) == doctest::Approx(2 * 4 * (8 * 72 + 0.3)));
  CHECK(predict(m, rev) == 0.0);

  // the absolute-difference flagship shrugs at the same swap when the
  // composition is mirrored to match
  const ModelInstance flagship = build_model(ModelVariant::Hddn, d, 9);
  data::ModelInput rev_same_x = rev;
  rev_same_x.composition = fwd.composition;
  CHECK(predict(flagship, fwd) == predict(flagship, rev_same_x));
}

TEST_CASE("classification ties go to incompatible") {
  CHECK(classify(5.0, 5.0) == data::Label::Incompatible);
  CHECK(classify(5.0000001, 5.0) == data::Label::Incompatible);
  CHECK(classify(4.9999999, 5.0) == data::Label::Compatible);
}

TEST_CASE("pack_batch validates inputs") {
  const Dims d = toy_dims();
  const ModelInstance m = build_model(ModelVariant::Hddn, d, 0);
  std::vector<data::ModelInput> inputs = synthetic_inputs(4, 1, d.fp_width);

  CHECK_THROWS_AS(pack_batch(m, inputs, 2, 1), Error);  // inverted range
  CHECK_THROWS_AS(pack_batch(m, inputs, 0, 9), Error);  // past the end

  inputs[0].fp_first = chem::Fingerprint(64, 2);  // wrong width
  CHECK_THROWS_AS(pack_batch(m, inputs, 0, inputs.size()), Error);
}

TEST_CASE("training memorizes a two-point dataset") {
  Dims d;
  d.fp_width = 16;
  d.feature_width = 8;
  d.n_dense_layers = 1;
  d.decision_widths = {4};

  std::vector<data::ModelInput> points;
  data::ModelInput a;
  a.fp_first = chem::Fingerprint(16, 0);
  a.fp_second = chem::Fingerprint(16, 0);
  a.fp_first.set(3);
  a.fp_second.set(3);
  a.composition = 0.5;
  a.target = 0.0;
  points.push_back(a);

  data::ModelInput b = a;
  b.fp_second = chem::Fingerprint(16, 0);
  b.fp_second.set(11);
  b.target = 10.0;
  points.push_back(b);

  const ModelInstance init = build_model(ModelVariant::Hddn, d, 3);
  TrainConfig cfg;
  cfg.epochs = 400;
  cfg.batch_size = 2;
  cfg.learning_rate = 3e-2;
  cfg.seed = 3;
  const TrainResult r = train(init, points, points, cfg);

  CHECK(r.history.train_loss.size() == 400);
  CHECK(r.history.train_loss.back() < 0.1);
  CHECK(r.history.valid_accuracy[static_cast<std::size_t>(r.history.selected_epoch)] == 1.0);
  CHECK(predict(r.model, a) < r.model.criterion);
  CHECK(predict(r.model, b) >= r.model.criterion);
}

TEST_CASE("training is deterministic and returns the best validation epoch") {
  const Dims d = toy_dims();
  const std::vector<data::ModelInput> tr = synthetic_inputs(30, 8, d.fp_width);
  const std::vector<data::ModelInput> va = synthetic_inputs(10, 9, d.fp_width);

  const ModelInstance init = build_model(ModelVariant::Hddn, d, 2);
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.batch_size = 8;
  cfg.learning_rate = 1e-2;
  cfg.seed = 4;

  const TrainResult r1 = train(init, tr, va, cfg);
  const TrainResult r2 = train(init, tr, va, cfg);
  CHECK(r1.history.train_loss == r2.history.train_loss);
  CHECK(r1.model.graph.params() == r2.model.graph.params());

  REQUIRE(r1.history.selected_epoch >= 0);
  const double best = r1.history.valid_accuracy[static_cast<std::size_t>(r1.history.selected_epoch)];
  for (std::size_t e = 0; e < r1.history.valid_accuracy.size(); ++e) {
    CHECK(r1.history.valid_accuracy[e] <= best);
    if (r1.history.valid_accuracy[e] == best) {
      // earliest best epoch wins
      CHECK(static_cast<int>(e) >= r1.history.selected_epoch);
    }
  }
}

TEST_CASE("training rejects empty sets and reports divergence") {
  const Dims d = toy_dims();
  const ModelInstance init = build_model(ModelVariant::Hddn, d, 0);
  const std::vector<data::ModelInput> some = synthetic_inputs(8, 2, d.fp_width);
  TrainConfig cfg;
  cfg.epochs = 1;

  try {
    train(init, {}, some, cfg);
    FAIL("expected EmptySet");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptySet);
  }

  // zero epochs: legal no-op, initial weights come back untouched
  TrainConfig none = cfg;
  none.epochs = 0;
  const TrainResult r = train(init, some, some, none);
  CHECK(r.history.train_loss.empty());
  CHECK(r.history.selected_epoch == -1);
  CHECK(r.model.graph.params() == init.graph.params());

  // absurd starting weights overflow the forward pass immediately
  ModelInstance doomed = build_model(ModelVariant::Hddn, d, 0);
  std::vector<double> huge(doomed.graph.param_count(), 1e200);
  doomed.graph.set_params(huge);
  try {
    train(doomed, some, some, cfg);
    FAIL("expected DivergedLoss");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DivergedLoss);
  }
}

TEST_CASE("checkpoints round-trip weights bit-exactly") {
  const Dims d = toy_dims();
  ModelInstance m = build_model(ModelVariant::Cdn, d, 77);
  m.lambda = 8.0;
  m.criterion = 4.0;

  const fs::path path = fs::temp_directory_path() / "blendnet_ckpt.json";
  save_checkpoint(m, path);
  const ModelInstance back = load_checkpoint(path);

  CHECK(back.variant == ModelVariant::Cdn);
  CHECK(back.dims == m.dims);
  CHECK(back.lambda == 8.0);
  CHECK(back.criterion == 4.0);
  CHECK(back.graph.params() == m.graph.params());

  const std::vector<data::ModelInput> inputs = synthetic_inputs(5, 6, d.fp_width);
  for (const data::ModelInput& in : inputs) {
    CHECK(predict(back, in) == predict(m, in));
  }
}

TEST_CASE("checkpoint loading rejects bad files") {
  const fs::path dir = fs::temp_directory_path();

  CHECK_THROWS_AS(load_checkpoint(dir / "blendnet_no_such.json"), Error);

  auto write_file = [&](const std::string& name, const std::string& body) {
    const fs::path p = dir / name;
    std::ofstream out(p);
    out << body;
    return p;
  };

  try {
    load_checkpoint(write_file("blendnet_magic.json", R"({"magic":"NOPE","version":1})"));
    FAIL("expected BadMagic");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BadMagic);
  }

  try {
    load_checkpoint(write_file("blendnet_ver.json", R"({"magic":"HDDN","version":99})"));
    FAIL("expected VersionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::VersionMismatch);
  }

  try {
    load_checkpoint(write_file("blendnet_garbage.json", "not json at all"));
    FAIL("expected CorruptPayload");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CorruptPayload);
  }

  // a structurally valid header with a truncated weight array
  const Dims d = toy_dims();
  ModelInstance m = build_model(ModelVariant::Hddn, d, 1);
  const fs::path good = dir / "blendnet_good.json";
  save_checkpoint(m, good);
  std::ifstream in(good);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::size_t w0 = text.find("\"w0\": [");
  REQUIRE(w0 != std::string::npos);
  // drop one element from w0 by cutting everything up to the first comma
  const std::size_t open = text.find('[', w0);
  const std::size_t comma = text.find(',', open);
  text.erase(open + 1, comma - open);
  try {
    load_checkpoint(write_file("blendnet_short.json", text));
    FAIL("expected CorruptPayload");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CorruptPayload);
  }
}

TEST_CASE("evaluate scores a labeled set at the model criterion") {
  const Dims d = toy_dims();
  const std::vector<data::ModelInput> inputs = synthetic_inputs(40, 12, d.fp_width);
  const ModelInstance m = build_model(ModelVariant::Hddn, d, 12);

  const EvalReport r = evaluate(m, inputs);
  CHECK(r.confusion.total() == 40);
  CHECK(r.metrics.mse >= 0.0);
  REQUIRE(r.metrics.accuracy.has_value());
  CHECK(*r.metrics.accuracy >= 0.0);
  CHECK(*r.metrics.accuracy <= 1.0);

  CHECK_THROWS_AS(evaluate(m, {}), Error);
}

TEST_CASE("composition sweep is symmetric in the pair order") {
  const Dims d = toy_dims();
  const ModelInstance m = build_model(ModelVariant::Hddn, d, 21);

  const SweepResult ab = composition_sweep(m, "*CC(C)*", "*CC(Cl)*", 11);
  const SweepResult ba = composition_sweep(m, "*CC(Cl)*", "*CC(C)*", 11);
  REQUIRE(ab.points.size() == 11);
  CHECK(ab.criterion == m.criterion);
  for (std::size_t i = 0; i < ab.points.size(); ++i) {
    CHECK(ab.points[i].fraction_a == doctest::Approx(i / 10.0));
    CHECK(ab.points[i].score == ba.points[ab.points.size() - 1 - i].score);
  }

  CHECK_THROWS_AS(composition_sweep(m, "*CC*", "*CC(C)*", 1), Error);
}
