// blendnet: polymer blend compatibility toolkit.
//
// Subcommands cover the full workflow: fingerprint inspection (fp),
// synthetic data (gen-synth), dataset splitting (split), model training
// and evaluation (train/eval/ablate/predict/sweep), thermodynamic
// baselines (hsp/fh), the exact binomial confidence test (conftest), and
// Shapley attribution (attribute).
//
// Every command is deterministic given its flags and seeds, artifact
// directories get a manifest.json with the resolved configuration, and
// exit codes are 0 (success), 2 (usage or input validation), 3 (runtime
// failure).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "blendnet/attrib/shapley.hpp"
#include "blendnet/chem/fingerprint.hpp"
#include "blendnet/chem/smiles.hpp"
#include "blendnet/data/dataset.hpp"
#include "blendnet/data/split.hpp"
#include "blendnet/data/synthetic.hpp"
#include "blendnet/data/vectorize.hpp"
#include "blendnet/error.hpp"
#include "blendnet/models/checkpoint.hpp"
#include "blendnet/models/evaluate.hpp"
#include "blendnet/models/model.hpp"
#include "blendnet/models/sweep.hpp"
#include "blendnet/models/train.hpp"
#include "blendnet/report/svg.hpp"
#include "blendnet/stats/binomial.hpp"
#include "blendnet/text.hpp"
#include "blendnet/thermo/flory_huggins.hpp"
#include "blendnet/thermo/hsp.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

namespace attrib = blendnet::attrib;
namespace chem = blendnet::chem;
namespace data = blendnet::data;
namespace models = blendnet::models;
namespace report = blendnet::report;
namespace stats = blendnet::stats;
namespace thermo = blendnet::thermo;
using blendnet::Errc;
using blendnet::Error;
using blendnet::format_double;

// Validation problems in the user's input exit 2; failures while executing
// exit 3.
int exit_code_for(Errc code) {
  switch (code) {
    case Errc::DivergedLoss:
    case Errc::IoError:
    case Errc::ShapeMismatch:
    case Errc::TapeMismatch:
    case Errc::EmptyResult:
      return 3;
    default:
      return 2;
  }
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out || !(out << content)) {
    throw Error(Errc::IoError, "cannot write " + path.string());
  }
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<data::BlendEntry> load_dataset(const fs::path& path) {
  data::LoadResult loaded = data::load_entries(path);
  if (!loaded.rejects.empty()) {
    std::cerr << "warning: " << loaded.rejects.size() << " rejected row(s) in " << path.string()
              << " (first: row " << loaded.rejects.front().row << ", "
              << loaded.rejects.front().reason << ")\n";
  }
  if (loaded.entries.empty()) {
    throw Error(Errc::TooFewEntries, path.string() + " has no usable rows");
  }
  return std::move(loaded.entries);
}

data::SplitMode parse_mode(const std::string& name) {
  if (name == "random") return data::SplitMode::Random;
  if (name == "balanced") return data::SplitMode::Balanced;
  throw Error(Errc::DomainError, "split mode must be 'random' or 'balanced', got '" + name + "'");
}

json metrics_json(const stats::MetricsReport& m) {
  json j;
  j["mse"] = m.mse;
  auto put = [&j](const char* key, const std::optional<double>& v) {
    if (v) {
      j[key] = *v;
    } else {
      j[key] = nullptr;
    }
  };
  put("accuracy", m.accuracy);
  put("precision", m.precision);
  put("recall", m.recall);
  put("specificity", m.specificity);
  put("f1", m.f1);
  return j;
}

json eval_json(const models::EvalReport& r) {
  json j = metrics_json(r.metrics);
  j["confusion"] = {{"tp", r.confusion.tp},
                    {"fp", r.confusion.fp},
                    {"tn", r.confusion.tn},
                    {"fn", r.confusion.fn}};
  return j;
}

// ---------------------------------------------------------------------------
// fp

struct FpOptions {
  std::string smiles;
  int radius = chem::kDefaultFingerprintRadius;
  int width = chem::kDefaultFingerprintWidth;
  bool explain = false;
  std::string out;
};

void run_fp(const FpOptions& opt) {
  const chem::Molecule mol = chem::parse_smiles(opt.smiles);

  json j;
  j["smiles"] = opt.smiles;
  j["atoms"] = mol.atom_count();
  j["bonds"] = mol.bond_count();
  j["radius"] = opt.radius;
  j["width"] = opt.width;

  if (opt.explain) {
    std::vector<chem::BitOrigin> origins;
    const chem::Fingerprint fp =
        chem::ecfp_fingerprint_explain(mol, opt.radius, opt.width, origins);
    j["popcount"] = fp.popcount();
    j["bits"] = fp.set_bits();
    json table = json::array();
    for (const chem::BitOrigin& o : origins) {
      table.push_back(
          {{"bit", o.bit}, {"atom", o.atom}, {"radius", o.radius}, {"identifier", o.identifier}});
    }
    j["origins"] = std::move(table);
  } else {
    const chem::Fingerprint fp = chem::ecfp_fingerprint(mol, opt.radius, opt.width);
    j["popcount"] = fp.popcount();
    j["bits"] = fp.set_bits();
  }

  if (!opt.out.empty()) write_json(opt.out, j);
  print_json(j);
}

// ---------------------------------------------------------------------------
// gen-synth

struct GenSynthOptions {
  int n = 400;
  std::uint64_t seed = 0;
  double t0 = 0.25;
  double alpha = 0.30;
  int radius = chem::kDefaultFingerprintRadius;
  int width = chem::kDefaultFingerprintWidth;
  std::string pool_file;
  std::string out_dir;
};

std::vector<std::string> read_pool(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::MissingFile, "cannot open pool file " + path.string());
  }
  std::vector<std::string> pool;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view unit = blendnet::trim(line);
    if (unit.empty() || unit.front() == '#') continue;
    pool.emplace_back(unit);
  }
  return pool;
}

void run_gen_synth(const GenSynthOptions& opt) {
  data::SyntheticSpec spec;
  spec.n = opt.n;
  spec.seed = opt.seed;
  spec.t0 = opt.t0;
  spec.alpha = opt.alpha;
  spec.fp.radius = opt.radius;
  spec.fp.width = opt.width;
  if (!opt.pool_file.empty()) spec.pool = read_pool(opt.pool_file);

  const std::vector<data::BlendEntry> entries = data::gen_synthetic(spec);
  fs::create_directories(opt.out_dir);
  data::save_entries(fs::path(opt.out_dir) / "dataset.csv", entries);

  json manifest;
  manifest["command"] = "gen-synth";
  manifest["n"] = opt.n;
  manifest["seed"] = opt.seed;
  manifest["t0"] = opt.t0;
  manifest["alpha"] = opt.alpha;
  manifest["radius"] = opt.radius;
  manifest["width"] = opt.width;
  manifest["pool"] = opt.pool_file.empty() ? "default" : opt.pool_file;
  manifest["incompatible_rate"] = data::incompatible_rate(entries);
  write_json(fs::path(opt.out_dir) / "manifest.json", manifest);

  print_json({{"out", opt.out_dir},
              {"entries", entries.size()},
              {"incompatible_rate", data::incompatible_rate(entries)}});
}

// ---------------------------------------------------------------------------
// split

struct SplitOptions {
  std::string in;
  std::string out_dir;
  std::string mode = "random";
  std::uint64_t seed = 0;
  std::vector<double> ratios = {0.64, 0.16, 0.20};
};

data::SplitSpec split_spec_from(const std::string& mode, std::uint64_t seed,
                                const std::vector<double>& ratios) {
  data::SplitSpec spec;
  spec.mode = parse_mode(mode);
  spec.seed = seed;
  if (ratios.size() != 3) {
    throw Error(Errc::DomainError, "--ratios needs exactly 3 values (train,valid,test)");
  }
  std::copy(ratios.begin(), ratios.end(), spec.ratios.begin());
  spec.validate();
  return spec;
}

json counts_json(const data::SplitResult& result) {
  return {{"train", result.train.size()},
          {"valid", result.valid.size()},
          {"test", result.test.size()}};
}

void run_split(const SplitOptions& opt) {
  const data::SplitSpec spec = split_spec_from(opt.mode, opt.seed, opt.ratios);
  const std::vector<data::BlendEntry> entries = load_dataset(opt.in);
  const data::SplitResult result = data::split(entries, spec);
  data::write_split_files(opt.out_dir, result, spec);

  print_json({{"out", opt.out_dir},
              {"mode", opt.mode},
              {"counts", counts_json(result)},
              {"incompatible_rate",
               {{"train", data::incompatible_rate(result.train)},
                {"valid", data::incompatible_rate(result.valid)},
                {"test", data::incompatible_rate(result.test)}}}});
}

// ---------------------------------------------------------------------------
// shared network / training options

struct NetOptions {
  int radius = chem::kDefaultFingerprintRadius;
  int fp_width = chem::kDefaultFingerprintWidth;
  int feature_width = 256;
  int dense_layers = 3;
  std::vector<int> decision_widths = {64, 16};
};

models::Dims dims_from(const NetOptions& net) {
  models::Dims dims;
  dims.fp_width = net.fp_width;
  dims.feature_width = net.feature_width;
  dims.n_dense_layers = net.dense_layers;
  dims.decision_widths = net.decision_widths;
  dims.validate();
  return dims;
}

void add_net_options(CLI::App* cmd, NetOptions& net) {
  cmd->add_option("--radius", net.radius, "Fingerprint radius")->capture_default_str();
  cmd->add_option("--width", net.fp_width, "Fingerprint width (power of two)")
      ->capture_default_str();
  cmd->add_option("--feature-width", net.feature_width, "Feature layer width")
      ->capture_default_str();
  cmd->add_option("--dense-layers", net.dense_layers, "Dense-connected layers per tower")
      ->capture_default_str();
  cmd->add_option("--decision-widths", net.decision_widths,
                  "Decision stack hidden widths, comma separated")
      ->delimiter(',')
      ->capture_default_str();
}

json dims_json(const models::Dims& dims) {
  return {{"fp_width", dims.fp_width},
          {"feature_width", dims.feature_width},
          {"n_dense_layers", dims.n_dense_layers},
          {"decision_widths", dims.decision_widths}};
}

struct FitOptions {
  int epochs = 1000;
  int batch_size = 20;
  double learning_rate = 0.0;  // 0 = pick by split mode
  double lambda = data::kDefaultLambda;
  std::uint64_t seed = 0;
  NetOptions net;
};

void add_fit_options(CLI::App* cmd, FitOptions& opt) {
  cmd->add_option("--epochs", opt.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--batch", opt.batch_size, "Mini-batch size")->capture_default_str();
  cmd->add_option("--lr", opt.learning_rate,
                  "Learning rate (default 1e-4 for balanced splits, 5e-5 for random)");
  cmd->add_option("--lambda", opt.lambda, "Regression target for incompatible blends")
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed, "Seed for initial weights and batch order")
      ->capture_default_str();
  add_net_options(cmd, opt.net);
}

double default_learning_rate(data::SplitMode mode) {
  return mode == data::SplitMode::Random ? 5e-5 : 1e-4;
}

// The split manifest records which protocol produced the data; the two
// protocols train best at different rates.
double resolve_learning_rate(double flag_value, const fs::path& split_dir) {
  if (flag_value > 0.0) return flag_value;
  std::ifstream in(split_dir / "manifest.json");
  if (in) {
    try {
      json manifest;
      in >> manifest;
      if (manifest.value("mode", "") == "random") {
        return default_learning_rate(data::SplitMode::Random);
      }
    } catch (const json::exception&) {
      // unreadable manifest, fall through to the balanced default
    }
  }
  return default_learning_rate(data::SplitMode::Balanced);
}

void write_history_csv(const fs::path& path, const models::TrainHistory& history) {
  std::string csv = "epoch,train_loss,valid_accuracy\n";
  for (std::size_t e = 0; e < history.train_loss.size(); ++e) {
    csv += std::to_string(e) + "," + format_double(history.train_loss[e]) + "," +
           format_double(history.valid_accuracy[e]) + "\n";
  }
  write_text(path, csv);
}

json fit_manifest(const char* command, const std::string& variant, const FitOptions& opt,
                  double learning_rate) {
  json j;
  j["command"] = command;
  j["variant"] = variant;
  j["epochs"] = opt.epochs;
  j["batch_size"] = opt.batch_size;
  j["learning_rate"] = learning_rate;
  j["lambda"] = opt.lambda;
  j["seed"] = opt.seed;
  j["radius"] = opt.net.radius;
  j["dims"] = dims_json(dims_from(opt.net));
  return j;
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
  std::string in_dir;
  std::string out_dir;
  std::string variant = "HDDN";
  FitOptions fit;
};

void run_train(const TrainOptions& opt) {
  const models::ModelVariant variant = models::parse_variant(opt.variant);
  const models::Dims dims = dims_from(opt.fit.net);
  const double lr = resolve_learning_rate(opt.fit.learning_rate, opt.in_dir);

  models::TrainConfig cfg;
  cfg.epochs = opt.fit.epochs;
  cfg.batch_size = opt.fit.batch_size;
  cfg.learning_rate = lr;
  cfg.lambda = opt.fit.lambda;
  cfg.seed = opt.fit.seed;
  cfg.validate();

  const data::FingerprintParams fp{opt.fit.net.radius, dims.fp_width};
  const std::vector<data::ModelInput> train_set =
      data::vectorize_all(load_dataset(fs::path(opt.in_dir) / "train.csv"), cfg.lambda, fp);
  const std::vector<data::ModelInput> valid_set =
      data::vectorize_all(load_dataset(fs::path(opt.in_dir) / "valid.csv"), cfg.lambda, fp);

  const models::ModelInstance init = models::build_model(variant, dims, cfg.seed);
  const models::TrainResult result = models::train(init, train_set, valid_set, cfg);

  fs::create_directories(opt.out_dir);
  models::save_checkpoint(result.model, fs::path(opt.out_dir) / "checkpoint.json");
  write_history_csv(fs::path(opt.out_dir) / "history.csv", result.history);

  json manifest = fit_manifest("train", opt.variant, opt.fit, lr);
  manifest["in"] = opt.in_dir;
  write_json(fs::path(opt.out_dir) / "manifest.json", manifest);

  json summary;
  summary["out"] = opt.out_dir;
  summary["variant"] = opt.variant;
  summary["epochs_run"] = result.history.train_loss.size();
  summary["selected_epoch"] = result.history.selected_epoch;
  if (result.history.selected_epoch >= 0) {
    summary["valid_accuracy"] =
        result.history.valid_accuracy[static_cast<std::size_t>(result.history.selected_epoch)];
    summary["final_train_loss"] = result.history.train_loss.back();
  }
  print_json(summary);
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  std::string checkpoint;
  std::string in;
  std::string split_name = "test";
  int radius = chem::kDefaultFingerprintRadius;
  std::string out;
};

void run_eval(const EvalOptions& opt) {
  const models::ModelInstance model = models::load_checkpoint(opt.checkpoint);
  const data::FingerprintParams fp{opt.radius, model.dims.fp_width};
  const std::vector<data::ModelInput> inputs =
      data::vectorize_all(load_dataset(opt.in), model.lambda, fp);
  const models::EvalReport result = models::evaluate(model, inputs);

  json j = eval_json(result);
  j["variant"] = models::variant_name(model.variant);
  j["split"] = opt.split_name;
  j["repeats"] = 1;
  j["per_run"] = json::array({eval_json(result)});

  if (!opt.out.empty()) write_json(opt.out, j);
  print_json(j);
}

// ---------------------------------------------------------------------------
// ablate

struct AblateOptions {
  std::string in;
  std::string out_dir;
  std::string mode = "balanced";
  std::uint64_t split_seed = 0;
  std::vector<double> ratios = {0.64, 0.16, 0.20};
  std::vector<std::string> variants;  // empty = all eight
  int repeats = 5;
  FitOptions fit;
};

int worker_count(std::size_t jobs) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("BLENDNET_THREADS")) {
    int requested = 0;
    if (blendnet::parse_int(env, requested) && requested > 0) {
      n = static_cast<unsigned>(requested);
    }
  }
  return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

struct AblateJob {
  models::ModelVariant variant;
  int repeat = 0;
  std::uint64_t seed = 0;
  fs::path dir;
};

struct AblateRun {
  models::TrainHistory history;
  models::EvalReport report;
};

// Mean / min / max over the runs where the metric is defined.
json aggregate_metric(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int defined = 0;
  for (const std::optional<double>& v : values) {
    if (!v) continue;
    if (defined == 0) {
      lo = hi = *v;
    } else {
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
    }
    sum += *v;
    ++defined;
  }
  if (defined == 0) {
    return {{"mean", nullptr}, {"min", nullptr}, {"max", nullptr}};
  }
  return {{"mean", sum / defined}, {"min", lo}, {"max", hi}};
}

void run_ablate(const AblateOptions& opt) {
  const data::SplitSpec spec = split_spec_from(opt.mode, opt.split_seed, opt.ratios);
  const models::Dims dims = dims_from(opt.fit.net);
  const double lr = opt.fit.learning_rate > 0.0 ? opt.fit.learning_rate
                                                : default_learning_rate(spec.mode);

  std::vector<models::ModelVariant> variants;
  if (opt.variants.empty()) {
    variants.assign(models::kAllVariants.begin(), models::kAllVariants.end());
  } else {
    for (const std::string& name : opt.variants) variants.push_back(models::parse_variant(name));
  }
  if (opt.repeats < 1) {
    throw Error(Errc::DomainError, "--repeats must be at least 1");
  }

  models::TrainConfig cfg;
  cfg.epochs = opt.fit.epochs;
  cfg.batch_size = opt.fit.batch_size;
  cfg.learning_rate = lr;
  cfg.lambda = opt.fit.lambda;
  cfg.seed = opt.fit.seed;
  cfg.validate();

  const std::vector<data::BlendEntry> entries = load_dataset(opt.in);
  const data::SplitResult splits = data::split(entries, spec);
  data::write_split_files(fs::path(opt.out_dir) / "split", splits, spec);

  const data::FingerprintParams fp{opt.fit.net.radius, dims.fp_width};
  const std::vector<data::ModelInput> train_set =
      data::vectorize_all(splits.train, cfg.lambda, fp);
  const std::vector<data::ModelInput> valid_set =
      data::vectorize_all(splits.valid, cfg.lambda, fp);
  const std::vector<data::ModelInput> test_set = data::vectorize_all(splits.test, cfg.lambda, fp);

  const fs::path runs_dir = fs::path(opt.out_dir) / "runs";
  fs::create_directories(runs_dir);

  std::vector<AblateJob> jobs;
  for (const models::ModelVariant variant : variants) {
    for (int r = 0; r < opt.repeats; ++r) {
      AblateJob job;
      job.variant = variant;
      job.repeat = r;
      job.seed = cfg.seed + static_cast<std::uint64_t>(r);
      job.dir = runs_dir /
                (std::string(models::variant_name(variant)) + "-r" + std::to_string(r));
      jobs.push_back(std::move(job));
    }
  }

  // Worker pool over the variant x repeat grid. Each job is internally
  // deterministic and writes only to its own directory, so the schedule
  // does not affect any output byte.
  std::vector<AblateRun> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto work = [&]() {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) break;
      try {
        const AblateJob& job = jobs[i];
        models::TrainConfig job_cfg = cfg;
        job_cfg.seed = job.seed;
        const models::ModelInstance init = models::build_model(job.variant, dims, job.seed);
        models::TrainResult trained = models::train(init, train_set, valid_set, job_cfg);
        fs::create_directories(job.dir);
        models::save_checkpoint(trained.model, job.dir / "checkpoint.json");
        write_history_csv(job.dir / "history.csv", trained.history);
        results[i].report = models::evaluate(trained.model, test_set);
        results[i].history = std::move(trained.history);
      } catch (...) {
        std::scoped_lock lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    }
  };

  const int n_workers = worker_count(jobs.size());
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w) workers.emplace_back(work);
  for (std::thread& t : workers) t.join();
  if (first_error) std::rethrow_exception(first_error);

  // Assemble the per-variant rows in declaration order so reruns are
  // byte-identical regardless of the worker schedule.
  static constexpr const char* kMetricKeys[] = {"mse",    "accuracy",    "precision",
                                                "recall", "specificity", "f1"};
  json rows = json::array();
  std::string csv = "variant,mse,accuracy,precision,recall,specificity,f1\n";
  std::optional<double> hddn_mean_accuracy;

  for (std::size_t v = 0; v < variants.size(); ++v) {
    json per_run = json::array();
    std::vector<std::vector<std::optional<double>>> columns(std::size(kMetricKeys));
    for (int r = 0; r < opt.repeats; ++r) {
      const std::size_t i = v * static_cast<std::size_t>(opt.repeats) + static_cast<std::size_t>(r);
      const stats::MetricsReport& m = results[i].report.metrics;
      columns[0].push_back(m.mse);
      columns[1].push_back(m.accuracy);
      columns[2].push_back(m.precision);
      columns[3].push_back(m.recall);
      columns[4].push_back(m.specificity);
      columns[5].push_back(m.f1);
      json run = eval_json(results[i].report);
      run["seed"] = jobs[i].seed;
      run["selected_epoch"] = results[i].history.selected_epoch;
      per_run.push_back(std::move(run));
    }

    json row;
    row["variant"] = models::variant_name(variants[v]);
    row["split"] = "test";
    row["repeats"] = opt.repeats;
    csv += models::variant_name(variants[v]);
    for (std::size_t k = 0; k < std::size(kMetricKeys); ++k) {
      const json agg = aggregate_metric(columns[k]);
      row[kMetricKeys[k]] = agg["mean"];
      row["spread"][kMetricKeys[k]] = agg;
      csv += ",";
      if (!agg["mean"].is_null()) csv += format_double(agg["mean"].get<double>());
    }
    csv += "\n";
    row["per_run"] = std::move(per_run);

    if (variants[v] == models::ModelVariant::Hddn && !row["accuracy"].is_null()) {
      hddn_mean_accuracy = row["accuracy"].get<double>();
    }
    rows.push_back(std::move(row));
  }

  json reportj;
  reportj["split_counts"] = counts_json(splits);
  reportj["rows"] = rows;
  write_json(fs::path(opt.out_dir) / "report.json", reportj);
  write_text(fs::path(opt.out_dir) / "report.csv", csv);

  json manifest = fit_manifest("ablate", "all", opt.fit, lr);
  manifest.erase("variant");
  json variant_names = json::array();
  for (const models::ModelVariant variant : variants) {
    variant_names.push_back(models::variant_name(variant));
  }
  manifest["variants"] = std::move(variant_names);
  manifest["repeats"] = opt.repeats;
  manifest["mode"] = opt.mode;
  manifest["split_seed"] = opt.split_seed;
  manifest["ratios"] = opt.ratios;
  manifest["in"] = opt.in;
  write_json(fs::path(opt.out_dir) / "manifest.json", manifest);

  // A weak flagship model on a balanced division is a regression signal,
  // not an error: warn and exit 0.
  if (spec.mode == data::SplitMode::Balanced && hddn_mean_accuracy &&
      *hddn_mean_accuracy < 0.65) {
    std::cerr << "warning: HDDN mean test accuracy "
              << format_double(*hddn_mean_accuracy)
              << " is below 0.65 on a balanced division; treating as a regression warning\n";
  }

  print_json({{"out", opt.out_dir},
              {"jobs", jobs.size()},
              {"workers", n_workers},
              {"rows", rows.size()}});
}

// ---------------------------------------------------------------------------
// predict

struct PredictOptions {
  std::string checkpoint;
  std::string a;
  std::string b;
  double fraction = 0.5;
  int radius = chem::kDefaultFingerprintRadius;
};

void run_predict(const PredictOptions& opt) {
  const models::ModelInstance model = models::load_checkpoint(opt.checkpoint);
  data::BlendEntry entry;
  entry.smiles_a = opt.a;
  entry.smiles_b = opt.b;
  entry.fraction_a = opt.fraction;
  const data::FingerprintParams fp{opt.radius, model.dims.fp_width};
  const double score = models::predict(model, data::vectorize(entry, model.lambda, fp));

  print_json({{"a", opt.a},
              {"b", opt.b},
              {"fraction_a", opt.fraction},
              {"variant", models::variant_name(model.variant)},
              {"score", score},
              {"criterion", model.criterion},
              {"label", data::label_name(models::classify(score, model.criterion))}});
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
  std::string checkpoint;
  std::string a;
  std::string b;
  int steps = 21;
  int radius = chem::kDefaultFingerprintRadius;
  std::string out_dir;
};

void run_sweep(const SweepOptions& opt) {
  const models::ModelInstance model = models::load_checkpoint(opt.checkpoint);
  const models::SweepResult sweep =
      models::composition_sweep(model, opt.a, opt.b, opt.steps, opt.radius);

  json points = json::array();
  for (const models::SweepPoint& p : sweep.points) {
    points.push_back({{"fraction_a", p.fraction_a}, {"score", p.score}});
  }

  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);

    std::string csv = "fraction_a,score\n";
    for (const models::SweepPoint& p : sweep.points) {
      csv += format_double(p.fraction_a) + "," + format_double(p.score) + "\n";
    }
    write_text(fs::path(opt.out_dir) / "sweep.csv", csv);

    report::LinePlot plot;
    plot.title = std::string(models::variant_name(model.variant)) + " composition sweep";
    plot.x_label = "fraction_a";
    plot.y_label = "score";
    for (const models::SweepPoint& p : sweep.points) {
      plot.x.push_back(p.fraction_a);
      plot.y.push_back(p.score);
    }
    plot.has_rule = true;
    plot.rule_y = sweep.criterion;
    write_text(fs::path(opt.out_dir) / "sweep.svg", report::line_plot_svg(plot));

    write_json(fs::path(opt.out_dir) / "manifest.json",
               {{"command", "sweep"},
                {"checkpoint", opt.checkpoint},
                {"a", opt.a},
                {"b", opt.b},
                {"steps", opt.steps},
                {"radius", opt.radius},
                {"criterion", sweep.criterion}});
  }

  print_json({{"a", opt.a},
              {"b", opt.b},
              {"criterion", sweep.criterion},
              {"points", points}});
}

// ---------------------------------------------------------------------------
// hsp

struct HspOptions {
  std::string table;
  std::string a;
  std::string b;
  double fraction = 0.5;
  double threshold = thermo::kDefaultHeatThreshold;
};

void run_hsp(const HspOptions& opt) {
  const std::vector<thermo::HspRecord> table = thermo::load_hsp_table(opt.table);
  const thermo::HspRecord& a = thermo::find_record(table, opt.a);
  const thermo::HspRecord& b = thermo::find_record(table, opt.b);
  const thermo::HspVerdict verdict = thermo::hsp_classify(a, b, opt.fraction, opt.threshold);

  print_json({{"a", opt.a},
              {"b", opt.b},
              {"fraction_a", opt.fraction},
              {"delta_a", a.delta},
              {"delta_b", b.delta},
              {"heat_of_mixing", verdict.heat_of_mixing},
              {"threshold", opt.threshold},
              {"label", data::label_name(verdict.label)}});
}

// ---------------------------------------------------------------------------
// fh

struct FhOptions {
  double n1 = 1.0;
  double n2 = 1.0;
  double phi1 = 0.5;
  double phi2 = 0.5;
  double chi = 0.0;
};

void run_fh(const FhOptions& opt) {
  thermo::FloryHugginsInput input;
  input.n1 = opt.n1;
  input.n2 = opt.n2;
  input.phi1 = opt.phi1;
  input.phi2 = opt.phi2;
  input.chi12 = opt.chi;
  const double dg = thermo::flory_huggins_dg(input);

  print_json({{"n1", opt.n1},
              {"n2", opt.n2},
              {"phi1", opt.phi1},
              {"phi2", opt.phi2},
              {"chi12", opt.chi},
              {"dg_over_rt", dg}});
}

// ---------------------------------------------------------------------------
// conftest

struct ConftestOptions {
  std::int64_t n = 0;
  std::int64_t x0 = 0;
  double theta0 = -1.0;
  double alpha = -1.0;
};

void run_conftest(const ConftestOptions& opt) {
  const bool have_theta = opt.theta0 >= 0.0;
  const bool have_alpha = opt.alpha >= 0.0;
  if (have_theta == have_alpha) {
    throw Error(Errc::DomainError, "give exactly one of --theta0 (forward) or --alpha (inverse)");
  }

  if (have_theta) {
    const double p = stats::binom_pvalue(opt.n, opt.x0, opt.theta0);
    print_json({{"n", opt.n}, {"x0", opt.x0}, {"theta0", opt.theta0}, {"p_value", p}});
  } else {
    const double theta0 = stats::theta_at_significance(opt.n, opt.x0, opt.alpha);
    print_json({{"n", opt.n}, {"x0", opt.x0}, {"alpha", opt.alpha}, {"theta0", theta0}});
  }
}

// ---------------------------------------------------------------------------
// attribute

struct AttributeOptions {
  std::string checkpoint;
  std::string a;
  std::string b;
  double fraction = 0.5;
  int samples = 2000;
  std::uint64_t seed = 7;
  int radius = chem::kDefaultFingerprintRadius;
  bool exact = false;
  // Structure comparison: active when --dimension is given. The lacking
  // pair defaults to the normal pair, which yields identical curves.
  int dimension = -1;
  std::string lacking_a;
  std::string lacking_b;
  int sweep_steps = 21;
  int n_fractions = 10;
  std::string out_dir;
};

const char* slot_name(attrib::FeatureId::Slot slot) {
  switch (slot) {
    case attrib::FeatureId::Slot::FirstFp:
      return "fp_first";
    case attrib::FeatureId::Slot::SecondFp:
      return "fp_second";
    default:
      return "composition";
  }
}

json sweep_points_json(const models::SweepResult& sweep) {
  json points = json::array();
  for (const models::SweepPoint& p : sweep.points) {
    points.push_back({{"fraction_a", p.fraction_a}, {"score", p.score}});
  }
  return points;
}

void run_attribute_compare(const AttributeOptions& opt, const models::ModelInstance& model) {
  const std::string lacking_a = opt.lacking_a.empty() ? opt.a : opt.lacking_a;
  const std::string lacking_b = opt.lacking_b.empty() ? opt.b : opt.lacking_b;

  const attrib::StructureComparison cmp = attrib::compare_structures(
      model, opt.a, opt.b, lacking_a, lacking_b, opt.dimension, opt.sweep_steps, opt.n_fractions,
      opt.samples, opt.seed, opt.radius);

  json j;
  j["dimension"] = opt.dimension;
  j["criterion"] = cmp.normal_sweep.criterion;
  j["normal"] = {{"a", opt.a}, {"b", opt.b}, {"sweep", sweep_points_json(cmp.normal_sweep)}};
  j["lacking"] = {{"a", lacking_a},
                  {"b", lacking_b},
                  {"sweep", sweep_points_json(cmp.lacking_sweep)}};
  j["fractions"] = cmp.fractions;
  j["phi_normal"] = cmp.phi_normal;
  j["phi_lacking"] = cmp.phi_lacking;

  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);
    write_json(fs::path(opt.out_dir) / "report.json", j);

    auto sweep_svg = [&](const models::SweepResult& sweep, const std::string& title) {
      report::LinePlot plot;
      plot.title = title;
      plot.x_label = "fraction_a";
      plot.y_label = "score";
      for (const models::SweepPoint& p : sweep.points) {
        plot.x.push_back(p.fraction_a);
        plot.y.push_back(p.score);
      }
      plot.has_rule = true;
      plot.rule_y = sweep.criterion;
      return report::line_plot_svg(plot);
    };
    write_text(fs::path(opt.out_dir) / "normal_sweep.svg",
               sweep_svg(cmp.normal_sweep, "normal pair"));
    write_text(fs::path(opt.out_dir) / "lacking_sweep.svg",
               sweep_svg(cmp.lacking_sweep, "lacking pair"));

    report::StripPlot normal_phi{"phi of dimension " + std::to_string(opt.dimension) + " (normal)",
                                 "phi", cmp.phi_normal};
    report::StripPlot lacking_phi{
        "phi of dimension " + std::to_string(opt.dimension) + " (lacking)", "phi",
        cmp.phi_lacking};
    write_text(fs::path(opt.out_dir) / "phi_normal.svg", report::strip_plot_svg(normal_phi));
    write_text(fs::path(opt.out_dir) / "phi_lacking.svg", report::strip_plot_svg(lacking_phi));

    write_json(fs::path(opt.out_dir) / "manifest.json",
               {{"command", "attribute"},
                {"checkpoint", opt.checkpoint},
                {"a", opt.a},
                {"b", opt.b},
                {"lacking_a", lacking_a},
                {"lacking_b", lacking_b},
                {"dimension", opt.dimension},
                {"fraction", opt.fraction},
                {"samples", opt.samples},
                {"seed", opt.seed},
                {"radius", opt.radius},
                {"sweep_steps", opt.sweep_steps},
                {"n_fractions", opt.n_fractions}});
  }
  print_json(j);
}

void run_attribute(const AttributeOptions& opt) {
  const models::ModelInstance model = models::load_checkpoint(opt.checkpoint);
  if (opt.dimension >= 0) {
    run_attribute_compare(opt, model);
    return;
  }

  data::BlendEntry entry;
  entry.smiles_a = opt.a;
  entry.smiles_b = opt.b;
  entry.fraction_a = opt.fraction;
  const data::FingerprintParams fp{opt.radius, model.dims.fp_width};
  const data::ModelInput instance = data::vectorize(entry, model.lambda, fp);

  const attrib::Baseline baseline = attrib::zero_baseline(model);
  const std::vector<attrib::FeatureId> features = attrib::default_features(model, instance);
  const attrib::AttributionReport result =
      opt.exact ? attrib::exact_shapley(model, instance, baseline, features)
                : attrib::shapley_sample(model, instance, baseline, features, opt.samples,
                                         opt.seed);

  json rows = json::array();
  for (std::size_t i = 0; i < result.features.size(); ++i) {
    rows.push_back({{"feature", attrib::feature_name(result.features[i])},
                    {"slot", slot_name(result.features[i].slot)},
                    {"bit", result.features[i].bit},
                    {"phi", result.phi[i]}});
  }

  json j;
  j["a"] = opt.a;
  j["b"] = opt.b;
  j["fraction_a"] = opt.fraction;
  j["mode"] = opt.exact ? "exact" : "sampled";
  j["samples"] = opt.exact ? 0 : opt.samples;
  j["seed"] = opt.seed;
  j["baseline_value"] = result.baseline_value;
  j["instance_value"] = result.instance_value;
  j["residual"] = result.residual;
  j["features"] = std::move(rows);

  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);
    write_json(fs::path(opt.out_dir) / "report.json", j);
    report::StripPlot plot{"Shapley attribution", "phi", result.phi};
    write_text(fs::path(opt.out_dir) / "phi.svg", report::strip_plot_svg(plot));
    write_json(fs::path(opt.out_dir) / "manifest.json",
               {{"command", "attribute"},
                {"checkpoint", opt.checkpoint},
                {"a", opt.a},
                {"b", opt.b},
                {"fraction", opt.fraction},
                {"mode", opt.exact ? "exact" : "sampled"},
                {"samples", opt.samples},
                {"seed", opt.seed},
                {"radius", opt.radius}});
  }
  print_json(j);
}

// ---------------------------------------------------------------------------
// wiring

void setup_commands(CLI::App& app) {
  app.require_subcommand(1);

  {
    auto opt = std::make_shared<FpOptions>();
    CLI::App* cmd = app.add_subcommand("fp", "Fingerprint a repeating unit and show its bits");
    cmd->set_config("--config");
    cmd->add_option("--smiles", opt->smiles, "Repeating unit SMILES")->required();
    cmd->add_option("--radius", opt->radius, "Fingerprint radius")->capture_default_str();
    cmd->add_option("--bits,--width", opt->width, "Fingerprint width (power of two)")
        ->capture_default_str();
    cmd->add_flag("--explain", opt->explain, "Include the per-bit environment table");
    cmd->add_option("--out", opt->out, "Also write the report to this JSON file");
    cmd->callback([opt] { run_fp(*opt); });
  }

  {
    auto opt = std::make_shared<GenSynthOptions>();
    CLI::App* cmd = app.add_subcommand("gen-synth", "Generate a labeled synthetic dataset");
    cmd->set_config("--config");
    cmd->add_option("--n", opt->n, "Number of entries")->capture_default_str();
    cmd->add_option("--seed", opt->seed, "Generator seed")->capture_default_str();
    cmd->add_option("--t0", opt->t0, "Similarity threshold of the labeling rule")
        ->capture_default_str();
    cmd->add_option("--alpha", opt->alpha, "Composition weight of the labeling rule")
        ->capture_default_str();
    cmd->add_option("--radius", opt->radius, "Fingerprint radius for the rule")
        ->capture_default_str();
    cmd->add_option("--width", opt->width, "Fingerprint width for the rule")
        ->capture_default_str();
    cmd->add_option("--pool", opt->pool_file, "File with one repeating-unit SMILES per line");
    cmd->add_option("--out", opt->out_dir, "Output directory")->required();
    cmd->callback([opt] { run_gen_synth(*opt); });
  }

  {
    auto opt = std::make_shared<SplitOptions>();
    CLI::App* cmd = app.add_subcommand("split", "Split a dataset into train/valid/test");
    cmd->set_config("--config");
    cmd->add_option("--in", opt->in, "Dataset CSV")->required();
    cmd->add_option("--out", opt->out_dir, "Output directory")->required();
    cmd->add_option("--mode", opt->mode, "random or balanced")->capture_default_str();
    cmd->add_option("--seed", opt->seed, "Shuffle seed")->capture_default_str();
    cmd->add_option("--ratios", opt->ratios, "train,valid,test ratios")
        ->delimiter(',')
        ->capture_default_str();
    cmd->callback([opt] { run_split(*opt); });
  }

  {
    auto opt = std::make_shared<TrainOptions>();
    CLI::App* cmd = app.add_subcommand("train", "Train one model variant on a split");
    cmd->set_config("--config");
    cmd->add_option("--in", opt->in_dir, "Split directory (train.csv, valid.csv)")->required();
    cmd->add_option("--out", opt->out_dir, "Run directory for checkpoint and history")
        ->required();
    cmd->add_option("--variant", opt->variant, "Model variant name")->capture_default_str();
    add_fit_options(cmd, opt->fit);
    cmd->callback([opt] { run_train(*opt); });
  }

  {
    auto opt = std::make_shared<EvalOptions>();
    CLI::App* cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
    cmd->set_config("--config");
    cmd->add_option("--checkpoint", opt->checkpoint, "Checkpoint JSON")->required();
    cmd->add_option("--in", opt->in, "Dataset CSV to score")->required();
    cmd->add_option("--split-name", opt->split_name, "Label for the report's split field")
        ->capture_default_str();
    cmd->add_option("--radius", opt->radius, "Fingerprint radius")->capture_default_str();
    cmd->add_option("--out", opt->out, "Also write the report to this JSON file");
    cmd->callback([opt] { run_eval(*opt); });
  }

  {
    auto opt = std::make_shared<AblateOptions>();
    CLI::App* cmd =
        app.add_subcommand("ablate", "Train and test every variant with repeated seeds");
    cmd->set_config("--config");
    cmd->add_option("--in", opt->in, "Dataset CSV")->required();
    cmd->add_option("--out", opt->out_dir, "Output directory")->required();
    cmd->add_option("--mode", opt->mode, "Split mode: random or balanced")
        ->capture_default_str();
    cmd->add_option("--split-seed", opt->split_seed, "Split shuffle seed")
        ->capture_default_str();
    cmd->add_option("--ratios", opt->ratios, "train,valid,test ratios")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--variants", opt->variants, "Variant subset (default: all eight)")
        ->delimiter(',');
    cmd->add_option("--repeats", opt->repeats, "Training repetitions per variant")
        ->capture_default_str();
    add_fit_options(cmd, opt->fit);
    cmd->callback([opt] { run_ablate(*opt); });
  }

  {
    auto opt = std::make_shared<PredictOptions>();
    CLI::App* cmd = app.add_subcommand("predict", "Score one blend with a checkpoint");
    cmd->set_config("--config");
    cmd->add_option("--checkpoint", opt->checkpoint, "Checkpoint JSON")->required();
    cmd->add_option("--a", opt->a, "Repeating unit SMILES of polymer A")->required();
    cmd->add_option("--b", opt->b, "Repeating unit SMILES of polymer B")->required();
    cmd->add_option("--fraction", opt->fraction, "Fraction of polymer A")->capture_default_str();
    cmd->add_option("--radius", opt->radius, "Fingerprint radius")->capture_default_str();
    cmd->callback([opt] { run_predict(*opt); });
  }

  {
    auto opt = std::make_shared<SweepOptions>();
    CLI::App* cmd = app.add_subcommand("sweep", "Score a pair across the composition range");
    cmd->set_config("--config");
    cmd->add_option("--checkpoint", opt->checkpoint, "Checkpoint JSON")->required();
    cmd->add_option("--a", opt->a, "Repeating unit SMILES of polymer A")->required();
    cmd->add_option("--b", opt->b, "Repeating unit SMILES of polymer B")->required();
    cmd->add_option("--steps", opt->steps, "Number of compositions")->capture_default_str();
    cmd->add_option("--radius", opt->radius, "Fingerprint radius")->capture_default_str();
    cmd->add_option("--out", opt->out_dir, "Directory for sweep.csv and sweep.svg");
    cmd->callback([opt] { run_sweep(*opt); });
  }

  {
    auto opt = std::make_shared<HspOptions>();
    CLI::App* cmd =
        app.add_subcommand("hsp", "Classify a blend by solubility-parameter heat of mixing");
    cmd->set_config("--config");
    cmd->add_option("--table", opt->table, "Solubility parameter CSV")->required();
    cmd->add_option("--a", opt->a, "Polymer A name in the table")->required();
    cmd->add_option("--b", opt->b, "Polymer B name in the table")->required();
    cmd->add_option("--fraction", opt->fraction, "Weight fraction of polymer A")
        ->capture_default_str();
    cmd->add_option("--threshold", opt->threshold, "Heat-of-mixing threshold, cal/mol")
        ->capture_default_str();
    cmd->callback([opt] { run_hsp(*opt); });
  }

  {
    auto opt = std::make_shared<FhOptions>();
    CLI::App* cmd = app.add_subcommand("fh", "Evaluate the mixing free energy over RT");
    cmd->set_config("--config");
    cmd->add_option("--n1", opt->n1, "Moles of component 1")->capture_default_str();
    cmd->add_option("--n2", opt->n2, "Moles of component 2")->capture_default_str();
    cmd->add_option("--phi1", opt->phi1, "Volume fraction of component 1")
        ->capture_default_str();
    cmd->add_option("--phi2", opt->phi2, "Volume fraction of component 2")
        ->capture_default_str();
    cmd->add_option("--chi", opt->chi, "Interaction parameter chi12")->capture_default_str();
    cmd->callback([opt] { run_fh(*opt); });
  }

  {
    auto opt = std::make_shared<ConftestOptions>();
    CLI::App* cmd =
        app.add_subcommand("conftest", "Exact binomial confidence test on an accuracy count");
    cmd->set_config("--config");
    cmd->add_option("--n", opt->n, "Number of trials")->required();
    cmd->add_option("--x0", opt->x0, "Number of successes")->required();
    cmd->add_option("--theta0", opt->theta0, "Null success rate: print P(X >= x0)");
    cmd->add_option("--alpha", opt->alpha, "Significance: print the theta0 giving this p-value");
    cmd->callback([opt] { run_conftest(*opt); });
  }

  {
    auto opt = std::make_shared<AttributeOptions>();
    CLI::App* cmd = app.add_subcommand("attribute", "Shapley attribution of one prediction");
    cmd->set_config("--config");
    cmd->add_option("--checkpoint", opt->checkpoint, "Checkpoint JSON")->required();
    cmd->add_option("--a", opt->a, "Repeating unit SMILES of polymer A")->required();
    cmd->add_option("--b", opt->b, "Repeating unit SMILES of polymer B")->required();
    cmd->add_option("--fraction", opt->fraction, "Fraction of polymer A")->capture_default_str();
    cmd->add_option("--samples", opt->samples, "Permutation samples")->capture_default_str();
    cmd->add_option("--seed", opt->seed, "Sampling seed")->capture_default_str();
    cmd->add_option("--radius", opt->radius, "Fingerprint radius")->capture_default_str();
    cmd->add_flag("--exact", opt->exact, "Enumerate coalitions exactly (<= 20 features)");
    cmd->add_option("--dimension", opt->dimension,
                    "Fingerprint bit to track across compositions (comparison mode)");
    cmd->add_option("--lacking-a", opt->lacking_a, "Edited polymer A for comparison mode");
    cmd->add_option("--lacking-b", opt->lacking_b, "Edited polymer B for comparison mode");
    cmd->add_option("--sweep-steps", opt->sweep_steps, "Sweep points in comparison mode")
        ->capture_default_str();
    cmd->add_option("--fractions", opt->n_fractions, "Sampled compositions in comparison mode")
        ->capture_default_str();
    cmd->add_option("--out", opt->out_dir, "Directory for report.json and SVG plots");
    cmd->callback([opt] { run_attribute(*opt); });
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polymer blend compatibility toolkit"};
  setup_commands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version land here too; app.exit() gives them exit 0.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
