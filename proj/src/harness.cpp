#include "wwopt/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wwopt/csvio.hpp"
#include "wwopt/errors.hpp"
#include "wwopt/metrics.hpp"
#include "wwopt/rng.hpp"

namespace wwopt::harness {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Distinct sub-seed streams so the synthetic data, the split shuffle, the
// gradient noise, and the bench gradient stream never share rng draws.
constexpr std::uint64_t kSynthStream = 0x5f3759df;
constexpr std::uint64_t kSplitStream = 0x2545f491;
constexpr std::uint64_t kNoiseStream = 0x9e3779b9;
constexpr std::uint64_t kBenchStream = 0x6a09e667;

const double kNan = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void bad_config(const std::string& what) {
  throw ConfigError("config: " + what);
}

void expect_keys(const json& obj, const char* where,
                 std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known)
      bad_config(std::string(where) + ": unknown key \"" + item.key() + "\"");
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    bad_config(std::string("key \"") + key + "\" has the wrong type");
  }
}

// Unsigned integers parsed strictly: a negative value must fail loudly, not
// wrap around to a huge count.
std::size_t get_size(const json& obj, const char* key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0)
    return static_cast<std::size_t>(v.get<long long>());
  bad_config(std::string("key \"") + key +
             "\" must be a non-negative integer");
}

std::vector<std::uint64_t> parse_uint_array(const json& arr,
                                            const char* what) {
  if (!arr.is_array() || arr.empty())
    bad_config(std::string(what) +
               " must be a non-empty array of non-negative integers");
  std::vector<std::uint64_t> out;
  out.reserve(arr.size());
  for (const json& v : arr) {
    if (v.is_number_unsigned()) {
      out.push_back(v.get<std::uint64_t>());
    } else if (v.is_number_integer() && v.get<long long>() >= 0) {
      out.push_back(static_cast<std::uint64_t>(v.get<long long>()));
    } else {
      bad_config(std::string(what) +
                 " entries must be non-negative integers");
    }
  }
  return out;
}

fracmem::ScaleKind parse_scale(const json& value) {
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    if (s == "identity") return fracmem::ScaleKind::identity();
    if (s == "logarithmic") return fracmem::ScaleKind::logarithmic();
    bad_config("scale must be \"identity\", \"logarithmic\", or {\"power\": p}");
  }
  if (value.is_object()) {
    expect_keys(value, "scale", {"power"});
    if (value.contains("power") && value.at("power").is_number())
      return fracmem::ScaleKind::power(value.at("power").get<double>());
  }
  bad_config("scale must be \"identity\", \"logarithmic\", or {\"power\": p}");
}

fracmem::WeightKind parse_weight(const json& value) {
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    if (s == "constant") return fracmem::WeightKind::constant();
    bad_config("weight must be \"constant\" or {\"rational\": c}");
  }
  if (value.is_object()) {
    expect_keys(value, "weight", {"rational"});
    if (value.contains("rational") && value.at("rational").is_number())
      return fracmem::WeightKind::rational(value.at("rational").get<double>());
  }
  bad_config("weight must be \"constant\" or {\"rational\": c}");
}

ordered_json scale_to_json(const fracmem::ScaleKind& kind) {
  switch (kind.type()) {
    case fracmem::ScaleKind::Type::Identity:
      return "identity";
    case fracmem::ScaleKind::Type::Logarithmic:
      return "logarithmic";
    case fracmem::ScaleKind::Type::Power:
      return ordered_json{{"power", kind.exponent()}};
  }
  return "logarithmic";
}

ordered_json weight_to_json(const fracmem::WeightKind& kind) {
  if (kind.type() == fracmem::WeightKind::Type::Constant) return "constant";
  return ordered_json{{"rational", kind.decay()}};
}

DatasetSpec parse_dataset(const json& obj) {
  DatasetSpec spec;
  if (!obj.is_object()) bad_config("dataset must be an object");
  const std::string type = get_or<std::string>(obj, "type", "synthetic");
  if (type == "csv") {
    expect_keys(obj, "dataset",
                {"type", "path", "label_column", "positive_label"});
    spec.source = DatasetSpec::Source::Csv;
    spec.path = get_or<std::string>(obj, "path", "");
    spec.label_column = get_or<std::string>(obj, "label_column", "");
    spec.positive_label = get_or<std::string>(obj, "positive_label", "1");
  } else if (type == "synthetic") {
    expect_keys(obj, "dataset",
                {"type", "n", "d", "positive_rate", "separation"});
    spec.source = DatasetSpec::Source::Synthetic;
    spec.n = get_size(obj, "n", spec.n);
    spec.d = get_size(obj, "d", spec.d);
    spec.positive_rate = get_or<double>(obj, "positive_rate", spec.positive_rate);
    spec.separation = get_or<double>(obj, "separation", spec.separation);
  } else {
    bad_config("dataset.type must be \"csv\" or \"synthetic\"");
  }
  return spec;
}

OptimizerSpec parse_optimizer(const json& obj) {
  if (!obj.is_object()) bad_config("optimizer entries must be objects");
  OptimizerSpec spec;
  spec.kind = get_or<std::string>(obj, "kind", "");
  if (spec.kind == "classical") {
    expect_keys(obj, "optimizer", {"kind", "name", "learning_rate"});
    spec.learning_rate = get_or<double>(obj, "learning_rate", 0.1);
  } else if (spec.kind == "weyl") {
    expect_keys(obj, "optimizer",
                {"kind", "name", "learning_rate", "alpha", "window", "scale",
                 "weight", "normalize"});
    spec.weyl.learning_rate = get_or<double>(obj, "learning_rate", 0.1);
    spec.weyl.alpha = get_or<double>(obj, "alpha", spec.weyl.alpha);
    spec.weyl.window = get_size(obj, "window", spec.weyl.window);
    if (obj.contains("scale")) spec.weyl.scale = parse_scale(obj.at("scale"));
    if (obj.contains("weight"))
      spec.weyl.weight = parse_weight(obj.at("weight"));
    spec.weyl.normalize = get_or<bool>(obj, "normalize", spec.weyl.normalize);
  } else {
    bad_config("optimizer.kind must be \"classical\" or \"weyl\"");
  }
  spec.name = get_or<std::string>(obj, "name", spec.kind);
  return spec;
}

ordered_json optimizer_to_json(const OptimizerSpec& spec) {
  ordered_json out;
  out["kind"] = spec.kind;
  out["name"] = spec.name;
  out["learning_rate"] = spec.lr();
  if (spec.kind == "weyl") {
    out["alpha"] = spec.weyl.alpha;
    out["window"] = spec.weyl.window;
    out["scale"] = scale_to_json(spec.weyl.scale);
    out["weight"] = weight_to_json(spec.weyl.weight);
    out["normalize"] = spec.weyl.normalize;
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

// ---------------------------------------------------------------------------
// Shared per-seed run machinery

struct PreparedData {
  Dataset train;
  Dataset test;
};

PreparedData prepare_data(const ExperimentConfig& cfg, std::uint64_t seed) {
  Dataset full;
  if (cfg.dataset.source == DatasetSpec::Source::Csv) {
    full = data::load_csv(cfg.dataset.path, cfg.dataset.label_column,
                          cfg.dataset.positive_label);
  } else {
    full = data::synth_imbalanced(cfg.dataset.n, cfg.dataset.d,
                                  cfg.dataset.positive_rate,
                                  cfg.dataset.separation,
                                  mix_seed(seed, kSynthStream));
  }
  auto [train, test] = data::stratified_split(full, cfg.test_fraction,
                                              mix_seed(seed, kSplitStream));
  PreparedData prepared{std::move(train), std::move(test)};
  Dataset* others[] = {&prepared.test};
  data::standardize(prepared.train, others);
  return prepared;
}

std::unique_ptr<optim::Optimizer> make_optimizer(const OptimizerSpec& spec) {
  if (spec.kind == "classical")
    return std::make_unique<optim::ClassicalGd>(spec.learning_rate);
  return std::make_unique<optim::WeylOptimizer>(spec.weyl);
}

OptimizerRunResult run_single(const ExperimentConfig& cfg,
                              const OptimizerSpec& spec,
                              const PreparedData& data, std::uint64_t seed) {
  auto opt = make_optimizer(spec);

  TrainOptions topt;
  topt.epochs = cfg.epochs;
  topt.gradient_noise_std = cfg.gradient_noise_std;
  // One noise stream per seed, shared by every optimizer: paired runs see
  // identical noise, which is what makes per-seed comparisons meaningful.
  topt.noise_seed = mix_seed(seed, kNoiseStream);
  topt.eval_data = &data.test;

  TrainResult tr =
      train(LogisticModel::zeros(data.train.cols), data.train, *opt, topt);

  OptimizerRunResult res;
  res.name = spec.name;
  res.kind = spec.kind;
  res.final_train_loss = tr.trace.back().train_loss;
  res.final_test_loss = tr.trace.back().eval_loss.value();

  std::vector<double> probs(data.test.rows, 0.0);
  predict_proba(tr.model, data.test, probs);
  res.pr = metrics::pr_curve(probs, data.test.labels);
  res.test_pr_auc = res.pr.auc;

  std::vector<double> losses;
  losses.reserve(tr.trace.size());
  for (const TracePoint& p : tr.trace) losses.push_back(p.train_loss);
  res.train_trace_tv = metrics::total_variation(losses);

  res.seconds_per_step = tr.seconds / static_cast<double>(cfg.epochs);
  res.trace = std::move(tr.trace);
  return res;
}

void write_loss_csv(const LossTrace& trace, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "step,train_loss,test_loss\n";
  for (const TracePoint& p : trace) {
    out << p.step << ',' << full_precision(p.train_loss) << ',';
    if (p.eval_loss) out << full_precision(*p.eval_loss);
    out << '\n';
  }
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

ExperimentConfig::ExperimentConfig() {
  OptimizerSpec classical;
  classical.kind = "classical";
  classical.name = "classical";
  OptimizerSpec weyl;
  weyl.kind = "weyl";
  weyl.name = "weyl";
  optimizers = {classical, weyl};
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    bad_config(std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object()) bad_config("top level must be a JSON object");
  expect_keys(root, "config",
              {"dataset", "optimizers", "epochs", "test_fraction", "seeds",
               "gradient_noise_std", "alpha_grid", "out_dir", "bench"});

  ExperimentConfig cfg;
  if (root.contains("dataset")) cfg.dataset = parse_dataset(root.at("dataset"));
  if (root.contains("optimizers")) {
    const json& arr = root.at("optimizers");
    if (!arr.is_array() || arr.empty())
      bad_config("optimizers must be a non-empty array");
    cfg.optimizers.clear();
    for (const json& entry : arr)
      cfg.optimizers.push_back(parse_optimizer(entry));
  }
  cfg.epochs = get_size(root, "epochs", cfg.epochs);
  cfg.test_fraction = get_or<double>(root, "test_fraction", cfg.test_fraction);
  if (root.contains("seeds"))
    cfg.seeds = parse_uint_array(root.at("seeds"), "seeds");
  cfg.gradient_noise_std =
      get_or<double>(root, "gradient_noise_std", cfg.gradient_noise_std);
  if (root.contains("alpha_grid"))
    cfg.alpha_grid =
        get_or<std::vector<double>>(root, "alpha_grid", cfg.alpha_grid);
  cfg.out_dir = get_or<std::string>(root, "out_dir", cfg.out_dir);
  if (root.contains("bench")) {
    const json& b = root.at("bench");
    if (!b.is_object()) bad_config("bench must be an object");
    expect_keys(b, "bench",
                {"windows", "dimension", "steps_factor", "learning_rate"});
    if (b.contains("windows")) {
      cfg.bench.windows.clear();
      for (std::uint64_t w : parse_uint_array(b.at("windows"), "bench.windows"))
        cfg.bench.windows.push_back(static_cast<std::size_t>(w));
    }
    cfg.bench.dimension = get_size(b, "dimension", cfg.bench.dimension);
    cfg.bench.steps_factor =
        get_size(b, "steps_factor", cfg.bench.steps_factor);
    cfg.bench.learning_rate =
        get_or<double>(b, "learning_rate", cfg.bench.learning_rate);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw DataError(DataError::Kind::MissingFile,
                    "cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return from_json_text(text.str());
}

std::string ExperimentConfig::to_json_text() const {
  ordered_json out;
  ordered_json ds;
  if (dataset.source == DatasetSpec::Source::Csv) {
    ds["type"] = "csv";
    ds["path"] = dataset.path;
    ds["label_column"] = dataset.label_column;
    ds["positive_label"] = dataset.positive_label;
  } else {
    ds["type"] = "synthetic";
    ds["n"] = dataset.n;
    ds["d"] = dataset.d;
    ds["positive_rate"] = dataset.positive_rate;
    ds["separation"] = dataset.separation;
  }
  out["dataset"] = ds;
  out["optimizers"] = ordered_json::array();
  for (const OptimizerSpec& spec : optimizers)
    out["optimizers"].push_back(optimizer_to_json(spec));
  out["epochs"] = epochs;
  out["test_fraction"] = test_fraction;
  out["seeds"] = seeds;
  out["gradient_noise_std"] = gradient_noise_std;
  out["alpha_grid"] = alpha_grid;
  out["out_dir"] = out_dir;
  out["bench"] = ordered_json{{"windows", bench.windows},
                              {"dimension", bench.dimension},
                              {"steps_factor", bench.steps_factor},
                              {"learning_rate", bench.learning_rate}};
  return out.dump(2);
}

void ExperimentConfig::validate() const {
  if (epochs == 0) bad_config("epochs must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    bad_config("test_fraction must be in (0, 1)");
  if (seeds.empty()) bad_config("seeds must be non-empty");
  if (optimizers.empty()) bad_config("optimizers must be non-empty");
  if (!(gradient_noise_std >= 0.0) || !std::isfinite(gradient_noise_std))
    bad_config("gradient_noise_std must be finite and >= 0");
  for (const OptimizerSpec& spec : optimizers) {
    if (spec.kind != "classical" && spec.kind != "weyl")
      bad_config("optimizer kind \"" + spec.kind + "\" is not recognized");
    if (spec.name.empty() ||
        spec.name.find_first_of("/\\") != std::string::npos)
      bad_config("optimizer name \"" + spec.name +
                 "\" is empty or not file-name safe");
    if (spec.kind == "classical") {
      if (!(spec.learning_rate > 0.0) || !std::isfinite(spec.learning_rate))
        bad_config("learning_rate must be positive and finite");
    } else {
      spec.weyl.validate();
    }
    for (const OptimizerSpec& other : optimizers) {
      if (&other != &spec && other.name == spec.name)
        bad_config("duplicate optimizer name \"" + spec.name +
                   "\"; give each spec a distinct name");
    }
  }
  for (double a : alpha_grid) {
    if (!(a > 0.0 && a < 1.0))
      bad_config("alpha_grid values must lie in (0, 1)");
  }
  if (dataset.source == DatasetSpec::Source::Csv) {
    if (dataset.path.empty()) bad_config("dataset.path must be set");
    if (dataset.label_column.empty())
      bad_config("dataset.label_column must be set");
  } else {
    if (dataset.n == 0 || dataset.d == 0)
      bad_config("synthetic dataset needs n >= 1 and d >= 1");
    if (!(dataset.positive_rate > 0.0 && dataset.positive_rate < 0.5))
      bad_config("positive_rate must be in (0, 0.5)");
    if (!(dataset.separation >= 0.0) || !std::isfinite(dataset.separation))
      bad_config("separation must be finite and >= 0");
  }
  if (bench.windows.empty()) bad_config("bench windows must be non-empty");
  for (std::size_t w : bench.windows) {
    if (w == 0) bad_config("bench windows must be >= 1");
  }
  if (bench.dimension == 0) bad_config("bench dimension must be >= 1");
  if (bench.steps_factor == 0) bad_config("bench steps_factor must be >= 1");
  if (!(bench.learning_rate > 0.0) || !std::isfinite(bench.learning_rate))
    bad_config("bench learning_rate must be positive and finite");
}

// ---------------------------------------------------------------------------
// compare

std::vector<RunReport> cmd_compare(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::filesystem::path out_root(cfg.out_dir);
  std::filesystem::create_directories(out_root);

  std::vector<RunReport> reports;
  for (std::uint64_t seed : cfg.seeds) {
    PreparedData data = prepare_data(cfg, seed);

    RunReport report;
    report.seed = seed;
    report.features = data.train.cols;
    report.train_rows = data.train.rows;
    report.test_rows = data.test.rows;
    report.train_positives = data.train.positives();
    report.test_positives = data.test.positives();

    const std::filesystem::path run_dir =
        out_root / ("seed_" + std::to_string(seed));
    std::filesystem::create_directories(run_dir);

    ordered_json opt_reports = ordered_json::array();
    for (const OptimizerSpec& spec : cfg.optimizers) {
      OptimizerRunResult res = run_single(cfg, spec, data, seed);

      const std::string loss_name = "loss_" + spec.name + ".csv";
      const std::string pr_name = "pr_" + spec.name + ".csv";
      write_loss_csv(res.trace, run_dir / loss_name);
      {
        std::ofstream out = open_out(run_dir / pr_name);
        metrics::write_csv(res.pr, out);
      }

      ordered_json entry;
      entry["name"] = res.name;
      entry["kind"] = res.kind;
      entry["final_train_loss"] = res.final_train_loss;
      entry["final_test_loss"] = res.final_test_loss;
      entry["test_pr_auc"] = res.test_pr_auc;
      entry["train_trace_total_variation"] = res.train_trace_tv;
      entry["seconds_per_step"] = res.seconds_per_step;
      entry["loss_csv"] = loss_name;
      entry["pr_csv"] = pr_name;
      opt_reports.push_back(entry);

      report.optimizers.push_back(std::move(res));
    }

    ordered_json doc;
    doc["command"] = "compare";
    doc["seed"] = seed;
    doc["data"] = ordered_json{{"features", report.features},
                               {"train_rows", report.train_rows},
                               {"test_rows", report.test_rows},
                               {"train_positives", report.train_positives},
                               {"test_positives", report.test_positives}};
    doc["optimizers"] = opt_reports;
    doc["config"] = ordered_json::parse(cfg.to_json_text());

    std::ofstream out = open_out(run_dir / "report.json");
    out << doc.dump(2) << '\n';

    reports.push_back(std::move(report));
  }
  return reports;
}

// ---------------------------------------------------------------------------
// ablation

AblationResult cmd_ablation(const ExperimentConfig& cfg,
                            std::span<const double> alpha_grid) {
  cfg.validate();
  if (alpha_grid.empty()) bad_config("ablation needs a non-empty alpha grid");
  for (double a : alpha_grid) {
    if (!(a > 0.0 && a < 1.0))
      bad_config("ablation alphas must lie in (0, 1)");
  }

  const OptimizerSpec* weyl_template = nullptr;
  const OptimizerSpec* classical_spec = nullptr;
  for (const OptimizerSpec& spec : cfg.optimizers) {
    if (spec.kind == "weyl" && weyl_template == nullptr) weyl_template = &spec;
    if (spec.kind == "classical" && classical_spec == nullptr)
      classical_spec = &spec;
  }
  if (weyl_template == nullptr)
    bad_config("ablation needs a weyl optimizer spec to sweep");
  OptimizerSpec baseline;
  if (classical_spec != nullptr) {
    baseline = *classical_spec;
  } else {
    baseline.kind = "classical";
    baseline.name = "classical";
    baseline.learning_rate = weyl_template->weyl.learning_rate;
  }

  AblationResult result;
  for (std::uint64_t seed : cfg.seeds) {
    PreparedData data = prepare_data(cfg, seed);

    OptimizerRunResult base = run_single(cfg, baseline, data, seed);
    result.rows.push_back({baseline.name, kNan, seed, base.final_train_loss,
                           base.final_test_loss, base.test_pr_auc});

    for (double alpha : alpha_grid) {
      OptimizerSpec spec = *weyl_template;
      spec.weyl.alpha = alpha;
      OptimizerRunResult res = run_single(cfg, spec, data, seed);
      result.rows.push_back({spec.name, alpha, seed, res.final_train_loss,
                             res.final_test_loss, res.test_pr_auc});
    }
  }

  // Medians: classical baseline first, then one entry per grid position.
  const std::size_t n_seeds = cfg.seeds.size();
  const std::size_t stride = 1 + alpha_grid.size();
  auto collect = [&](std::size_t offset, auto member) {
    std::vector<double> vals;
    vals.reserve(n_seeds);
    for (std::size_t s = 0; s < n_seeds; ++s)
      vals.push_back(result.rows[s * stride + offset].*member);
    return median(std::move(vals));
  };
  result.medians.push_back(
      {baseline.name, kNan, collect(0, &AblationRow::final_test_loss),
       collect(0, &AblationRow::test_pr_auc)});
  for (std::size_t g = 0; g < alpha_grid.size(); ++g) {
    result.medians.push_back(
        {weyl_template->name, alpha_grid[g],
         collect(g + 1, &AblationRow::final_test_loss),
         collect(g + 1, &AblationRow::test_pr_auc)});
  }

  const std::filesystem::path out_root(cfg.out_dir);
  std::filesystem::create_directories(out_root);
  std::ofstream out = open_out(out_root / "ablation.csv");
  out << "optimizer,alpha,seed,final_train_loss,final_test_loss,test_pr_auc\n";
  for (const AblationRow& row : result.rows) {
    out << row.optimizer << ',';
    if (std::isfinite(row.alpha)) out << full_precision(row.alpha);
    out << ',' << row.seed << ',' << full_precision(row.final_train_loss)
        << ',' << full_precision(row.final_test_loss) << ','
        << full_precision(row.test_pr_auc) << '\n';
  }
  for (const AblationMedian& m : result.medians) {
    out << m.optimizer << ',';
    if (std::isfinite(m.alpha)) out << full_precision(m.alpha);
    // Aggregate rows carry no per-seed train loss: that field stays empty.
    out << ",median,," << full_precision(m.median_final_test_loss) << ','
        << full_precision(m.median_test_pr_auc) << '\n';
  }
  return result;
}

// ---------------------------------------------------------------------------
// bench

BenchResult cmd_bench(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.bench.windows.size() < 2)
    bad_config("bench needs at least two window sizes");
  for (std::size_t w : cfg.bench.windows) {
    if (w == 0) bad_config("bench windows must be >= 1");
  }
  if (cfg.bench.dimension == 0) bad_config("bench dimension must be >= 1");
  if (cfg.bench.steps_factor < 11)
    bad_config("bench steps_factor must be >= 11 to reach the 10L phase");

  const std::size_t dim = cfg.bench.dimension;
  const std::size_t max_window =
      *std::max_element(cfg.bench.windows.begin(), cfg.bench.windows.end());
  const std::size_t max_steps = cfg.bench.steps_factor * max_window;

  // Pre-generated gradient stream: rng cost stays outside the timed region.
  SplitMix64 rng(mix_seed(cfg.seeds.front(), kBenchStream));
  std::vector<double> stream(max_steps * dim);
  for (double& g : stream) g = rng.next_gaussian();

  const OptimizerSpec* weyl_template = nullptr;
  for (const OptimizerSpec& spec : cfg.optimizers) {
    if (spec.kind == "weyl") {
      weyl_template = &spec;
      break;
    }
  }
  optim::WeylConfig weyl_cfg =
      weyl_template != nullptr ? weyl_template->weyl : optim::WeylConfig{};
  weyl_cfg.learning_rate = cfg.bench.learning_rate;

  BenchResult result;
  auto time_steps = [&](optim::Optimizer& opt, const std::string& name,
                        std::size_t window, std::size_t steps) {
    std::vector<double> theta(dim, 0.0);
    for (std::size_t k = 0; k < steps; ++k) {
      std::span<const double> g(stream.data() + k * dim, dim);
      const auto t0 = std::chrono::steady_clock::now();
      opt.step(theta, g);
      const auto t1 = std::chrono::steady_clock::now();
      result.rows.push_back(
          {name, window, dim, k + 1,
           std::chrono::duration<double>(t1 - t0).count()});
    }
  };

  {
    optim::ClassicalGd classical(cfg.bench.learning_rate);
    time_steps(classical, "classical", 0, max_steps);
  }
  for (std::size_t window : cfg.bench.windows) {
    optim::WeylConfig wc = weyl_cfg;
    wc.window = window;
    optim::WeylOptimizer weyl(wc);
    time_steps(weyl, "weyl", window, cfg.bench.steps_factor * window);
  }

  const std::filesystem::path out_root(cfg.out_dir);
  std::filesystem::create_directories(out_root);
  std::ofstream out = open_out(out_root / "bench.csv");
  out << "optimizer,window,dimension,step,seconds\n";
  for (const BenchRow& row : result.rows) {
    out << row.optimizer << ',' << row.window << ',' << row.dimension << ','
        << row.step << ',' << full_precision(row.seconds) << '\n';
  }
  return result;
}

}  // namespace wwopt::harness
