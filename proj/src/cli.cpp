#include "ovr/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ovr/dataset.hpp"
#include "ovr/errors.hpp"
#include "ovr/property_suite.hpp"
#include "ovr/report.hpp"
#include "ovr/trainers.hpp"

namespace ovr {

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw UsageError("empty list value: '" + text + "'");
  return out;
}

std::filesystem::path resolve_out(const std::string& out_flag) {
  if (!out_flag.empty()) return out_flag;
  if (const char* env = std::getenv("OVR_OUT"); env != nullptr && *env != '\0') return env;
  return "ovr-out";
}

void run_indexed(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::scoped_lock lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    std::uint64_t seed, const nlohmann::json& config) {
  nlohmann::json manifest;
  manifest["command"] = command;
  manifest["version"] = kVersion;
  manifest["seed"] = seed;
  manifest["config"] = config;
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw IoFailure("cannot write manifest.json");
  out << manifest.dump(2) << "\n";
}

// ---- regret-bench ----

struct BenchOpts {
  Eigen::Index n = 8;
  std::uint64_t T = 1000;
  double L = 1.0;
  double gamma = 0.0;
  double theta = 0.0;
  int seeds = 20;
  std::uint64_t seed = 0;
  std::string adversary = "iid-fixed,piecewise-shift,spiteful,converging";
  std::string sampler = "ftrl,vrb,uniform";
  std::string out;
  int jobs = 1;
  bool strict = false;
};

int cmd_regret_bench(const BenchOpts& o) {
  const std::filesystem::path dir = resolve_out(o.out);
  std::filesystem::create_directories(dir);

  std::vector<CellSpec> specs;
  for (const std::string& method : split_list(o.sampler)) {
    for (const std::string& adv : split_list(o.adversary)) {
      CellSpec spec;
      spec.method = method;
      spec.adversary = adversary_kind_from_string(adv);
      spec.n = o.n;
      spec.T = o.T;
      spec.bound = o.L;
      spec.gamma = o.gamma;
      spec.theta = o.theta;
      spec.seeds = o.seeds;
      spec.master = o.seed;
      spec.strict = o.strict;
      specs.push_back(std::move(spec));
    }
  }

  std::vector<CellResult> results(specs.size());
  run_indexed(specs.size(), o.jobs, [&](std::size_t i) { results[i] = run_cell(specs[i]); });

  emit_report(results, dir);
  nlohmann::json config{{"n", o.n},         {"T", o.T},           {"L", o.L},
                        {"gamma", o.gamma}, {"theta", o.theta},   {"seeds", o.seeds},
                        {"seed", o.seed},   {"adversary", o.adversary},
                        {"sampler", o.sampler},                   {"out", dir.string()},
                        {"jobs", o.jobs},   {"strict", o.strict}};
  write_manifest(dir, "regret-bench", o.seed, config);

  for (const CellResult& cell : results) {
    const MeanStderr stats = summarize(cell.regrets);
    std::cout << cell.spec.method << " vs " << to_string(cell.spec.adversary)
              << ": mean regret " << format_double(stats.mean) << " +- "
              << format_double(stats.stderr_);
    if (std::isfinite(cell.ceiling))
      std::cout << ", ceiling " << format_double(cell.ceiling) << " (ratio "
                << format_double(stats.mean / cell.ceiling) << ")";
    std::cout << "\n";
  }
  std::cout << "wrote " << dir.string() << "\n";
  return 0;
}

// ---- trainers ----

struct TrainOpts {
  std::string dataset;
  std::string format = "csv";
  std::string sampler = "vrb,uniform";
  std::uint64_t steps = 0;  // 0 = command default
  int seeds = 1;
  std::uint64_t seed = 0;
  double theta = 0.0;
  double L = 0.0;  // unused; accepted for config compatibility
  Eigen::Index n = 0;
  Eigen::Index k = 100;
  std::uint64_t batch = 100;
  std::uint64_t eval_every = 0;
  std::string optimizer = "adagrad";
  double mu = 1e-2;
  double diameter = 10.0;
  std::string out;
  bool strict = false;
};

void write_metrics_csv(const std::filesystem::path& path, const std::vector<StepRecord>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot write " + path.string());
  out << "step,trainloss,gradnorm2,cumsecond,testcost\n";
  for (const StepRecord& r : rows)
    out << r.step << "," << format_double(r.train_loss) << "," << format_double(r.grad_norm_sq)
        << "," << format_double(r.cum_second) << "," << format_double(r.test_cost) << "\n";
}

Dataset load_or_synth(const TrainOpts& o, Eigen::Index default_n, Eigen::Index default_dim,
                      bool labeled) {
  if (!o.dataset.empty())
    return load_dataset(o.dataset, data_format_from_string(o.format), labeled);
  const Eigen::Index n = o.n > 0 ? o.n : default_n;
  return synth_imbalanced(n, default_dim, {0.95, 0.04, 0.01}, o.seed);
}

int cmd_train_logreg(const TrainOpts& o) {
  const std::filesystem::path dir = resolve_out(o.out);
  std::filesystem::create_directories(dir);
  const Dataset data = load_or_synth(o, 10000, 10, true);
  const std::uint64_t steps = o.steps > 0 ? o.steps : 50000;

  nlohmann::json summary;
  for (const std::string& sampler_name : split_list(o.sampler)) {
    LogregConfig config;
    config.sampler = train_sampler_from_string(sampler_name);
    config.optimizer = optimizer_from_string(o.optimizer);
    config.steps = steps;
    config.theta = o.theta;
    config.mu = o.mu;
    config.diameter = o.diameter;
    config.strict = o.strict;
    config.eval_every = o.eval_every > 0 ? o.eval_every : std::max<std::uint64_t>(1, steps / 50);

    std::vector<double> proxies, test_costs;
    std::uint64_t clamped = 0;
    for (int s = 0; s < o.seeds; ++s) {
      const TrainResult result = train_logreg(data, config, o.seed + static_cast<std::uint64_t>(s));
      write_metrics_csv(dir / ("metrics-" + sampler_name + "-seed" + std::to_string(s) + ".csv"),
                        result.metrics);
      proxies.push_back(result.cum_second);
      test_costs.push_back(result.final_test_cost);
      clamped += result.clamped;
    }
    const MeanStderr proxy = summarize(proxies);
    const MeanStderr cost = summarize(test_costs);
    summary[sampler_name] = {{"cum_second_mean", proxy.mean},
                             {"cum_second_stderr", proxy.stderr_},
                             {"test_cost_mean", cost.mean},
                             {"clamped", clamped},
                             {"seeds", o.seeds}};
    std::cout << "logreg " << sampler_name << ": cumulative second moment "
              << format_double(proxy.mean) << " +- " << format_double(proxy.stderr_)
              << ", test loss " << format_double(cost.mean) << "\n";
  }
  std::ofstream js(dir / "summary.json", std::ios::binary);
  if (!js) throw IoFailure("cannot write summary.json");
  js << summary.dump(2) << "\n";
  js.close();

  nlohmann::json config{{"dataset", o.dataset},   {"format", o.format}, {"sampler", o.sampler},
                        {"steps", steps},         {"seeds", o.seeds},   {"seed", o.seed},
                        {"theta", o.theta},       {"n", o.n},           {"optimizer", o.optimizer},
                        {"mu", o.mu},             {"diameter", o.diameter},
                        {"out", dir.string()},    {"strict", o.strict}};
  write_manifest(dir, "train-logreg", o.seed, config);
  std::cout << "wrote " << dir.string() << "\n";
  return 0;
}

int cmd_train_kmeans(const TrainOpts& o) {
  const std::filesystem::path dir = resolve_out(o.out);
  std::filesystem::create_directories(dir);
  const Dataset data = load_or_synth(o, 6000, 2, false);
  const std::uint64_t batches = o.steps > 0 ? o.steps : 100;

  nlohmann::json summary;
  for (const std::string& sampler_name : split_list(o.sampler)) {
    KmeansConfig config;
    config.sampler = train_sampler_from_string(sampler_name);
    config.k = o.k;
    config.batch = o.batch;
    config.batches = batches;
    if (o.theta > 0.0) config.theta = o.theta;
    config.strict = o.strict;
    config.eval_every = o.eval_every > 0 ? o.eval_every : 1;

    std::vector<double> proxies, test_costs;
    std::uint64_t clamped = 0;
    for (int s = 0; s < o.seeds; ++s) {
      const TrainResult result = train_kmeans(data, config, o.seed + static_cast<std::uint64_t>(s));
      write_metrics_csv(dir / ("metrics-" + sampler_name + "-seed" + std::to_string(s) + ".csv"),
                        result.metrics);
      proxies.push_back(result.cum_second);
      test_costs.push_back(result.final_test_cost);
      clamped += result.clamped;
    }
    const MeanStderr proxy = summarize(proxies);
    const MeanStderr cost = summarize(test_costs);
    summary[sampler_name] = {{"cum_second_mean", proxy.mean},
                             {"cum_second_stderr", proxy.stderr_},
                             {"test_cost_mean", cost.mean},
                             {"clamped", clamped},
                             {"seeds", o.seeds}};
    std::cout << "kmeans " << sampler_name << ": cumulative second moment "
              << format_double(proxy.mean) << " +- " << format_double(proxy.stderr_)
              << ", test cost " << format_double(cost.mean) << "\n";
  }
  std::ofstream js(dir / "summary.json", std::ios::binary);
  if (!js) throw IoFailure("cannot write summary.json");
  js << summary.dump(2) << "\n";
  js.close();

  nlohmann::json config{{"dataset", o.dataset}, {"format", o.format}, {"sampler", o.sampler},
                        {"k", o.k},             {"batch", o.batch},   {"steps", batches},
                        {"seeds", o.seeds},     {"seed", o.seed},     {"theta", o.theta},
                        {"n", o.n},             {"out", dir.string()},{"strict", o.strict}};
  write_manifest(dir, "train-kmeans", o.seed, config);
  std::cout << "wrote " << dir.string() << "\n";
  return 0;
}

int cmd_property_suite(std::uint64_t seed, const std::string& out_flag) {
  const std::filesystem::path dir = resolve_out(out_flag);
  std::filesystem::create_directories(dir);
  const PropertyReport report = run_property_suite(seed);

  nlohmann::json j;
  j["checks"] = nlohmann::json::array();
  for (const PropertyCheck& c : report.checks) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " (observed "
              << format_double(c.observed) << ", threshold " << format_double(c.threshold)
              << ")\n";
    j["checks"].push_back({{"name", c.name},
                           {"pass", c.pass},
                           {"observed", c.observed},
                           {"threshold", c.threshold},
                           {"note", c.note}});
  }
  j["all_pass"] = report.all_pass();
  std::ofstream js(dir / "properties.json", std::ios::binary);
  if (!js) throw IoFailure("cannot write properties.json");
  js << j.dump(2) << "\n";

  write_manifest(dir, "property-suite", seed, nlohmann::json{{"seed", seed}});
  return report.all_pass() ? 0 : 3;
}

// Applies config-file values as new defaults for options the command line
// did not set; command-line flags win.
void apply_config_defaults(const nlohmann::json& cfg, CLI::App* sub) {
  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr || opt->count() > 0) continue;
    std::string text;
    if (value.is_string())
      text = value.get<std::string>();
    else
      text = value.dump();
    opt->add_result(text);
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ParseError("config key '" + key + "': " + e.what());
    }
  }
}

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open config file " + path);
  try {
    nlohmann::json cfg;
    in >> cfg;
    if (!cfg.is_object()) throw ParseError("config file must hold a JSON object");
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config file: ") + e.what());
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  BenchOpts bench;
  TrainOpts logreg;
  TrainOpts kmeans;
  std::uint64_t prop_seed = 0;
  std::string prop_out;
  std::string config_path;

  CLI::App app{"online variance-reduced sampling toolkit"};
  app.require_subcommand(1);

  CLI::App* b = app.add_subcommand("regret-bench", "regret benchmark over adversaries");
  b->add_option("--config", config_path, "JSON config file; flags override");
  b->add_option("--n", bench.n, "number of points");
  b->add_option("--T", bench.T, "rounds per episode");
  b->add_option("--L", bench.L, "squared-loss bound");
  b->add_option("--gamma", bench.gamma, "FTRL regularizer (0: use L)");
  b->add_option("--theta", bench.theta, "VRB mixing rate (0: horizon rule)");
  b->add_option("--seeds", bench.seeds, "episodes per cell");
  b->add_option("--seed", bench.seed, "master seed");
  b->add_option("--adversary", bench.adversary, "comma list of adversary kinds");
  b->add_option("--sampler", bench.sampler, "comma list of sampler methods");
  b->add_option("--out", bench.out, "output directory (fallback: $OVR_OUT)");
  b->add_option("--jobs", bench.jobs, "parallel cells");
  b->add_flag("--strict", bench.strict, "error on bound violations instead of clamping");

  CLI::App* l = app.add_subcommand("train-logreg", "importance-sampled logistic regression");
  l->add_option("--config", config_path, "JSON config file; flags override");
  l->add_option("--dataset", logreg.dataset, "dataset path (default: synthetic)");
  l->add_option("--format", logreg.format, "csv or libsvm");
  l->add_option("--sampler", logreg.sampler, "comma list: uniform,vrb,vrb-doubling");
  l->add_option("--steps", logreg.steps, "gradient steps");
  l->add_option("--seeds", logreg.seeds, "independent runs");
  l->add_option("--seed", logreg.seed, "master seed");
  l->add_option("--theta", logreg.theta, "VRB mixing rate (0: horizon rule)");
  l->add_option("--n", logreg.n, "synthetic dataset size");
  l->add_option("--optimizer", logreg.optimizer, "adagrad or sgd");
  l->add_option("--mu", logreg.mu, "strong-convexity modulus");
  l->add_option("--diameter", logreg.diameter, "feasible-ball diameter");
  l->add_option("--eval-every", logreg.eval_every, "metric cadence");
  l->add_option("--out", logreg.out, "output directory (fallback: $OVR_OUT)");
  l->add_flag("--strict", logreg.strict, "error on bound violations");

  CLI::App* k = app.add_subcommand("train-kmeans", "importance-sampled mini-batch k-means");
  k->add_option("--config", config_path, "JSON config file; flags override");
  k->add_option("--dataset", kmeans.dataset, "dataset path (default: synthetic)");
  k->add_option("--format", kmeans.format, "csv or libsvm");
  k->add_option("--sampler", kmeans.sampler, "comma list: uniform,vrb,vrb-doubling");
  k->add_option("--k", kmeans.k, "number of centers");
  k->add_option("--batch", kmeans.batch, "tickets per batch");
  k->add_option("--steps", kmeans.steps, "batches");
  k->add_option("--seeds", kmeans.seeds, "independent runs");
  k->add_option("--seed", kmeans.seed, "master seed");
  k->add_option("--theta", kmeans.theta, "VRB mixing rate");
  k->add_option("--n", kmeans.n, "synthetic dataset size");
  k->add_option("--eval-every", kmeans.eval_every, "metric cadence");
  k->add_option("--out", kmeans.out, "output directory (fallback: $OVR_OUT)");
  k->add_flag("--strict", kmeans.strict, "error on bound violations");

  CLI::App* p = app.add_subcommand("property-suite", "run the property families");
  p->add_option("--config", config_path, "JSON config file; flags override");
  p->add_option("--seed", prop_seed, "master seed");
  p->add_option("--out", prop_out, "output directory (fallback: $OVR_OUT)");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return 1;
    }

    if (!config_path.empty()) {
      const nlohmann::json cfg = load_config_file(config_path);
      for (CLI::App* sub : {b, l, k, p})
        if (sub->parsed()) apply_config_defaults(cfg, sub);
    }

    if (b->parsed()) return cmd_regret_bench(bench);
    if (l->parsed()) return cmd_train_logreg(logreg);
    if (k->parsed()) return cmd_train_kmeans(kmeans);
    if (p->parsed()) return cmd_property_suite(prop_seed, prop_out);
    throw UsageError("no command given");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const IoFailure& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const BadMix& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NoLabels& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const TooFewPoints& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace ovr
