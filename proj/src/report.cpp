#include "ovr/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "ovr/errors.hpp"
#include "ovr/simplex.hpp"

namespace ovr {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::unique_ptr<Player> make_player(const std::string& method, Eigen::Index n, double bound,
                                    double gamma, double theta, std::uint64_t T, bool strict) {
  const BoundMode mode = strict ? BoundMode::strict : BoundMode::lenient;
  if (method == "ftrl") {
    FtrlOptions opt{gamma > 0.0 ? gamma : bound, bound, mode};
    return std::make_unique<FtrlPlayer>(FtrlSampler(n, opt));
  }
  if (method == "vrb") {
    const double th = theta > 0.0 ? theta : VrbSampler::theta_for_horizon(n, T);
    return std::make_unique<VrbPlayer>(VrbSampler(n, th, bound, mode));
  }
  if (method == "vrb-doubling")
    return std::make_unique<DoublingVrbPlayer>(DoublingVrb(n, bound, mode));
  if (method == "uniform") return std::make_unique<UniformPlayer>(n);
  throw UsageError("unknown sampler method: " + method);
}

namespace {

double cell_ceiling(const CellSpec& spec) {
  if (spec.method == "ftrl")
    return theorem_bound(BoundKind::full_info, spec.n, spec.T, spec.bound);
  if (spec.method == "vrb" || spec.method == "vrb-doubling") {
    if (spec.T < static_cast<std::uint64_t>(spec.n))
      return std::numeric_limits<double>::quiet_NaN();
    return theorem_bound(BoundKind::bandit, spec.n, spec.T, spec.bound);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

CellResult run_cell(const CellSpec& spec) {
  CellResult result;
  result.spec = spec;
  result.ceiling = cell_ceiling(spec);
  result.mean_cum = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(spec.T));
  result.regrets.reserve(static_cast<std::size_t>(spec.seeds));

  for (int s = 0; s < spec.seeds; ++s) {
    const std::uint64_t episode = static_cast<std::uint64_t>(s);
    RngStream setup(spec.master, episode, RngStream::kInit);
    auto adversary = make_adversary(spec.adversary, spec.n, spec.bound, setup);
    auto player =
        make_player(spec.method, spec.n, spec.bound, spec.gamma, spec.theta, spec.T, spec.strict);
    const EpisodeTrace trace = run_episode(*player, *adversary, spec.T, spec.master, episode);
    result.regrets.push_back(realized_regret(trace));
    result.mean_cum += cumulative_costs(trace);
    result.clamped += trace.clamped;
  }
  result.mean_cum /= static_cast<double>(spec.seeds);
  return result;
}

void emit_report(const std::vector<CellResult>& cells, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  std::ofstream csv(dir / "report.csv", std::ios::binary);
  if (!csv) throw IoFailure("emit_report: cannot open report.csv");
  csv << kReportHeader << "\n";
  for (const CellResult& cell : cells) {
    const std::string prefix = cell.spec.method + "," + to_string(cell.spec.adversary) + "," +
                               std::to_string(cell.spec.n) + "," + std::to_string(cell.spec.T);
    const bool has_ceiling = std::isfinite(cell.ceiling);
    for (std::size_t s = 0; s < cell.regrets.size(); ++s) {
      csv << prefix << "," << s << "," << format_double(cell.regrets[s]) << ",";
      if (has_ceiling)
        csv << format_double(cell.ceiling) << ","
            << format_double(cell.regrets[s] / cell.ceiling);
      else
        csv << ",";
      csv << "\n";
    }
  }
  csv.close();

  nlohmann::json summary;
  summary["cells"] = nlohmann::json::array();
  for (const CellResult& cell : cells) {
    const MeanStderr stats = summarize(cell.regrets);
    nlohmann::json j;
    j["method"] = cell.spec.method;
    j["adversary"] = to_string(cell.spec.adversary);
    j["n"] = cell.spec.n;
    j["T"] = cell.spec.T;
    j["L"] = cell.spec.bound;
    j["seeds"] = cell.spec.seeds;
    j["mean_regret"] = stats.mean;
    j["stderr_regret"] = stats.stderr_;
    if (std::isfinite(cell.ceiling)) {
      j["bound"] = cell.ceiling;
      j["ratio"] = stats.mean / cell.ceiling;
    } else {
      j["bound"] = nullptr;
      j["ratio"] = nullptr;
    }
    j["clamped"] = cell.clamped;
    summary["cells"].push_back(std::move(j));
  }
  std::ofstream js(dir / "summary.json", std::ios::binary);
  if (!js) throw IoFailure("emit_report: cannot open summary.json");
  js << summary.dump(2) << "\n";
  js.close();

  std::ofstream plot(dir / "plot.csv", std::ios::binary);
  if (!plot) throw IoFailure("emit_report: cannot open plot.csv");
  plot << kPlotHeader << "\n";
  for (const CellResult& cell : cells) {
    const std::string prefix = cell.spec.method + "," + to_string(cell.spec.adversary) + "," +
                               std::to_string(cell.spec.n) + "," + std::to_string(cell.spec.T);
    for (Eigen::Index t = 0; t < cell.mean_cum.size(); ++t)
      plot << prefix << "," << (t + 1) << "," << format_double(cell.mean_cum[t]) << "\n";
  }
}

}  // namespace ovr
