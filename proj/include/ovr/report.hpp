#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ovr/harness.hpp"

namespace ovr {

/// One benchmark cell: a sampler family against one adversary kind at fixed
/// (n, T, L), replicated over seeds.
struct CellSpec {
  std::string method;  // "ftrl", "vrb", "vrb-doubling" or "uniform"
  AdversaryKind adversary = AdversaryKind::iid_fixed;
  Eigen::Index n = 2;
  std::uint64_t T = 100;
  double bound = 1.0;   // L, cap on squared losses
  double gamma = 0.0;   // FTRL regularizer; 0 means "use L"
  double theta = 0.0;   // VRB mixing rate; 0 means horizon rule (n/T)^(1/3)
  int seeds = 20;
  std::uint64_t master = 0;
  bool strict = false;
};

struct CellResult {
  CellSpec spec;
  std::vector<double> regrets;   // realized regret per seed
  double ceiling = 0.0;          // theorem ceiling, NaN when not applicable
  Eigen::ArrayXd mean_cum;       // mean cumulative normalized cost per round
  std::uint64_t clamped = 0;
};

/// Player for a method name; theta/gamma of 0 select the defaults above.
std::unique_ptr<Player> make_player(const std::string& method, Eigen::Index n, double bound,
                                    double gamma, double theta, std::uint64_t T, bool strict);

/// Runs every seed of one cell.  Episode s uses episode index s under the
/// cell's master seed.
CellResult run_cell(const CellSpec& spec);

/// Writes report.csv (one row per seed), summary.json (per-cell mean, stderr,
/// ceiling, ratio) and plot.csv (per-round mean cumulative cost) into dir.
/// Output is byte-deterministic for identical results.
void emit_report(const std::vector<CellResult>& cells, const std::filesystem::path& dir);

/// Fixed CSV headers.
inline constexpr const char* kReportHeader = "method,adversary,n,T,seed,regret,bound,ratio";
inline constexpr const char* kPlotHeader = "method,adversary,n,T,round,cumcost";

/// Shortest deterministic decimal rendering used in CSV files.
std::string format_double(double x);

}  // namespace ovr
