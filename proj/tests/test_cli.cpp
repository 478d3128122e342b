#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ovr/cli.hpp"
#include "ovr/report.hpp"

namespace fs = std::filesystem;

namespace {

int run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"ovr"};
  argv.insert(argv.end(), args.begin(), args.end());
  return ovr::run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path("./" + name) { fs::remove_all(path); }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run({"regret-bench", "--adversary", "bogus", "--out", "./never"}) == 1);
  CHECK(run({"no-such-command"}) == 1);
  CHECK(run({"regret-bench", "--no-such-flag"}) == 1);
  CHECK(run({}) == 1);
}

TEST_CASE("data errors exit with 2") {
  TempDir dir("cli-data-err");
  CHECK(run({"train-logreg", "--dataset", "./no_such.csv", "--out", dir.str().c_str()}) == 2);
  CHECK(run({"train-logreg", "--dataset", "./no_such.csv", "--format", "libsvm", "--out",
             dir.str().c_str()}) == 2);
}

TEST_CASE("runtime errors exit with 3") {
  TempDir dir("cli-runtime-err");
  CHECK(run({"regret-bench", "--theta", "1.5", "--sampler", "vrb", "--adversary", "iid-fixed",
             "--n", "2", "--T", "10", "--seeds", "1", "--out", dir.str().c_str()}) == 3);
}

TEST_CASE("regret bench writes the full report set") {
  TempDir dir("cli-bench");
  const int code = run({"regret-bench", "--n", "3", "--T", "50", "--seeds", "2", "--sampler",
                        "ftrl,uniform", "--adversary", "iid-fixed,converging", "--out",
                        dir.str().c_str()});
  CHECK(code == 0);
  for (const char* name : {"report.csv", "summary.json", "plot.csv", "manifest.json"})
    CHECK(fs::exists(dir.path / name));

  const std::string report = slurp(dir.path / "report.csv");
  CHECK(report.rfind(ovr::kReportHeader, 0) == 0);
  // header + 2 methods x 2 adversaries x 2 seeds
  CHECK(std::count(report.begin(), report.end(), '\n') == 9);

  const std::string plot = slurp(dir.path / "plot.csv");
  CHECK(plot.rfind(ovr::kPlotHeader, 0) == 0);

  const nlohmann::json manifest = nlohmann::json::parse(slurp(dir.path / "manifest.json"));
  CHECK(manifest["command"] == "regret-bench");
  CHECK(manifest["version"] == ovr::kVersion);
  CHECK(manifest["config"]["n"] == 3);
}

TEST_CASE("identical invocations produce identical report bytes") {
  TempDir a("cli-det-a"), b("cli-det-b");
  REQUIRE(run({"regret-bench", "--n", "3", "--T", "60", "--seeds", "2", "--sampler", "vrb",
               "--adversary", "iid-fixed", "--jobs", "1", "--out", a.str().c_str()}) == 0);
  REQUIRE(run({"regret-bench", "--n", "3", "--T", "60", "--seeds", "2", "--sampler", "vrb",
               "--adversary", "iid-fixed", "--jobs", "3", "--out", b.str().c_str()}) == 0);
  CHECK(slurp(a.path / "report.csv") == slurp(b.path / "report.csv"));
  CHECK(slurp(a.path / "summary.json") == slurp(b.path / "summary.json"));
  CHECK(slurp(a.path / "plot.csv") == slurp(b.path / "plot.csv"));
}

TEST_CASE("config file supplies defaults and flags override") {
  TempDir dir("cli-config");
  fs::create_directories(dir.path);
  const fs::path cfg = dir.path / "run.json";
  {
    std::ofstream out(cfg);
    out << "{\"n\": 5, \"T\": 40, \"seeds\": 2}";
  }
  const fs::path outdir = dir.path / "run-out";
  REQUIRE(run({"regret-bench", "--config", cfg.string().c_str(), "--T", "30", "--sampler",
               "uniform", "--adversary", "iid-fixed", "--out", outdir.string().c_str()}) == 0);
  const nlohmann::json manifest = nlohmann::json::parse(slurp(outdir / "manifest.json"));
  CHECK(manifest["config"]["n"] == 5);     // from the file
  CHECK(manifest["config"]["T"] == 30);    // flag wins
  CHECK(manifest["config"]["seeds"] == 2); // from the file

  CHECK(run({"regret-bench", "--config", "./no_such_config.json", "--out",
             (dir.path / "x").string().c_str()}) == 2);
  const fs::path broken = dir.path / "broken.json";
  {
    std::ofstream out(broken);
    out << "[1,2,3]";
  }
  CHECK(run({"regret-bench", "--config", broken.string().c_str(), "--out",
             (dir.path / "y").string().c_str()}) == 2);
}

TEST_CASE("trainer command writes metrics with the documented header") {
  TempDir dir("cli-train");
  REQUIRE(run({"train-logreg", "--n", "200", "--steps", "60", "--eval-every", "20", "--seeds",
               "1", "--sampler", "vrb,uniform", "--out", dir.str().c_str()}) == 0);
  for (const char* name : {"metrics-vrb-seed0.csv", "metrics-uniform-seed0.csv", "summary.json",
                           "manifest.json"}) {
    CHECK(fs::exists(dir.path / name));
  }
  const std::string metrics = slurp(dir.path / "metrics-vrb-seed0.csv");
  CHECK(metrics.rfind("step,trainloss,gradnorm2,cumsecond,testcost", 0) == 0);
  CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 4);  // header + 3 rows

  const nlohmann::json summary = nlohmann::json::parse(slurp(dir.path / "summary.json"));
  CHECK(summary.contains("vrb"));
  CHECK(summary.contains("uniform"));
  CHECK(summary["vrb"]["seeds"] == 1);
}

TEST_CASE("kmeans command runs end to end") {
  TempDir dir("cli-kmeans");
  REQUIRE(run({"train-kmeans", "--n", "300", "--k", "4", "--batch", "20", "--steps", "10",
               "--eval-every", "5", "--seeds", "1", "--sampler", "vrb", "--out",
               dir.str().c_str()}) == 0);
  CHECK(fs::exists(dir.path / "metrics-vrb-seed0.csv"));
  const nlohmann::json manifest = nlohmann::json::parse(slurp(dir.path / "manifest.json"));
  CHECK(manifest["config"]["k"] == 4);
}

TEST_CASE("out directory falls back to the environment") {
  TempDir dir("cli-env-out");
  setenv("OVR_OUT", dir.str().c_str(), 1);
  REQUIRE(run({"regret-bench", "--n", "2", "--T", "20", "--seeds", "1", "--sampler", "uniform",
               "--adversary", "iid-fixed"}) == 0);
  unsetenv("OVR_OUT");
  CHECK(fs::exists(dir.path / "report.csv"));
}

TEST_CASE("property suite runs clean") {
  TempDir dir("cli-props");
  CHECK(run({"property-suite", "--out", dir.str().c_str()}) == 0);
  const nlohmann::json props = nlohmann::json::parse(slurp(dir.path / "properties.json"));
  CHECK(props["all_pass"] == true);
  CHECK(props["checks"].size() >= 10);
}

TEST_CASE("help exits zero") {
  CHECK(run({"--help"}) == 0);
}
