#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sdr/report_io.hpp"

namespace fs = std::filesystem;

namespace {

const char* kTinyConfig = R"({
  "dimension": 12,
  "groups": {"count": 3, "size": 6, "overlap": 2},
  "sample_count": 40,
  "noise": 0.0,
  "feature_scale": 2.0,
  "active_groups": 1,
  "gammas": [0.5, 0.05],
  "benchmark_gamma": 0.05,
  "iterations": 300,
  "seeds": 10,
  "record_every": 50,
  "seed": 3,
  "reference_budget": 100000
})";

struct Workspace {
  fs::path dir;
  explicit Workspace(const std::string& name)
      : dir(fs::temp_directory_path() / ("sdr_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream out(dir / "config.json");
    out << kTinyConfig;
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string config() const { return (dir / "config.json").string(); }
  std::string out(const std::string& sub) const { return (dir / sub).string(); }
};

int run_cli(const std::string& args) {
  const std::string command = std::string(SDR_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  return std::system(command.c_str());
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// the wall_seconds column is the only timing-dependent output
std::string strip_wall_column(const std::string& csv) {
  std::stringstream in(csv), out;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i == 1) continue;
      out << cells[i] << (i + 1 == cells.size() ? "" : ",");
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

TEST_CASE("solve twice with one seed: byte-identical apart from wall_seconds") {
  Workspace ws("solve");
  REQUIRE(run_cli("solve --config " + ws.config() + " --seed 7 --out " +
                  ws.out("a")) == 0);
  REQUIRE(run_cli("solve --config " + ws.config() + " --seed 7 --out " +
                  ws.out("b")) == 0);
  const std::string a = slurp(ws.out("a") + "/series.csv");
  const std::string b = slurp(ws.out("b") + "/series.csv");
  CHECK(!a.empty());
  CHECK(strip_wall_column(a) == strip_wall_column(b));
  CHECK(fs::exists(ws.out("a") + "/summary.json"));
}

TEST_CASE("solve writes parseable records for every algorithm") {
  Workspace ws("algos");
  for (const std::string algo : {"sdr", "psdr"}) {
    REQUIRE(run_cli("solve --config " + ws.config() + " --algo " + algo +
                    " --out " + ws.out(algo)) == 0);
    const auto records = sdr::read_series_csv(ws.out(algo) + "/series.csv");
    CHECK(records.size() >= 2);
    CHECK(records.front().iteration == 0);
    CHECK(records.back().iteration == 300);
  }
  // deterministic DR needs a single-sample dataset; the tiny config has 40
  CHECK(run_cli("solve --config " + ws.config() + " --algo dr --out " +
                ws.out("dr")) != 0);

  std::ofstream single(ws.dir / "single.json");
  single << R"({"dimension": 4, "groups": {"count": 2, "size": 3, "overlap": 2},
                "sample_count": 1, "iterations": 200})";
  single.close();
  REQUIRE(run_cli("solve --config " + (ws.dir / "single.json").string() +
                  " --algo dr --out " + ws.out("dr1")) == 0);
  CHECK(sdr::read_series_csv(ws.out("dr1") + "/series.csv").back().iteration == 200);
}

TEST_CASE("benchmark emits two series and a summary with histograms") {
  Workspace ws("bench");
  REQUIRE(run_cli("benchmark --config " + ws.config() + " --seeds 2 --out " +
                  ws.out("results")) == 0);
  CHECK(fs::exists(ws.out("results") + "/stochastic_dr.csv"));
  CHECK(fs::exists(ws.out("results") + "/partially_stochastic_dr.csv"));
  const std::string summary = slurp(ws.out("results") + "/summary.json");
  CHECK(summary.find("\"stochastic_wins\"") != std::string::npos);
  CHECK(summary.find("\"histograms\"") != std::string::npos);
  CHECK(summary.find("\"config\"") != std::string::npos);
  // reference cached for reuse
  CHECK(fs::exists(ws.out("results") + "/reference.json"));
}

TEST_CASE("probe emits the probability table") {
  Workspace ws("probe");
  REQUIRE(run_cli("probe --config " + ws.config() + " --gammas 0.5,0.05 "
                  "--seeds 10 --out " + ws.out("probe")) == 0);
  const std::string table = slurp(ws.out("probe") + "/probe.csv");
  CHECK(table.find("gamma,prob_ergodic,cesaro_mean") == 0);
  // one row per gamma after the header
  CHECK(std::count(table.begin(), table.end(), '\n') == 3);
}

TEST_CASE("prox-check subcommand passes on a small trial budget") {
  CHECK(run_cli("prox-check --trials 8 --seed 123") == 0);
}

TEST_CASE("oracle subcommand stores a reference solution") {
  Workspace ws("oracle");
  REQUIRE(run_cli("oracle --config " + ws.config() + " --out " +
                  ws.out("oracle")) == 0);
  const auto ref = sdr::load_reference(ws.out("oracle") + "/reference.json");
  CHECK(ref.point.size() == 12);
  CHECK(ref.objective > 0.0);
}

TEST_CASE("SDR_THREADS caps seed parallelism without changing results") {
  Workspace ws("threads");
  REQUIRE(run_cli("probe --config " + ws.config() + " --seeds 10 --out " +
                  ws.out("p2")) == 0);
  const std::string serial =
      "SDR_THREADS=1 " + std::string(SDR_CLI_PATH) + " probe --config " +
      ws.config() + " --seeds 10 --out " + ws.out("p1") + " >/dev/null 2>&1";
  REQUIRE(std::system(serial.c_str()) == 0);
  CHECK(slurp(ws.out("p1") + "/probe.csv") == slurp(ws.out("p2") + "/probe.csv"));
}

TEST_CASE("bad flags and configs exit nonzero with a message") {
  Workspace ws("errors");
  CHECK(run_cli("solve --config /tmp/sdr_missing_config.json") != 0);
  CHECK(run_cli("solve --config " + ws.config() + " --algo nope") != 0);
  std::ofstream bad(ws.dir / "bad.json");
  bad << R"({"gammas": [-1]})";
  bad.close();
  CHECK(run_cli("solve --config " + (ws.dir / "bad.json").string()) != 0);
}
