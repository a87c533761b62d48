#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "sdr/config_io.hpp"
#include "sdr/report_io.hpp"

using namespace sdr;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path("/tmp/sdr_test_" + name) {
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("parse_config: minimal file takes documented defaults") {
  TempFile file("minimal.json",
                R"({"dimension": 12, "groups": {"count": 3, "size": 6, "overlap": 2}})");
  const ExperimentConfig config = parse_config(file.path);
  CHECK(config.dimension == 12);
  CHECK(config.layout.count == 3);
  // untouched fields keep their defaults
  const ExperimentConfig defaults;
  CHECK(config.sample_count == defaults.sample_count);
  CHECK(config.noise == defaults.noise);
  CHECK(config.gammas == defaults.gammas);
  CHECK(config.record_every == defaults.record_every);
}

TEST_CASE("parse_config: constraint violations name the field") {
  TempFile file("bad_gamma.json", R"({"gammas": [0.5, -1.0]})");
  try {
    parse_config(file.path);
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    CHECK(std::string(e.what()).find("gammas") != std::string::npos);
  }

  TempFile noise("bad_noise.json", R"({"noise": 0.9})");
  CHECK_THROWS_AS(parse_config(noise.path), Error);

  TempFile iters("bad_iters.json", R"({"iterations": 0})");
  CHECK_THROWS_AS(parse_config(iters.path), Error);
}

TEST_CASE("parse_config: unknown keys are rejected by name") {
  TempFile file("unknown.json", R"({"dimention": 5})");
  try {
    parse_config(file.path);
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    CHECK(std::string(e.what()).find("dimention") != std::string::npos);
  }
}

TEST_CASE("parse_config: missing file and malformed syntax") {
  CHECK_THROWS_AS(parse_config("/tmp/sdr_does_not_exist.json"), Error);
  TempFile file("malformed.json", "{not json");
  try {
    parse_config(file.path);
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
  }
}

TEST_CASE("config round-trip: emit then re-parse gives an equal config") {
  ExperimentConfig config;
  config.dimension = 50;
  config.layout = {5, 14, 5};
  config.sample_count = 123;
  config.noise = 0.07;
  config.feature_scale = 3.5;
  config.gammas = {0.4, 0.04};
  config.seed = 99;
  config.output_path = "elsewhere";
  const std::string text = config_to_json(config);
  const ExperimentConfig parsed = parse_config_text(text);
  CHECK(parsed == config);
}

TEST_CASE("series CSV round-trips through the documented columns") {
  std::vector<RunRecord> records;
  records.push_back({0, 0.0, 1.0, 1.0, 0.5});
  records.push_back({100, 0.25, 0.75, 0.8, 0.25});
  records.push_back({200, 0.5, 0.7001, 0.70001, 0.125});
  const std::string path = "/tmp/sdr_test_series.csv";
  write_series_csv(path, records);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "iteration,wall_seconds,objective_y,objective_ergodic,dist_ergodic");

  const auto parsed = read_series_csv(path);
  REQUIRE(parsed.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(parsed[i].iteration == records[i].iteration);
    CHECK(parsed[i].wall_seconds == records[i].wall_seconds);
    CHECK(parsed[i].objective_y == records[i].objective_y);
    CHECK(parsed[i].objective_ergodic == records[i].objective_ergodic);
    CHECK(parsed[i].dist_ergodic == records[i].dist_ergodic);
  }
  std::remove(path.c_str());
}

TEST_CASE("reference solution JSON round-trip") {
  ReferenceSolution ref;
  ref.point = Vector(3);
  ref.point << 0.5, -1.25, 3.0;
  ref.objective = 0.625;
  ref.method = "test";
  ref.residual = 1e-7;
  const std::string path = "/tmp/sdr_test_reference.json";
  save_reference(path, ref);
  const ReferenceSolution loaded = load_reference(path);
  CHECK(loaded.point == ref.point);
  CHECK(loaded.objective == ref.objective);
  CHECK(loaded.method == ref.method);
  CHECK(loaded.residual == ref.residual);
  std::remove(path.c_str());
}
