#include "sdr/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace sdr {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

namespace {

double parse_double(const std::string& token, const std::string& where) {
  if (token == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (token == "inf") return std::numeric_limits<double>::infinity();
  if (token == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto result =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc{} || result.ptr != token.data() + token.size())
    fail(ErrorKind::io, where + ": cannot parse number '" + token + "'");
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string token;
  while (std::getline(ss, token, ',')) out.push_back(token);
  return out;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot open " + path + " for writing");
  return out;
}

}  // namespace

void write_series_csv(const std::string& path, std::span<const RunRecord> records) {
  auto out = open_for_write(path);
  out << "iteration,wall_seconds,objective_y,objective_ergodic,dist_ergodic\n";
  for (const RunRecord& r : records) {
    out << r.iteration << ',' << format_double(r.wall_seconds) << ','
        << format_double(r.objective_y) << ','
        << format_double(r.objective_ergodic) << ','
        << format_double(r.dist_ergodic) << '\n';
  }
  if (!out) fail(ErrorKind::io, "write failed: " + path);
}

std::vector<RunRecord> read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::io, path + ": empty file");
  if (line != "iteration,wall_seconds,objective_y,objective_ergodic,dist_ergodic")
    fail(ErrorKind::io, path + ": unexpected header '" + line + "'");
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tokens = split_csv_line(line);
    if (tokens.size() != 5) fail(ErrorKind::io, path + ": malformed row '" + line + "'");
    RunRecord r;
    r.iteration = static_cast<std::int64_t>(parse_double(tokens[0], path));
    r.wall_seconds = parse_double(tokens[1], path);
    r.objective_y = parse_double(tokens[2], path);
    r.objective_ergodic = parse_double(tokens[3], path);
    r.dist_ergodic = parse_double(tokens[4], path);
    records.push_back(r);
  }
  return records;
}

void write_probe_csv(const std::string& path, std::span<const ProbeRow> rows) {
  auto out = open_for_write(path);
  out << "gamma,prob_ergodic,cesaro_mean,mean_dist_ergodic,max_state_norm,"
         "mean_sq_dist_increment,divergences,seeds\n";
  for (const ProbeRow& r : rows) {
    out << format_double(r.gamma) << ',' << format_double(r.prob_final_ergodic)
        << ',' << format_double(r.cesaro_tail_mean) << ','
        << format_double(r.mean_final_ergodic_dist) << ','
        << format_double(r.max_state_norm) << ','
        << format_double(r.mean_sq_dist_increment) << ',' << r.divergence_count
        << ',' << r.n_seeds << '\n';
  }
  if (!out) fail(ErrorKind::io, "write failed: " + path);
}

void save_reference(const std::string& path, const ReferenceSolution& ref) {
  nlohmann::json root;
  root["point"] = std::vector<double>(ref.point.data(),
                                      ref.point.data() + ref.point.size());
  root["objective"] = ref.objective;
  root["method"] = ref.method;
  root["residual"] = ref.residual;
  root["possibly_non_singleton"] = ref.possibly_non_singleton;
  auto out = open_for_write(path);
  out << root.dump(2) << '\n';
  if (!out) fail(ErrorKind::io, "write failed: " + path);
}

ReferenceSolution load_reference(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open " + path);
  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io, path + ": malformed reference file: " + e.what());
  }
  ReferenceSolution ref;
  try {
    const auto coords = root.at("point").get<std::vector<double>>();
    ref.point = Eigen::Map<const Vector>(coords.data(),
                                         static_cast<Eigen::Index>(coords.size()));
    ref.objective = root.at("objective").get<double>();
    ref.method = root.at("method").get<std::string>();
    ref.residual = root.at("residual").get<double>();
    ref.possibly_non_singleton = root.value("possibly_non_singleton", false);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io, path + ": incomplete reference file: " + e.what());
  }
  return ref;
}

}  // namespace sdr
