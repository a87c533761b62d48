#include "sdr/config_io.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace sdr {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& scope) {
  for (const auto& item : obj.items())
    if (!known.contains(item.key()))
      fail(ErrorKind::config, scope + item.key() + ": unknown key");
}

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::config, std::string(key) + ": wrong type");
  }
}

}  // namespace

void validate_config(const ExperimentConfig& c) {
  if (c.dimension < 1) fail(ErrorKind::config, "dimension: must be >= 1");
  if (c.sample_count < 1) fail(ErrorKind::config, "sample_count: must be >= 1");
  if (!(c.noise >= 0.0 && c.noise <= 0.5))
    fail(ErrorKind::config, "noise: must be in [0, 0.5]");
  if (!(c.feature_scale > 0.0))
    fail(ErrorKind::config, "feature_scale: must be > 0");
  if (!(c.margin_gap >= 0.0 && c.margin_gap < 3.0))
    fail(ErrorKind::config, "margin_gap: must be in [0, 3)");
  if (c.active_groups < 1)
    fail(ErrorKind::config, "active_groups: must be >= 1");
  if (c.gammas.empty()) fail(ErrorKind::config, "gammas: must be non-empty");
  for (double gamma : c.gammas)
    if (!(gamma > 0.0)) fail(ErrorKind::config, "gammas: every value must be > 0");
  if (!(c.benchmark_gamma > 0.0))
    fail(ErrorKind::config, "benchmark_gamma: must be > 0");
  if (c.n_iters < 1) fail(ErrorKind::config, "iterations: must be >= 1");
  if (c.n_seeds < 1) fail(ErrorKind::config, "seeds: must be >= 1");
  if (c.record_every < 1) fail(ErrorKind::config, "record_every: must be >= 1");
  if (!(c.epsilon_rel > 0.0)) fail(ErrorKind::config, "epsilon_rel: must be > 0");
  if (!(c.init_scale >= 0.0)) fail(ErrorKind::config, "init_scale: must be >= 0");
  if (!(c.dykstra_tol > 0.0)) fail(ErrorKind::config, "dykstra_tol: must be > 0");
  if (c.reference_budget < 100000)
    fail(ErrorKind::config, "reference_budget: must be >= 100000");
  if (c.output_path.empty()) fail(ErrorKind::config, "output_path: must be non-empty");
  // layout constraints and coverage
  make_chain_groups(c.dimension, c.layout);
}

ExperimentConfig parse_config_text(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::config, std::string("config: malformed JSON: ") + e.what());
  }
  if (!root.is_object()) fail(ErrorKind::config, "config: top level must be an object");

  static const std::set<std::string> known{
      "dimension", "groups", "sample_count", "noise", "feature_scale",
      "margin_gap", "active_groups", "gammas", "benchmark_gamma", "iterations", "seeds",
      "record_every", "seed", "epsilon_rel", "init_scale", "dykstra_tol",
      "reference_budget", "output_path"};
  reject_unknown_keys(root, known, "");

  ExperimentConfig c;
  read_field(root, "dimension", c.dimension);
  if (root.contains("groups")) {
    const json& layout = root.at("groups");
    if (!layout.is_object()) fail(ErrorKind::config, "groups: must be an object");
    reject_unknown_keys(layout, {"count", "size", "overlap"}, "groups.");
    read_field(layout, "count", c.layout.count);
    read_field(layout, "size", c.layout.size);
    read_field(layout, "overlap", c.layout.overlap);
  }
  read_field(root, "sample_count", c.sample_count);
  read_field(root, "noise", c.noise);
  read_field(root, "feature_scale", c.feature_scale);
  read_field(root, "margin_gap", c.margin_gap);
  read_field(root, "active_groups", c.active_groups);
  read_field(root, "gammas", c.gammas);
  read_field(root, "benchmark_gamma", c.benchmark_gamma);
  read_field(root, "iterations", c.n_iters);
  read_field(root, "seeds", c.n_seeds);
  read_field(root, "record_every", c.record_every);
  read_field(root, "seed", c.seed);
  read_field(root, "epsilon_rel", c.epsilon_rel);
  read_field(root, "init_scale", c.init_scale);
  read_field(root, "dykstra_tol", c.dykstra_tol);
  read_field(root, "reference_budget", c.reference_budget);
  read_field(root, "output_path", c.output_path);

  validate_config(c);
  return c;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "config: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

std::string config_to_json(const ExperimentConfig& c) {
  json root;
  root["dimension"] = c.dimension;
  root["groups"] = {{"count", c.layout.count},
                    {"size", c.layout.size},
                    {"overlap", c.layout.overlap}};
  root["sample_count"] = c.sample_count;
  root["noise"] = c.noise;
  root["feature_scale"] = c.feature_scale;
  root["margin_gap"] = c.margin_gap;
  root["active_groups"] = c.active_groups;
  root["gammas"] = c.gammas;
  root["benchmark_gamma"] = c.benchmark_gamma;
  root["iterations"] = c.n_iters;
  root["seeds"] = c.n_seeds;
  root["record_every"] = c.record_every;
  root["seed"] = c.seed;
  root["epsilon_rel"] = c.epsilon_rel;
  root["init_scale"] = c.init_scale;
  root["dykstra_tol"] = c.dykstra_tol;
  root["reference_budget"] = c.reference_budget;
  root["output_path"] = c.output_path;
  return root.dump(2);
}

}  // namespace sdr
