// Command-line front end: solve | benchmark | probe | prox-check | oracle.
// Results are written as CSV time series plus a JSON summary that echoes the
// full effective configuration, so any run can be reproduced exactly.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdr/config_io.hpp"
#include "sdr/experiments.hpp"
#include "sdr/oracle.hpp"
#include "sdr/prox.hpp"
#include "sdr/report_io.hpp"
#include "sdr/solvers.hpp"
#include "sdr/validation.hpp"
#include "sdr/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "results";
  std::string ref_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> gamma;
  std::optional<std::int64_t> iters;
  std::optional<int> seeds;
  std::optional<double> epsilon;
  std::vector<double> gammas;
  std::string algo = "sdr";
  std::int64_t snapshot_every = 0;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON experiment config");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--seed", flags.seed, "run seed (overrides config)");
  cmd->add_option("--iters", flags.iters, "iteration count (overrides config)");
}

sdr::ExperimentConfig load_config(const CommonFlags& flags) {
  sdr::ExperimentConfig config;
  if (!flags.config_path.empty()) config = sdr::parse_config(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.gamma) config.benchmark_gamma = *flags.gamma;
  if (flags.iters) config.n_iters = *flags.iters;
  if (flags.seeds) config.n_seeds = *flags.seeds;
  if (!flags.gammas.empty()) config.gammas = flags.gammas;
  sdr::validate_config(config);
  return config;
}

json config_echo(const sdr::ExperimentConfig& config) {
  return json::parse(sdr::config_to_json(config));
}

json summary_skeleton(const std::string& command,
                      const sdr::ExperimentConfig& config) {
  json summary;
  summary["command"] = command;
  summary["version"] = sdr::kVersion;
  summary["seed"] = config.seed;
  summary["config"] = config_echo(config);
  return summary;
}

void write_summary(const fs::path& path, const json& summary) {
  std::ofstream out(path);
  if (!out) sdr::fail(sdr::ErrorKind::io, "cannot open " + path.string());
  out << summary.dump(2) << '\n';
}

/// Loads --ref, falls back to <out>/reference.json, otherwise computes the
/// reference solution (and stores it for reuse).
sdr::ReferenceSolution obtain_reference(const CommonFlags& flags,
                                        const sdr::ExperimentConfig& config,
                                        const sdr::Dataset& data,
                                        const sdr::GroupSpec& groups) {
  if (!flags.ref_path.empty()) return sdr::load_reference(flags.ref_path);
  const fs::path cached = fs::path(flags.out_dir) / "reference.json";
  if (fs::exists(cached)) return sdr::load_reference(cached.string());
  std::cerr << "computing reference solution (budget "
            << config.reference_budget << ")...\n";
  sdr::ReferenceSolution ref =
      sdr::reference_solve(data, groups, config.reference_budget);
  sdr::save_reference(cached.string(), ref);
  return ref;
}

json histogram_json(const sdr::HistogramData& h) {
  return json{{"lo", h.lo}, {"hi", h.hi}, {"counts", h.counts}};
}

int cmd_solve(const CommonFlags& flags) {
  const sdr::ExperimentConfig config = load_config(flags);
  fs::create_directories(flags.out_dir);

  sdr::SeededRng data_rng =
      sdr::SeededRng::derive(config.seed, sdr::RngStream::plant);
  auto [data, weights] = sdr::generate_dataset(config, data_rng);
  const sdr::GroupSpec groups =
      sdr::make_chain_groups(config.dimension, config.layout);

  std::optional<sdr::ReferenceSolution> ref;
  if (!flags.ref_path.empty()) {
    ref = sdr::load_reference(flags.ref_path);
  } else {
    const fs::path cached = fs::path(flags.out_dir) / "reference.json";
    if (fs::exists(cached)) ref = sdr::load_reference(cached.string());
  }

  sdr::RunOptions opts;
  opts.record_every = config.record_every;
  opts.init_scale = config.init_scale;
  opts.dykstra_tol = config.dykstra_tol;
  opts.snapshot_every = flags.snapshot_every;
  if (ref) opts.reference = &ref->point;

  const double gamma = flags.gamma ? *flags.gamma : config.benchmark_gamma;
  sdr::Trajectory traj;
  if (flags.algo == "sdr") {
    traj = sdr::run_stochastic_dr(data, groups, gamma, config.n_iters,
                                  config.seed, opts);
  } else if (flags.algo == "psdr") {
    traj = sdr::run_partially_stochastic_dr(data, groups, gamma, config.n_iters,
                                            config.seed, opts);
  } else if (flags.algo == "dr") {
    traj = sdr::run_deterministic_dr(data, groups, gamma, config.n_iters,
                                     config.seed, opts);
  } else {
    sdr::fail(sdr::ErrorKind::invalid_argument,
              "--algo must be one of sdr|psdr|dr, got '" + flags.algo + "'");
  }

  const fs::path series_path = fs::path(flags.out_dir) / "series.csv";
  sdr::write_series_csv(series_path.string(), traj.records);

  if (flags.snapshot_every > 0) {
    const fs::path snap_path = fs::path(flags.out_dir) / "snapshots.csv";
    std::ofstream snap(snap_path);
    snap << "iteration";
    for (int d = 0; d < config.dimension; ++d) snap << ",x" << d;
    snap << '\n';
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
      snap << (static_cast<std::int64_t>(k) * flags.snapshot_every);
      for (double v : traj.snapshots[k]) snap << ',' << sdr::format_double(v);
      snap << '\n';
    }
  }

  json summary = summary_skeleton("solve", config);
  summary["algo"] = flags.algo;
  summary["gamma"] = gamma;
  summary["iterations_run"] = traj.iterations;
  summary["series"] = series_path.string();
  summary["final"] = {
      {"objective_y", traj.records.back().objective_y},
      {"objective_ergodic", traj.records.back().objective_ergodic},
      {"dist_ergodic", traj.records.back().dist_ergodic},
      {"max_state_norm", traj.max_state_norm},
      {"wall_seconds", traj.total_wall_seconds},
      {"sample_draw_hash", traj.sample_draw_hash},
      {"group_draw_hash", traj.group_draw_hash},
  };
  if (ref) summary["final"]["mean_sq_dist_increment"] = traj.mean_sq_dist_increment;
  write_summary(fs::path(flags.out_dir) / "summary.json", summary);
  std::cout << "final objective at y: " << traj.records.back().objective_y
            << ", ergodic: " << traj.records.back().objective_ergodic << '\n';
  return 0;
}

int cmd_benchmark(const CommonFlags& flags) {
  const sdr::ExperimentConfig config = load_config(flags);
  fs::create_directories(flags.out_dir);

  sdr::SeededRng data_rng =
      sdr::SeededRng::derive(config.seed, sdr::RngStream::plant);
  auto [data, weights] = sdr::generate_dataset(config, data_rng);
  const sdr::GroupSpec groups =
      sdr::make_chain_groups(config.dimension, config.layout);
  const sdr::ReferenceSolution ref = obtain_reference(flags, config, data, groups);

  const sdr::BenchmarkReport report = sdr::run_benchmark(config, data, groups, ref);

  const fs::path sdr_path = fs::path(flags.out_dir) / "stochastic_dr.csv";
  const fs::path psdr_path = fs::path(flags.out_dir) / "partially_stochastic_dr.csv";
  sdr::write_series_csv(sdr_path.string(), report.stochastic[0].records);
  sdr::write_series_csv(psdr_path.string(), report.partial[0].records);

  json summary = summary_skeleton("benchmark", config);
  summary["reference_objective"] = report.reference_objective;
  summary["threshold"] = report.threshold;
  summary["gamma"] = report.gamma;
  summary["stochastic_wins"] = report.stochastic_wins;
  summary["series"] = {sdr_path.string(), psdr_path.string()};
  summary["histograms"] = {
      {"initialization", histogram_json(report.init_histogram)},
      {"stochastic_last", histogram_json(report.stochastic_last_histogram)},
      {"partially_stochastic_last", histogram_json(report.partial_last_histogram)},
  };
  const auto series_stats = [&](const std::vector<sdr::AlgorithmSeries>& all) {
    json rows = json::array();
    for (const auto& s : all) {
      rows.push_back({{"seed_index", s.seed_index},
                      {"time_to_threshold", s.time_to_threshold},
                      {"final_objective_ergodic", s.final_objective_ergodic},
                      {"final_dist_ergodic", s.final_dist_ergodic},
                      {"mean_iteration_seconds", s.mean_iteration_seconds}});
    }
    return rows;
  };
  summary["stochastic"] = series_stats(report.stochastic);
  summary["partially_stochastic"] = series_stats(report.partial);
  write_summary(fs::path(flags.out_dir) / "summary.json", summary);

  std::cout << "stochastic DR won " << report.stochastic_wins << " of "
            << config.n_seeds << " paired seeds (threshold "
            << report.threshold << ")\n";
  return 0;
}

int cmd_probe(const CommonFlags& flags) {
  const sdr::ExperimentConfig config = load_config(flags);
  fs::create_directories(flags.out_dir);

  sdr::SeededRng data_rng =
      sdr::SeededRng::derive(config.seed, sdr::RngStream::plant);
  auto [data, weights] = sdr::generate_dataset(config, data_rng);
  const sdr::GroupSpec groups =
      sdr::make_chain_groups(config.dimension, config.layout);
  const sdr::ReferenceSolution ref = obtain_reference(flags, config, data, groups);

  const double epsilon =
      flags.epsilon ? *flags.epsilon : config.epsilon_rel * ref.point.norm();
  const auto rows = sdr::convergence_probe(data, groups, config.gammas,
                                        config.n_iters, config.n_seeds, epsilon,
                                        ref, config.seed, config.init_scale);

  const fs::path table_path = fs::path(flags.out_dir) / "probe.csv";
  sdr::write_probe_csv(table_path.string(), rows);

  json summary = summary_skeleton("probe", config);
  summary["epsilon"] = epsilon;
  summary["reference_objective"] = ref.objective;
  summary["table"] = table_path.string();
  json table = json::array();
  for (const auto& r : rows) {
    table.push_back({{"gamma", r.gamma},
                     {"prob_ergodic", r.prob_final_ergodic},
                     {"cesaro_mean", r.cesaro_tail_mean},
                     {"mean_dist_ergodic", r.mean_final_ergodic_dist},
                     {"max_state_norm", r.max_state_norm},
                     {"mean_sq_dist_increment", r.mean_sq_dist_increment},
                     {"divergences", r.divergence_count}});
  }
  summary["rows"] = table;
  write_summary(fs::path(flags.out_dir) / "summary.json", summary);

  for (const auto& r : rows)
    std::cout << "gamma " << r.gamma << ": P(d >= eps) = " << r.prob_final_ergodic
              << ", cesaro = " << r.cesaro_tail_mean << '\n';
  return 0;
}

int cmd_prox_check(std::uint64_t seed, int trials) {
  const auto rows = sdr::run_prox_oracle_check(seed, trials);
  bool all_pass = true;
  for (const auto& row : rows) {
    std::cout << (row.pass ? "PASS " : "FAIL ") << row.name << ": max error "
              << row.max_abs_error << " over " << row.trials
              << " trials (tolerance " << row.tolerance << ")\n";
    all_pass = all_pass && row.pass;
  }
  return all_pass ? 0 : 1;
}

int cmd_oracle(const CommonFlags& flags) {
  const sdr::ExperimentConfig config = load_config(flags);
  fs::create_directories(flags.out_dir);

  sdr::SeededRng data_rng =
      sdr::SeededRng::derive(config.seed, sdr::RngStream::plant);
  auto [data, weights] = sdr::generate_dataset(config, data_rng);
  const sdr::GroupSpec groups =
      sdr::make_chain_groups(config.dimension, config.layout);

  const sdr::ReferenceSolution ref =
      sdr::reference_solve(data, groups, config.reference_budget);
  const fs::path ref_path = fs::path(flags.out_dir) / "reference.json";
  sdr::save_reference(ref_path.string(), ref);

  json summary = summary_skeleton("oracle", config);
  summary["reference"] = {{"objective", ref.objective},
                          {"method", ref.method},
                          {"residual", ref.residual},
                          {"point_norm", ref.point.norm()},
                          {"possibly_non_singleton", ref.possibly_non_singleton},
                          {"path", ref_path.string()}};
  write_summary(fs::path(flags.out_dir) / "summary.json", summary);
  std::cout << "reference objective " << ref.objective << " (residual "
            << ref.residual << ") -> " << ref_path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Douglas-Rachford splitting toolbox"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sdr::kVersion));

  CommonFlags solve_flags, bench_flags, probe_flags, oracle_flags;
  std::uint64_t check_seed = 20240101;
  int check_trials = 100;

  CLI::App* solve = app.add_subcommand("solve", "run one algorithm / one seed");
  add_common_flags(solve, solve_flags);
  solve->add_option("--algo", solve_flags.algo, "sdr|psdr|dr")
      ->check(CLI::IsMember({"sdr", "psdr", "dr"}));
  solve->add_option("--gamma", solve_flags.gamma, "step size");
  solve->add_option("--ref", solve_flags.ref_path, "reference.json for distances");
  solve->add_option("--snapshot-every", solve_flags.snapshot_every,
                    "dump every k-th iterate to snapshots.csv");

  CLI::App* bench = app.add_subcommand(
      "benchmark", "paired fully- vs partially-stochastic comparison");
  add_common_flags(bench, bench_flags);
  bench->add_option("--gamma", bench_flags.gamma, "benchmark step size");
  bench->add_option("--seeds", bench_flags.seeds, "number of paired seeds");
  bench->add_option("--ref", bench_flags.ref_path, "precomputed reference.json");

  CLI::App* probe = app.add_subcommand(
      "probe", "Monte-Carlo estimate of P(d(ergodic mean, argmin) >= eps)");
  add_common_flags(probe, probe_flags);
  probe->add_option("--gammas", probe_flags.gammas, "step sizes")->delimiter(',');
  probe->add_option("--seeds", probe_flags.seeds, "seeds per step size");
  probe->add_option("--epsilon", probe_flags.epsilon,
                    "distance threshold (default epsilon_rel * ||x_star||)");
  probe->add_option("--ref", probe_flags.ref_path, "precomputed reference.json");

  CLI::App* check = app.add_subcommand(
      "prox-check", "validate the prox operators against the numerical oracle");
  check->add_option("--seed", check_seed, "rng seed");
  check->add_option("--trials", check_trials, "trials per operator");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "compute and store a reference solution for the config");
  add_common_flags(oracle, oracle_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(solve_flags);
    if (bench->parsed()) return cmd_benchmark(bench_flags);
    if (probe->parsed()) return cmd_probe(probe_flags);
    if (check->parsed()) return cmd_prox_check(check_seed, check_trials);
    if (oracle->parsed()) return cmd_oracle(oracle_flags);
  } catch (const sdr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
