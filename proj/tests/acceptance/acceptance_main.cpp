// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sdr/experiments.hpp"
#include "sdr/oracle.hpp"
#include "sdr/prox.hpp"
#include "sdr/rng.hpp"
#include "sdr/solvers.hpp"
#include "sdr/validation.hpp"

using namespace sdr;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int g_failures = 0;

void run_criterion(int id, const std::string& label, double budget_seconds,
                   const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome.pass = false;
    outcome.detail = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (seconds > budget_seconds) {
    outcome.pass = false;
    outcome.detail += (outcome.detail.empty() ? "" : "; ") + std::string("over time budget");
  }
  if (!outcome.pass) ++g_failures;
  std::printf("[%s] criterion %d: %s (%.1f s / %.0f s budget)%s%s\n",
              outcome.pass ? "PASS" : "FAIL", id, label.c_str(), seconds,
              budget_seconds, outcome.detail.empty() ? "" : " -- ",
              outcome.detail.c_str());
  std::fflush(stdout);
}

Vector random_vector(SeededRng& rng, int n, double scale) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * rng.next_normal();
  return v;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Shared default-config problem for criteria 6-8.
struct DefaultProblem {
  ExperimentConfig config;
  std::optional<Dataset> data;
  std::optional<GroupSpec> groups;
  std::optional<ReferenceSolution> ref;

  void ensure() {
    if (data) return;
    SeededRng rng = SeededRng::derive(config.seed, RngStream::plant);
    auto [d, w] = generate_dataset(config, rng);
    data.emplace(std::move(d));
    groups.emplace(make_chain_groups(config.dimension, config.layout));
    std::printf("  [setup] solving reference problem (budget %lld)...\n",
                static_cast<long long>(config.reference_budget));
    std::fflush(stdout);
    ref.emplace(reference_solve(*data, *groups, config.reference_budget));
    std::printf("  [setup] reference objective %.6f, |x*| = %.4f, residual %.2e\n",
                ref->objective, ref->point.norm(), ref->residual);
    std::fflush(stdout);
  }
};

DefaultProblem g_problem;
std::vector<ProbeRow> g_probe_rows;  // filled by criterion 6, reused by 7

// Random prox instances for the nonexpansiveness and Moreau suites.
struct ProxInstance {
  std::function<Vector(const Vector&)> apply;
  std::function<double(const Vector&)> phi;
  double gamma;
};

ProxInstance make_instance(int which, SeededRng& rng, int n) {
  const double gamma = std::exp(-2.0 + 2.5 * rng.next_unit());
  switch (which) {
    case 0: {
      auto s = std::make_shared<std::vector<int>>();
      for (int i = 0; i < n; ++i)
        if (rng.next_unit() < 0.6) s->push_back(i);
      if (s->empty()) s->push_back(0);
      const double w = 0.5 + 2.0 * rng.next_unit();
      return {[=](const Vector& x) { return prox_group_norm(x, *s, w, gamma).point; },
              [=](const Vector& x) { return group_norm_value(x, *s, w); },
              gamma};
    }
    case 1: {
      auto sample = std::make_shared<Sample>(
          Sample{random_vector(rng, n, 1.2), rng.next_unit() < 0.5 ? -1 : 1});
      return {[=](const Vector& x) { return prox_hinge_affine(x, *sample, gamma).point; },
              [=](const Vector& x) { return hinge_loss_value(x, *sample); },
              gamma};
    }
    case 2: {
      auto sample = std::make_shared<Sample>(
          Sample{random_vector(rng, n, 1.2), rng.next_unit() < 0.5 ? -1 : 1});
      return {[=](const Vector& x) {
                return prox_logistic_affine(x, *sample, gamma, 1e-14, 300).point;
              },
              [=](const Vector& x) { return logistic_loss_value(x, *sample); },
              gamma};
    }
    default: {
      std::vector<std::vector<int>> gs;
      const int n_groups = 2 + static_cast<int>(rng.next_index(2));
      for (int j = 0; j < n_groups; ++j) {
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
          if (rng.next_unit() < 0.6) s.push_back(i);
        if (s.empty()) s.push_back(static_cast<int>(rng.next_index(n)));
        gs.push_back(std::move(s));
      }
      auto spec = std::make_shared<GroupSpec>(n, gs);
      const double w = 0.5 + 1.5 * rng.next_unit();
      return {[=](const Vector& x) {
                return prox_overlap_group_sum(x, *spec, w, gamma, 1e-12, 200000).point;
              },
              [=](const Vector& x) { return overlap_group_sum_value(x, *spec, w); },
              gamma};
    }
  }
}

Outcome criterion1_prox_oracle_agreement() {
  const auto rows = run_prox_oracle_check(20240801, 100, 1e-6, 1e-8);
  Outcome o;
  for (const auto& row : rows) {
    o.detail += row.name + " err " + fmt(row.max_abs_error) + "; ";
    o.pass = o.pass && row.pass;
  }
  return o;
}

Outcome criterion2_nonexpansiveness() {
  SeededRng rng(777);
  double worst = -1.0;
  for (int which = 0; which < 4; ++which) {
    for (int t = 0; t < 1000; ++t) {
      const int n = 2 + static_cast<int>(rng.next_index(9));  // N <= 10
      const ProxInstance inst = make_instance(which, rng, n);
      const Vector x = random_vector(rng, n, 3.0);
      const Vector y = random_vector(rng, n, 3.0);
      const double lhs = (inst.apply(x) - inst.apply(y)).norm();
      const double rhs = (x - y).norm();
      worst = std::max(worst, lhs - rhs);
      if (lhs > rhs + 1e-10)
        return {false, "violation " + fmt(lhs - rhs) + " at trial " +
                           std::to_string(t)};
    }
  }
  return {true, "worst slack " + fmt(worst)};
}

Outcome criterion3_moreau_identity() {
  SeededRng rng(888);
  double worst = 0.0;
  for (int which = 0; which < 4; ++which) {
    for (int t = 0; t < 100; ++t) {
      const int n = 2 + static_cast<int>(rng.next_index(3));
      const ProxInstance inst = make_instance(which, rng, n);
      const Vector x = random_vector(rng, n, 2.0);
      const auto envelope = [&](const Vector& point) {
        const Vector p = inst.apply(point);
        return inst.phi(p) + (p - point).squaredNorm() / (2.0 * inst.gamma);
      };
      const Vector analytic = (x - inst.apply(x)) / inst.gamma;
      Vector fd(n);
      const double h = 1e-5;
      for (int i = 0; i < n; ++i) {
        Vector hi = x, lo = x;
        hi[i] += h;
        lo[i] -= h;
        fd[i] = (envelope(hi) - envelope(lo)) / (2.0 * h);
      }
      const double rel =
          (fd - analytic).norm() / std::max(1.0, analytic.norm());
      worst = std::max(worst, rel);
      if (rel > 1e-4)
        return {false, "relative error " + fmt(rel)};
    }
  }
  return {true, "worst relative error " + fmt(worst)};
}

Outcome criterion4_deterministic_convergence() {
  // Fixed 2-D problem: one sample xi = (3, 1), eta = +1; overlapping groups
  // {0} and {0, 1}. Oracle-computed minimum, then plain DR at gamma = 0.1.
  Vector xi(2);
  xi << 3.0, 1.0;
  std::vector<Sample> samples{{xi, 1}};
  const Dataset data(std::move(samples));
  const GroupSpec groups(2, {{0}, {0, 1}});
  const ReferenceSolution ref = reference_solve(data, groups, 100000);

  const double gamma = 0.1;
  const Sample& sample = data[0];
  DrState state;
  state.x = Vector::Zero(2);
  state.y = state.z = Vector::Zero(2);
  state.gamma = gamma;
  const ProxMap prox_f = [&](const Vector& v) {
    return prox_hinge_affine(v, sample, gamma).point;
  };
  const ProxMap prox_g = [&](const Vector& v) {
    return prox_overlap_group_sum(v, groups, 1.0, gamma, 1e-12, 100000).point;
  };
  double gap = std::numeric_limits<double>::infinity();
  std::int64_t k = 0;
  for (; k < 100000; ++k) {
    state = dr_step_deterministic(state, prox_f, prox_g);
    gap = empirical_objective(state.y, data, groups) - ref.objective;
    if (std::abs(gap) < 1e-6) break;
  }
  return {std::abs(gap) < 1e-6,
          "objective gap " + fmt(gap) + " after " + std::to_string(k + 1) +
              " iterations (reference " + fmt(ref.objective) + ")"};
}

Outcome criterion5_degenerate_equivalence() {
  std::vector<Sample> samples;
  Vector xi(2);
  xi << 0.9, -0.4;
  samples.push_back({xi, 1});
  const Dataset data(std::move(samples));
  const GroupSpec groups(2, {{0, 1}});
  const double gamma = 0.3;

  RunOptions opts;
  opts.record_every = 1000;
  opts.snapshot_every = 1;
  opts.init_scale = 1.0;
  const Trajectory traj = run_stochastic_dr(data, groups, gamma, 1000, 7, opts);

  DrState state;
  state.x = traj.initial_point;
  state.y = state.z = Vector::Zero(2);
  state.gamma = gamma;
  const Sample& sample = data[0];
  const ProxMap prox_f = [&](const Vector& v) {
    return prox_hinge_affine(v, sample, gamma).point;
  };
  const ProxMap prox_g = [&](const Vector& v) {
    return prox_group_norm(v, groups.group(0), 1.0, gamma).point;
  };
  for (std::int64_t k = 1; k <= 1000; ++k) {
    state = dr_step_deterministic(state, prox_f, prox_g);
    const Vector& recorded = traj.snapshots[static_cast<std::size_t>(k)];
    if (state.x[0] != recorded[0] || state.x[1] != recorded[1])
      return {false, "trajectories diverge at step " + std::to_string(k)};
  }
  return {true, "1000 steps bitwise identical"};
}

Outcome criterion6_convergence_probe() {
  g_problem.ensure();
  const ExperimentConfig& config = g_problem.config;
  const double epsilon = config.epsilon_rel * g_problem.ref->point.norm();
  g_probe_rows = convergence_probe(*g_problem.data, *g_problem.groups,
                                config.gammas, config.n_iters, config.n_seeds,
                                epsilon, *g_problem.ref, config.seed,
                                config.init_scale);
  Outcome o;
  std::string table;
  for (const auto& row : g_probe_rows)
    table += "P(gamma=" + fmt(row.gamma) + ") = " + fmt(row.prob_final_ergodic) +
             " (cesaro " + fmt(row.cesaro_tail_mean) + ", mean dist " +
             fmt(row.mean_final_ergodic_dist) + "); ";
  o.detail = "epsilon " + fmt(epsilon) + "; " + table;

  // non-increasing in gamma with at most one inversion of magnitude <= 0.1
  const auto count_inversions = [](const std::vector<double>& p) {
    int inversions = 0;
    double worst = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i)
      if (p[i] > p[i - 1]) {
        ++inversions;
        worst = std::max(worst, p[i] - p[i - 1]);
      }
    return std::pair<int, double>{inversions, worst};
  };
  std::vector<double> probs, cesaro;
  for (const auto& row : g_probe_rows) {
    probs.push_back(row.prob_final_ergodic);
    cesaro.push_back(row.cesaro_tail_mean);
  }
  // rows are ordered by decreasing gamma (0.5, 0.05, 0.005): the sequence of
  // probabilities must be non-increasing from large gamma to small
  const auto [prob_inv, prob_mag] = count_inversions(probs);
  if (prob_inv > 1 || prob_mag > 0.1) {
    o.pass = false;
    o.detail += "probability ordering violated; ";
  }
  const auto [ces_inv, ces_mag] = count_inversions(cesaro);
  if (ces_inv > 1 || ces_mag > 0.1) {
    o.pass = false;
    o.detail += "cesaro ordering violated; ";
  }
  if (!(probs.back() < probs.front())) {
    o.pass = false;
    o.detail += "P(smallest gamma) not strictly below P(largest gamma); ";
  }
  // paired seeds: the final ergodic distance should shrink with the step
  // size for nearly every seed
  int paired_wins = 0;
  for (int k = 0; k < config.n_seeds; ++k)
    if (g_probe_rows.back().final_dists[static_cast<std::size_t>(k)] <
        g_probe_rows.front().final_dists[static_cast<std::size_t>(k)])
      ++paired_wins;
  o.detail += "paired d(small gamma) < d(large gamma) in " +
              std::to_string(paired_wins) + "/" + std::to_string(config.n_seeds);
  if (paired_wins < 16) o.pass = false;
  return o;
}

Outcome criterion7_stability() {
  if (g_probe_rows.empty()) return {false, "criterion 6 did not run"};
  Outcome o;
  double sup_norm = 0.0;
  int divergences = 0;
  for (const auto& row : g_probe_rows) {
    sup_norm = std::max(sup_norm, row.max_state_norm);
    divergences += row.divergence_count;
  }
  o.pass = sup_norm < 1e3 && divergences == 0;
  o.detail = "sup ||x_n|| = " + fmt(sup_norm) + ", divergences " +
             std::to_string(divergences);
  return o;
}

Outcome criterion8_figure1_reproduction() {
  g_problem.ensure();
  const BenchmarkReport report = run_benchmark(g_problem.config, *g_problem.data,
                                               *g_problem.groups, *g_problem.ref);
  Outcome o;
  const int n = g_problem.config.n_seeds;
  o.detail = "stochastic wins " + std::to_string(report.stochastic_wins) + "/" +
             std::to_string(n) + " (threshold " + fmt(report.threshold) + ")";
  o.pass = report.stochastic_wins >= 15;

  // every final ergodic objective lands within 5% of the reference, and the
  // reference is never beaten by more than the stated slack
  double worst_final = 0.0;
  double best_final = std::numeric_limits<double>::infinity();
  double mean_iter_sdr = 0.0, mean_iter_psdr = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto& s = report.stochastic[static_cast<std::size_t>(k)];
    const auto& p = report.partial[static_cast<std::size_t>(k)];
    worst_final = std::max({worst_final, s.final_objective_ergodic,
                            p.final_objective_ergodic});
    best_final = std::min({best_final, s.final_objective_ergodic,
                           p.final_objective_ergodic});
    mean_iter_sdr += s.mean_iteration_seconds / n;
    mean_iter_psdr += p.mean_iteration_seconds / n;
  }
  if (worst_final > report.threshold) {
    o.pass = false;
    o.detail += "; a final ergodic objective missed the 5% band (" +
                fmt(worst_final) + ")";
  }
  if (best_final < report.reference_objective - 1e-6) {
    o.pass = false;
    o.detail += "; the reference oracle was beaten (" + fmt(best_final) + ")";
  }
  if (mean_iter_psdr <= mean_iter_sdr) {
    o.pass = false;
    o.detail += "; full-prox iterations were not slower";
  }
  o.detail += "; per-iteration s: stochastic " + fmt(mean_iter_sdr) +
              " vs partial " + fmt(mean_iter_psdr);
  return o;
}

Outcome criterion9_ergodic_streaming() {
  SeededRng rng(2468);
  ErgodicAverage stream;
  Vector batch_sum = Vector::Zero(5);
  double worst = 0.0;
  for (int i = 1; i <= 10000; ++i) {
    const Vector x = random_vector(rng, 5, 2.0);
    stream = update_ergodic(std::move(stream), x);
    batch_sum += x;
    const Vector batch = batch_sum / static_cast<double>(i);
    worst = std::max(worst, (stream.mean - batch).norm() /
                                std::max(1.0, batch.norm()));
  }
  return {worst < 1e-10, "worst relative deviation " + fmt(worst)};
}

}  // namespace

int main() {
  std::printf("acceptance suite: default config N=%d, g=%d, m=%d, %d seeds\n",
              g_problem.config.dimension, g_problem.config.layout.count,
              g_problem.config.sample_count, g_problem.config.n_seeds);
  run_criterion(1, "prox operators match the numerical oracle (1e-6)", 30,
                criterion1_prox_oracle_agreement);
  run_criterion(2, "nonexpansiveness, 1000 random pairs per prox", 10,
                criterion2_nonexpansiveness);
  run_criterion(3, "Moreau gradient vs central differences (1e-4 rel)", 10,
                criterion3_moreau_identity);
  run_criterion(4, "deterministic DR reaches the 2-D optimum (1e-6)", 5,
                criterion4_deterministic_convergence);
  run_criterion(5, "degenerate stochastic run equals deterministic bitwise", 1,
                criterion5_degenerate_equivalence);
  run_criterion(6, "step-size probe: P(d >= eps) decreases with the step", 300,
                criterion6_convergence_probe);
  run_criterion(7, "stability: bounded states, no divergence", 5,
                criterion7_stability);
  run_criterion(8, "stochastic DR reaches the threshold first (>= 15/20)", 300,
                criterion8_figure1_reproduction);
  run_criterion(9, "streaming ergodic mean equals batch mean (1e-10)", 1,
                criterion9_ergodic_streaming);

  if (g_failures == 0) {
    std::printf("ACCEPTANCE: all 9 criteria passed\n");
    return 0;
  }
  std::printf("ACCEPTANCE: %d criterion(s) failed\n", g_failures);
  return 1;
}
