#include "sdr/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sdr/detail/prox_kernels.hpp"

namespace sdr {
namespace {

double prox_objective(const Vector& y, const Vector& x, double gamma,
                      double phi_at_y) {
  return 0.5 * (y - x).squaredNorm() + gamma * phi_at_y;
}

void check_gamma(double gamma, const char* who) {
  if (!(gamma > 0.0))
    fail(ErrorKind::invalid_argument, std::string(who) + ": gamma must be > 0");
}

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

}  // namespace

double group_norm_value(const Vector& x, std::span<const int> s, double weight) {
  double sq = 0.0;
  for (int idx : s) {
    if (idx < 0 || idx >= x.size())
      fail(ErrorKind::invalid_index,
           "group_norm_value: index " + std::to_string(idx) + " out of range");
    sq += x[idx] * x[idx];
  }
  return weight * std::sqrt(sq);
}

double overlap_group_sum_value(const Vector& x, const GroupSpec& groups,
                               double weight) {
  if (x.size() != groups.dimension())
    fail(ErrorKind::dimension_mismatch,
         "overlap_group_sum_value: vector dimension does not match groups");
  double total = 0.0;
  for (std::size_t j = 0; j < groups.group_count(); ++j)
    total += group_norm_value(x, groups.group(j), weight);
  return total;
}

double hinge_loss_value(const Vector& x, const Sample& sample) {
  if (x.size() != sample.features.size())
    fail(ErrorKind::dimension_mismatch, "hinge_loss_value: dimension mismatch");
  const double margin = static_cast<double>(sample.label) * sample.features.dot(x);
  return std::max(0.0, 1.0 - margin);
}

double logistic_loss_value(const Vector& x, const Sample& sample) {
  if (x.size() != sample.features.size())
    fail(ErrorKind::dimension_mismatch, "logistic_loss_value: dimension mismatch");
  const double margin = static_cast<double>(sample.label) * sample.features.dot(x);
  // log(1 + exp(-margin)) without overflow on either tail
  if (margin >= 0.0) return std::log1p(std::exp(-margin));
  return -margin + std::log1p(std::exp(margin));
}

ProxResult prox_group_norm(const Vector& x, std::span<const int> s,
                           double weight, double gamma) {
  check_gamma(gamma, "prox_group_norm");
  if (!(weight > 0.0))
    fail(ErrorKind::invalid_argument, "prox_group_norm: weight must be > 0");
  if (s.empty())
    fail(ErrorKind::invalid_argument, "prox_group_norm: empty index set");
  for (int idx : s)
    if (idx < 0 || idx >= x.size())
      fail(ErrorKind::invalid_index,
           "prox_group_norm: index " + std::to_string(idx) + " out of range");
  ProxResult result{x, 0.0};
  detail::block_soft_threshold(result.point, s, gamma * weight);
  result.objective_value =
      prox_objective(result.point, x, gamma, group_norm_value(result.point, s, weight));
  return result;
}

ProxResult prox_hinge_affine(const Vector& x, const Sample& sample, double gamma) {
  check_gamma(gamma, "prox_hinge_affine");
  if (x.size() != sample.features.size())
    fail(ErrorKind::dimension_mismatch, "prox_hinge_affine: dimension mismatch");
  ProxResult result;
  detail::hinge_prox_into(result.point, x, sample.features, sample.label,
                          sample.features.squaredNorm(), gamma);
  result.objective_value =
      prox_objective(result.point, x, gamma, hinge_loss_value(result.point, sample));
  return result;
}

ProxResult prox_logistic_affine(const Vector& x, const Sample& sample,
                                double gamma, double tol, int max_iter) {
  check_gamma(gamma, "prox_logistic_affine");
  if (!(tol > 0.0))
    fail(ErrorKind::invalid_argument, "prox_logistic_affine: tol must be > 0");
  if (x.size() != sample.features.size())
    fail(ErrorKind::dimension_mismatch, "prox_logistic_affine: dimension mismatch");

  const double a_sq = sample.features.squaredNorm();
  if (a_sq == 0.0) {
    // constant function: prox is the identity
    return {x, prox_objective(x, x, gamma, logistic_loss_value(x, sample))};
  }
  const double a_dot_x = static_cast<double>(sample.label) * sample.features.dot(x);

  // Solve psi(s) = s - gamma*(1 - sigmoid(a_dot_x + s*a_sq)) = 0.
  // 1 - sigmoid is in (0,1), so the root lies in (0, gamma); psi is strictly
  // increasing. Safeguarded Newton: a step that leaves the bracket or fails
  // to shrink it fast enough falls back to bisection (otherwise Newton can
  // ping-pong between the flat tails of the sigmoid without progress).
  auto psi = [&](double s) {
    return s - gamma * (1.0 - sigmoid(a_dot_x + s * a_sq));
  };
  double lo = 0.0, hi = gamma;
  double s = gamma * (1.0 - sigmoid(a_dot_x));
  double res = psi(s);
  double step_old = hi - lo;
  int it = 0;
  while (std::abs(res) > tol) {
    if (++it > max_iter)
      fail(ErrorKind::non_convergence,
           "prox_logistic_affine: no convergence after " +
               std::to_string(max_iter) + " iterations, residual " +
               std::to_string(std::abs(res)));
    if (res > 0.0) hi = s; else lo = s;
    const double sig = sigmoid(a_dot_x + s * a_sq);
    const double dpsi = 1.0 + gamma * a_sq * sig * (1.0 - sig);
    const double newton = s - res / dpsi;
    double step = std::abs(res / dpsi);
    if (newton <= lo || newton >= hi || 2.0 * step > step_old) {
      s = 0.5 * (lo + hi);
      step = 0.5 * (hi - lo);
    } else {
      s = newton;
    }
    step_old = step;
    res = psi(s);
  }

  ProxResult result;
  result.point = x + (s * static_cast<double>(sample.label)) * sample.features;
  result.objective_value =
      prox_objective(result.point, x, gamma, logistic_loss_value(result.point, sample));
  return result;
}

namespace detail {

double dykstra_overlap_prox(Vector& y, const GroupSpec& groups, double weight,
                            double gamma, double tol, int max_cycles,
                            DykstraWorkspace& ws) {
  const std::size_t g = groups.group_count();
  const double threshold = gamma * weight;
  ws.corrections.resize(g);
  for (std::size_t j = 0; j < g; ++j) {
    ws.corrections[j].resize(static_cast<Eigen::Index>(groups.group(j).size()));
    ws.corrections[j].setZero();
  }
  ws.previous.resize(y.size());

  double residual = std::numeric_limits<double>::infinity();
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    ws.previous = y;
    for (std::size_t j = 0; j < g; ++j) {
      const auto s = groups.group(j);
      Vector& p = ws.corrections[j];
      // v = y + p on the block, then one exact block soft-threshold
      double sq = 0.0;
      for (std::size_t k = 0; k < s.size(); ++k) {
        const double v = y[s[k]] + p[static_cast<Eigen::Index>(k)];
        p[static_cast<Eigen::Index>(k)] = v;  // p holds v until the prox is applied
        sq += v * v;
      }
      const double norm = std::sqrt(sq);
      const double scale = norm <= threshold ? 0.0 : 1.0 - threshold / norm;
      for (std::size_t k = 0; k < s.size(); ++k) {
        const double v = p[static_cast<Eigen::Index>(k)];
        const double prox_v = scale * v;
        y[s[k]] = prox_v;
        p[static_cast<Eigen::Index>(k)] = v - prox_v;
      }
    }
    residual = (y - ws.previous).norm();
    if (residual <= tol) return residual;
  }
  fail(ErrorKind::non_convergence,
       "prox_overlap_group_sum: " + std::to_string(max_cycles) +
           " cycles exhausted, residual " + std::to_string(residual));
}

}  // namespace detail

ProxResult prox_overlap_group_sum(const Vector& x, const GroupSpec& groups,
                                  double weight, double gamma, double tol,
                                  int max_cycles) {
  check_gamma(gamma, "prox_overlap_group_sum");
  if (!(weight > 0.0))
    fail(ErrorKind::invalid_argument, "prox_overlap_group_sum: weight must be > 0");
  if (!(tol > 0.0))
    fail(ErrorKind::invalid_argument, "prox_overlap_group_sum: tol must be > 0");
  if (x.size() != groups.dimension())
    fail(ErrorKind::dimension_mismatch,
         "prox_overlap_group_sum: vector dimension does not match groups");
  ProxResult result{x, 0.0};
  detail::DykstraWorkspace ws;
  detail::dykstra_overlap_prox(result.point, groups, weight, gamma, tol,
                               max_cycles, ws);
  result.objective_value = prox_objective(
      result.point, x, gamma, overlap_group_sum_value(result.point, groups, weight));
  return result;
}

MoreauEval moreau_eval(const ProxResult& prox_output, const Vector& x,
                       double phi_at_prox, double gamma) {
  check_gamma(gamma, "moreau_eval");
  if (prox_output.point.size() != x.size())
    fail(ErrorKind::dimension_mismatch, "moreau_eval: dimension mismatch");
  MoreauEval eval;
  eval.value = phi_at_prox + (prox_output.point - x).squaredNorm() / (2.0 * gamma);
  eval.gradient = (x - prox_output.point) / gamma;
  return eval;
}

namespace detail {
namespace {

/// Golden-section line search for min_t f(c + t*d), t in [-w, w].
double golden_line_search(const std::function<double(double)>& f, double w) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = -w, b = w;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 90 && (b - a) > 1e-14 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

Vector minimize_small_dim(const std::function<double(const Vector&)>& f,
                          Vector center, double initial_halfwidth,
                          double resolution) {
  const int n = static_cast<int>(center.size());
  if (n < 1 || n > 4)
    fail(ErrorKind::invalid_argument,
         "minimize_small_dim: dimension must be in [1, 4]");
  if (!(resolution > 0.0))
    fail(ErrorKind::invalid_argument, "minimize_small_dim: resolution must be > 0");

  constexpr int kPointsPerAxis = 9;
  const auto grid_scan = [&](const Vector& c, double R, Vector& best,
                             double& fbest) -> bool {
    // returns true if the argmin sits strictly inside the box
    int index[4] = {0, 0, 0, 0};
    Vector y(n);
    bool interior = true;
    int best_flat = -1;
    const int total = static_cast<int>(std::pow(kPointsPerAxis, n));
    for (int flat = 0; flat < total; ++flat) {
      int rem = flat;
      for (int d = 0; d < n; ++d) {
        index[d] = rem % kPointsPerAxis;
        rem /= kPointsPerAxis;
        y[d] = c[d] + R * (2.0 * index[d] / (kPointsPerAxis - 1) - 1.0);
      }
      const double fy = f(y);
      if (fy < fbest) {
        fbest = fy;
        best = y;
        best_flat = flat;
      }
    }
    if (best_flat >= 0) {
      int rem = best_flat;
      for (int d = 0; d < n; ++d) {
        const int id = rem % kPointsPerAxis;
        rem /= kPointsPerAxis;
        if (id == 0 || id == kPointsPerAxis - 1) interior = false;
      }
      return interior;
    }
    return true;  // no improvement found anywhere: already at the minimum
  };

  // Recentring zoom around a start point: shrink while the grid argmin is
  // interior, shift without shrinking when it hits the box boundary.
  const auto zoom = [&](Vector start, double R_start, double R_stop) {
    Vector best = start;
    double fbest = f(start);
    double R = R_start;
    int shifts = 0;
    while (R > R_stop && shifts < 400) {
      Vector cand = best;
      double fcand = fbest;
      const bool interior = grid_scan(best, R, cand, fcand);
      best = cand;
      fbest = fcand;
      if (interior) R *= 0.5; else ++shifts;
    }
    return std::pair<Vector, double>{best, fbest};
  };

  Vector best = center;
  double fbest = f(center);

  // Phase 1: expand the box until the minimizer is interior.
  double R = std::max(initial_halfwidth, 16.0 * resolution);
  for (int attempt = 0; attempt < 60; ++attempt) {
    Vector cand = best;
    double fcand = fbest;
    const bool interior = grid_scan(best, R, cand, fcand);
    best = cand;
    fbest = fcand;
    if (interior) break;
    R *= 3.0;
  }

  // Phase 2: zoom to the floor of the objective.
  const double stop_R = std::max(0.25 * resolution, 1e-12);
  {
    auto [zoom_best, zoom_f] = zoom(best, R, stop_R);
    best = zoom_best;
    fbest = zoom_f;
  }

  // Phase 3: crease-chord polish. The zoom lands on the nonsmooth floor near
  // the minimizer but cannot travel along it: axis grids and line searches
  // stall on zero-width kink creases. The nonsmooth sets of prox objectives
  // (margin hyperplanes, zeroed blocks) are affine, so a chord through two
  // floor points stays inside the floor, where the objective restricts to a
  // smooth strongly convex function. Drop perturbed starts back to the floor
  // and golden-search along the chords, shrinking the perturbation scale.
  std::uint64_t noise = 0x5EEDF00Dull;
  const auto next_noise_unit = [&noise]() {
    noise = noise * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(noise >> 11) * 0x1.0p-53;
  };
  // On a chord inside the floor the restriction of f is smooth and strongly
  // convex, so successive parabolic interpolation resolves the minimizer far
  // below the sqrt(machine-eps) plateau of pure value comparisons. The search
  // window is in absolute units so short chords still cover the residual.
  const auto line_minimize = [&](const Vector& direction, double window) {
    const auto g = [&](double t) { return f(best + t * direction); };
    double t = golden_line_search(g, window);
    double h = 0.1 * window;
    for (int it = 0; it < 14; ++it) {
      const double gm = g(t - h), g0 = g(t), gp = g(t + h);
      const double denom = gm - 2.0 * g0 + gp;
      double step;
      if (denom > 0.0)
        step = std::clamp(0.5 * h * (gm - gp) / denom, -4.0 * h, 4.0 * h);
      else
        step = gm < gp ? -h : h;
      if (g(t + step) < g0) t += step;
      h = std::max(std::abs(step), 0.25 * h);
      if (h < 1e-11 * (1.0 + std::abs(t))) break;
    }
    const Vector cand = best + t * direction;
    const double fcand = f(cand);
    if (fcand < fbest) {
      best = cand;
      fbest = fcand;
    }
  };

  double eta = 1e-2 * (1.0 + best.norm());
  const double eta_stop = std::max(2.0 * resolution, 4e-12);
  for (int round = 0; round < 60 && eta > eta_stop; ++round, eta *= 0.3) {
    // transverse scatter of the dropped points tilts the chords; keeping the
    // drop resolution proportional to eta bounds the tilt per round
    const double drop_stop = std::max(std::min(1e-3 * eta, stop_R), 1e-12);
    for (int j = 0; j <= n + 1; ++j) {
      Vector direction(n);
      double sq = 0.0;
      do {
        for (int d = 0; d < n; ++d) direction[d] = 2.0 * next_noise_unit() - 1.0;
        sq = direction.squaredNorm();
      } while (sq < 1e-4);
      const Vector q = best + (eta / std::sqrt(sq)) * direction;
      const Vector incumbent = best;
      auto [floor_point, floor_value] = zoom(q, eta, drop_stop);
      if (floor_value < fbest) {
        best = floor_point;
        fbest = floor_value;
      }
      // chord against the pre-drop incumbent: when the drop itself improved,
      // the tangential polish still has a direction to work along
      const Vector chord = floor_point - incumbent;
      const double len = chord.norm();
      if (len < 1e-15) continue;
      line_minimize(Vector(chord / len), std::max(16.0 * eta, 1e-2));
    }
  }

  // Final stage: precision polish along the floor. Chords between dropped
  // floor points are tilted by (transverse snap error)/(chord length), and a
  // tilted line search parks at a spurious minimum roughly
  // (kink slope)*(tilt) away, so the drops here use a much finer resolution
  // than the coarse rounds. Line sweeps over the chord directions then
  // minimize the smooth restriction of the objective on the affine floor.
  if (n > 1) {
    for (int outer = 0; outer < 2; ++outer) {
      const double eta_f = 1e-4 * (1.0 + best.norm());
      const double drop_stop = 1e-11;
      std::vector<Vector> floor_points;
      for (int j = 0; j < 2 * n + 2; ++j) {
        Vector direction(n);
        double sq = 0.0;
        do {
          for (int d = 0; d < n; ++d) direction[d] = 2.0 * next_noise_unit() - 1.0;
          sq = direction.squaredNorm();
        } while (sq < 1e-4);
        const Vector q = best + (eta_f / std::sqrt(sq)) * direction;
        auto [floor_point, floor_value] = zoom(q, eta_f, drop_stop);
        if (floor_value < fbest) {
          best = floor_point;
          fbest = floor_value;
        }
        floor_points.push_back(std::move(floor_point));
      }
      std::vector<Vector> directions;
      const auto add_direction = [&](const Vector& chord) {
        const double len = chord.norm();
        if (len < 1e-10) return;
        Vector unit = chord / len;
        Vector residual = unit;
        for (const Vector& b : directions) residual -= residual.dot(b) * b;
        // keep raw chords (they are the straightest floor directions); the
        // orthogonality test only guards against near-duplicates
        if (residual.norm() > 0.2) directions.push_back(std::move(unit));
      };
      for (std::size_t i = 0; i < floor_points.size(); ++i) {
        add_direction(floor_points[i] - best);
        for (std::size_t k = i + 1; k < floor_points.size(); ++k)
          add_direction(floor_points[i] - floor_points[k]);
      }
      for (int sweep = 0; sweep < 4; ++sweep)
        for (const Vector& b : directions) line_minimize(b, 3e-2);
    }
  }
  return best;
}

}  // namespace detail

Vector numerical_prox_oracle(const std::function<double(const Vector&)>& phi,
                             const Vector& x, double gamma, double resolution) {
  check_gamma(gamma, "numerical_prox_oracle");
  if (x.size() > 4)
    fail(ErrorKind::invalid_argument,
         "numerical_prox_oracle: dimension must be <= 4, got " +
             std::to_string(x.size()));
  auto objective = [&](const Vector& y) {
    return 0.5 * (y - x).squaredNorm() + gamma * phi(y);
  };
  return detail::minimize_small_dim(objective, x, 1.0, resolution);
}

}  // namespace sdr
