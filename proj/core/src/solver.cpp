#include "orthopart/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "orthopart/nelder_mead.hpp"
#include "orthopart/random.hpp"

namespace orthopart {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> projections(const WeightedPointMeasure& mu, std::span<const double> u) {
  std::vector<double> proj(mu.size());
  for (std::size_t p = 0; p < mu.size(); ++p) proj[p] = dot(mu.point(p), u);
  return proj;
}

bool equal_weights(const WeightedPointMeasure& mu) {
  const auto& w = mu.weights();
  return std::all_of(w.begin(), w.end(), [&](double x) { return x == w.front(); });
}

}  // namespace

Bisection bisect_offset(const WeightedPointMeasure& mu, std::span<const double> direction) {
  if (direction.size() != mu.dim()) throw std::invalid_argument("direction and measure dimensions differ");
  if (std::abs(std::sqrt(dot(direction, direction)) - 1.0) > 1e-9)
    throw std::invalid_argument("bisection direction must be a unit vector");
  std::vector<double> proj = projections(mu, direction);
  const std::size_t count = proj.size();

  if (equal_weights(mu)) {
    if (count % 2 == 1) {
      const auto mid = proj.begin() + static_cast<std::ptrdiff_t>(count / 2);
      std::nth_element(proj.begin(), mid, proj.end());
      return {*mid, false};
    }
    const auto lower = proj.begin() + static_cast<std::ptrdiff_t>(count / 2 - 1);
    std::nth_element(proj.begin(), lower, proj.end());
    const double lo = *lower;
    const double hi = *std::min_element(lower + 1, proj.end());
    if (lo < hi) return {(lo + hi) / 2, true};
    return {lo, false};
  }

  std::vector<std::pair<double, double>> pw(count);
  for (std::size_t p = 0; p < count; ++p) pw[p] = {proj[p], mu.weight(p)};
  std::sort(pw.begin(), pw.end());
  const double half = mu.total() / 2;
  const double eps = 1e-12 * mu.total();
  double cum = 0.0;
  for (std::size_t i = 0; i < count;) {
    std::size_t j = i;
    while (j < count && pw[j].first == pw[i].first) cum += pw[j++].second;
    if (cum >= half - eps) {
      if (std::abs(cum - half) <= eps && j < count)
        return {(pw[i].first + pw[j].first) / 2, true};
      return {pw[i].first, false};
    }
    i = j;
  }
  return {pw.back().first, false};
}

std::size_t frame_param_count(std::size_t d, std::size_t k) {
  if (k > d) throw std::invalid_argument("frame needs k <= d");
  return d * k - k * (k + 1) / 2;
}

Frame frame_param(std::span<const double> theta, std::size_t d, std::size_t k) {
  if (theta.size() != frame_param_count(d, k)) throw std::invalid_argument("wrong number of frame parameters");
  Frame frame(k, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < k; ++i) frame[i][i] = 1.0;
  // Parameters are ordered (0,1), (0,2), ..., (0,d-1), (1,2), ...; the
  // product G(0,1) G(0,2) ... G(k-1,d-1) is applied right to left.
  std::size_t idx = theta.size();
  for (std::size_t i = k; i-- > 0;) {
    for (std::size_t j = d; j-- > i + 1;) {
      const double c = std::cos(theta[--idx]), s = std::sin(theta[idx]);
      for (auto& col : frame) {
        const double xi = col[i], xj = col[j];
        col[i] = c * xi - s * xj;
        col[j] = s * xi + c * xj;
      }
    }
  }
  return frame;
}

FrameConfig config_from_frame(Frame frame, const WeightedPointMeasure& first) {
  FrameConfig config;
  std::vector<Hyperplane> planes;
  for (const auto& u : frame) {
    const double c = bisect_offset(first, u).offset;
    config.offsets.push_back(c);
    planes.push_back(Hyperplane::from_normal_offset(u, c));
  }
  config.frame = std::move(frame);
  config.planes = HyperplaneTuple(std::move(planes));
  return config;
}

double residual_for_config(const FrameConfig& config, const std::vector<WeightedPointMeasure>& measures,
                           std::size_t n, const ResidualOptions& options) {
  const std::size_t k = config.frame.size();
  if (k > 20) throw std::invalid_argument("too many planes");
  const auto subsets = subset_constraints(k, n);
  std::vector<std::uint32_t> subset_masks;
  for (const auto& s : subsets) {
    std::uint32_t mask = 0;
    for (auto i : s) mask |= 1u << i;
    subset_masks.push_back(mask);
  }

  double total_sq = 0.0;
  for (std::size_t l = 0; l < measures.size(); ++l) {
    const auto& mu = measures[l];
    std::vector<double> g(subsets.size(), 0.0);
    if (options.smoothing_width <= 0.0) {
      std::vector<double> bins(std::size_t{1} << k, 0.0);
      for (std::size_t p = 0; p < mu.size(); ++p) {
        const auto x = mu.point(p);
        std::uint32_t outside = 0;
        for (std::size_t i = 0; i < k; ++i)
          if (dot(config.frame[i], x) > config.offsets[i]) outside |= 1u << i;
        bins[outside] += mu.weight(p);
      }
      for (std::size_t s = 0; s < subsets.size(); ++s)
        for (std::uint32_t mask = 0; mask < bins.size(); ++mask)
          g[s] += std::popcount(mask & subset_masks[s]) % 2 ? -bins[mask] : bins[mask];
    } else {
      std::vector<double> soft(k);
      for (std::size_t p = 0; p < mu.size(); ++p) {
        const auto x = mu.point(p);
        for (std::size_t i = 0; i < k; ++i)
          soft[i] = std::tanh((config.offsets[i] - dot(config.frame[i], x)) / options.smoothing_width);
        for (std::size_t s = 0; s < subsets.size(); ++s) {
          double prod = mu.weight(p);
          for (auto i : subsets[s]) prod *= soft[i];
          g[s] += prod;
        }
      }
    }
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      if (l == 0 && subsets[s].size() == 1) continue;
      const double normalized = g[s] / mu.total();
      total_sq += normalized * normalized;
    }
  }
  return total_sq;
}

double residual(std::span<const double> theta, const std::vector<WeightedPointMeasure>& measures, std::size_t k,
                std::size_t n, const ResidualOptions& options) {
  if (measures.empty()) throw std::invalid_argument("residual needs at least one measure");
  const std::size_t d = measures.front().dim();
  auto config = config_from_frame(frame_param(theta, d, k), measures.front());
  return residual_for_config(config, measures, n, options);
}

std::string to_string(SolveStatus status) {
  return status == SolveStatus::solved ? "solved" : "tolerance-not-met";
}

namespace {

struct RestartOutcome {
  FrameConfig config;
  double residual = std::numeric_limits<double>::infinity();
  EquipartitionReport report;
  bool solved = false;
};

RestartOutcome run_restart(const std::vector<WeightedPointMeasure>& measures, std::size_t k, std::size_t n,
                           const SolveOptions& options, double verify_tol, std::size_t index) {
  const std::size_t d = measures.front().dim();
  const std::size_t params = frame_param_count(d, k);
  Rng rng(mix_seed(options.seed, index));
  std::vector<double> theta(params);
  for (double& t : theta) t = rng.uniform(-std::numbers::pi, std::numbers::pi);

  if (params > 0) {
    const ResidualOptions hard{};
    const ResidualOptions soft{.smoothing_width = options.smoothing_width};
    if (options.smoothing_width > 0.0) {
      auto f = [&](std::span<const double> x) { return residual(x, measures, k, n, soft); };
      theta = nelder_mead(f, theta, {.max_evals = options.max_iters, .initial_step = 0.5}).x;
    }
    auto f = [&](std::span<const double> x) { return residual(x, measures, k, n, hard); };
    // Successively smaller simplices restarted from the best point so far.
    for (double step : {0.5, 0.1, 0.02}) {
      auto nm = nelder_mead(f, theta,
                            {.max_evals = options.max_iters, .initial_step = step, .f_target = options.residual_tol});
      theta = nm.x;
      if (nm.reached_target) break;
    }
  }

  RestartOutcome out;
  out.config = config_from_frame(frame_param(theta, d, k), measures.front());
  out.residual = residual_for_config(out.config, measures, n);
  out.report = verify_equipartition(measures, out.config.planes, n, {.tol = verify_tol});
  out.solved = out.residual <= options.residual_tol && out.report.pass;
  return out;
}

}  // namespace

SolveResult solve_orthogonal(const std::vector<WeightedPointMeasure>& measures, std::size_t k, std::size_t n,
                             const SolveOptions& options) {
  if (measures.empty()) throw std::invalid_argument("solver needs at least one measure");
  const std::size_t d = measures.front().dim();
  for (const auto& mu : measures)
    if (mu.dim() != d) throw std::invalid_argument("measures have different dimensions");
  if (k < 1 || k > d) throw std::invalid_argument("solver needs 1 <= k <= d");
  if (n < 1 || n > k) throw std::invalid_argument("solver needs 1 <= n <= k");
  if (options.restarts < 1) throw std::invalid_argument("solver needs at least one restart");
  if (!(options.residual_tol > 0.0)) throw std::invalid_argument("residual tolerance must be positive");

  double verify_tol = 0.0;
  if (options.verify_tol) {
    verify_tol = *options.verify_tol;
  } else {
    std::size_t smallest = measures.front().size();
    for (const auto& mu : measures) smallest = std::min(smallest, mu.size());
    verify_tol = 4.0 / std::sqrt(static_cast<double>(smallest));
  }

  const std::size_t threads = std::max<std::size_t>(1, options.threads);
  const std::size_t restarts = frame_param_count(d, k) == 0 ? 1 : options.restarts;
  std::optional<RestartOutcome> best;
  std::size_t best_index = 0;

  for (std::size_t start = 0; start < restarts; start += threads) {
    const std::size_t stop = std::min(restarts, start + threads);
    std::vector<RestartOutcome> batch;
    if (threads == 1) {
      batch.push_back(run_restart(measures, k, n, options, verify_tol, start));
    } else {
      std::vector<std::future<RestartOutcome>> futures;
      for (std::size_t r = start; r < stop; ++r)
        futures.push_back(std::async(std::launch::async, run_restart, std::cref(measures), k, n, std::cref(options),
                                     verify_tol, r));
      for (auto& f : futures) batch.push_back(f.get());
    }
    for (std::size_t b = 0; b < batch.size(); ++b) {
      // Lowest index wins among solved restarts, then best residual.
      const bool better = !best || (batch[b].solved && !best->solved) ||
                          (batch[b].solved == best->solved && batch[b].residual < best->residual);
      if (better) {
        best = std::move(batch[b]);
        best_index = start + b;
      }
      if (best->solved) break;
    }
    if (best->solved) break;
  }

  SolveResult result;
  result.config = std::move(best->config);
  result.residual = best->residual;
  result.verified = std::move(best->report);
  result.status = best->solved ? SolveStatus::solved : SolveStatus::tolerance_not_met;
  result.restarts_used = best->solved ? best_index + 1 : restarts;
  return result;
}

namespace {

struct PancakeEval {
  double theta = 0.0;
  std::array<double, 2> offsets{};
  std::array<double, 4> open{};
  std::array<double, 4> final_masses{};
  std::size_t boundary = 0;
  double f = 0.0;  ///< first-quadrant mass with boundary points inside, minus total/4
  bool feasible = false;
};

// Hands boundary points to allowed quadrants so every quadrant reaches the
// target.  `allowed[p]` is a 4-bit mask of quadrants adjacent to point p.
bool distribute(const std::vector<std::uint8_t>& allowed, const std::vector<double>& weights,
                std::array<double, 4>& masses, double target, double slack) {
  if (allowed.empty()) {
    for (double m : masses)
      if (std::abs(m - target) > slack) return false;
    return true;
  }
  const bool uniform = std::all_of(weights.begin(), weights.end(), [&](double w) { return w == weights.front(); });
  if (uniform) {
    // Integer transport from point types to quadrant deficits.
    const double w = weights.front();
    std::array<long, 4> need{};
    for (int q = 0; q < 4; ++q) {
      const double units = (target - masses[q]) / w;
      const double rounded = std::round(units);
      if (rounded < 0 || std::abs(units - rounded) * w > slack + 1e-9 * w) return false;
      need[q] = static_cast<long>(rounded);
    }
    std::array<long, 16> by_type{};
    for (auto a : allowed) ++by_type[a];
    // Hall's condition on the 4 quadrants is sufficient for this bipartite
    // transport: every set of types must fit into the quadrants they touch,
    // and the totals must agree.
    long total_need = 0;
    for (auto x : need) total_need += x;
    if (total_need != static_cast<long>(allowed.size())) return false;
    for (unsigned types = 1; types < 16; ++types) {
      // quadrant set Q; points whose allowed set lies inside Q must fit into Q,
      // and points touching Q cover its need.
      long inside = 0, touching = 0, q_need = 0;
      for (unsigned a = 1; a < 16; ++a) {
        if ((a & ~types) == 0) inside += by_type[a];
        if (a & types) touching += by_type[a];
      }
      for (int q = 0; q < 4; ++q)
        if (types & (1u << q)) q_need += need[q];
      if (inside > q_need || touching < q_need) return false;
    }
    for (int q = 0; q < 4; ++q) masses[q] = target;
    return true;
  }
  if (allowed.size() > 20) return false;
  // Depth-first assignment for general weights.
  std::array<double, 4> work = masses;
  std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
    if (i == allowed.size()) {
      for (double m : work)
        if (std::abs(m - target) > slack) return false;
      return true;
    }
    for (int q = 0; q < 4; ++q) {
      if (!(allowed[i] & (1u << q))) continue;
      if (work[q] + weights[i] > target + slack) continue;
      work[q] += weights[i];
      if (place(i + 1)) return true;
      work[q] -= weights[i];
    }
    return false;
  };
  if (!place(0)) return false;
  masses = work;
  return true;
}

PancakeEval pancake_eval(const WeightedPointMeasure& mu, double theta, double tol) {
  PancakeEval e;
  e.theta = theta;
  const std::array<double, 2> u{std::cos(theta), std::sin(theta)};
  const std::array<double, 2> w{-std::sin(theta), std::cos(theta)};
  e.offsets = {bisect_offset(mu, u).offset, bisect_offset(mu, w).offset};
  const auto line1 = Hyperplane::from_normal_offset(u, e.offsets[0]);
  const auto line2 = Hyperplane::from_normal_offset(w, e.offsets[1]);

  std::vector<std::uint8_t> allowed;
  std::vector<double> bweights;
  double first_inclusive = 0.0;
  for (std::size_t p = 0; p < mu.size(); ++p) {
    const auto x = mu.point(p);
    const int s1 = side(line1, x), s2 = side(line2, x);
    // Quadrant index: bit 0 outside line 1's half-plane, bit 1 outside line 2's.
    const unsigned b1 = s1 < 0 ? 1u : 0u, b2 = s2 < 0 ? 2u : 0u;
    if (s1 >= 0 && s2 >= 0) first_inclusive += mu.weight(p);
    if (s1 != 0 && s2 != 0) {
      e.open[b1 | b2] += mu.weight(p);
      continue;
    }
    std::uint8_t mask = 0;
    for (unsigned q = 0; q < 4; ++q) {
      const bool ok1 = s1 == 0 || (q & 1u) == b1;
      const bool ok2 = s2 == 0 || (q & 2u) == b2;
      if (ok1 && ok2) mask |= static_cast<std::uint8_t>(1u << q);
    }
    allowed.push_back(mask);
    bweights.push_back(mu.weight(p));
  }
  e.boundary = allowed.size();
  const double target = mu.total() / 4;
  e.f = first_inclusive - target;
  e.final_masses = e.open;
  const double slack = tol * mu.total() + 1e-12 * mu.total();
  e.feasible = distribute(allowed, bweights, e.final_masses, target, slack);
  if (!e.feasible) e.final_masses = e.open;
  return e;
}

PancakeResult pancake_result(const PancakeEval& e, std::size_t evaluations) {
  PancakeResult r;
  r.status = e.feasible ? SolveStatus::solved : SolveStatus::tolerance_not_met;
  r.theta = e.theta;
  r.offsets = e.offsets;
  const std::array<double, 2> u{std::cos(e.theta), std::sin(e.theta)};
  const std::array<double, 2> w{-std::sin(e.theta), std::cos(e.theta)};
  r.lines = HyperplaneTuple({Hyperplane::from_normal_offset(u, e.offsets[0]),
                             Hyperplane::from_normal_offset(w, e.offsets[1])});
  r.open_masses = e.open;
  r.final_masses = e.final_masses;
  r.boundary_points = e.boundary;
  r.evaluations = evaluations;
  return r;
}

}  // namespace

PancakeResult pancake_solve(const WeightedPointMeasure& points, const PancakeOptions& options) {
  if (points.dim() != 2) throw std::invalid_argument("pancake solver works in the plane");
  std::size_t evals = 0;
  auto eval = [&](double theta) {
    ++evals;
    return pancake_eval(points, theta, options.tol);
  };

  const double quarter = std::numbers::pi / 2;
  PancakeEval lo = eval(0.0);
  if (lo.feasible) return pancake_result(lo, evals);
  PancakeEval best = lo;
  // Rotating by a quarter turn maps the first quadrant onto its neighbour,
  // so f changes sign across [0, pi/2] for exact bisectors.
  PancakeEval hi = eval(quarter);
  if (hi.feasible) return pancake_result(hi, evals);
  if ((lo.f < 0) == (hi.f < 0)) {
    bool found = false;
    for (std::size_t g = 1; g < options.grid && !found; ++g) {
      PancakeEval mid = eval(quarter * static_cast<double>(g) / static_cast<double>(options.grid));
      if (mid.feasible) return pancake_result(mid, evals);
      if ((mid.f < 0) != (lo.f < 0)) {
        hi = mid;
        found = true;
      } else {
        lo = mid;
      }
    }
    if (!found) return pancake_result(best, evals);
  }
  for (std::size_t it = 0; it < options.max_bisections && hi.theta - lo.theta > 0.0; ++it) {
    const double theta = lo.theta + (hi.theta - lo.theta) / 2;
    if (theta <= lo.theta || theta >= hi.theta) break;
    PancakeEval mid = eval(theta);
    if (mid.feasible) return pancake_result(mid, evals);
    if ((mid.f < 0) == (lo.f < 0))
      lo = mid;
    else
      hi = mid;
  }
  return pancake_result(std::abs(lo.f) <= std::abs(hi.f) ? lo : hi, evals);
}

}  // namespace orthopart
