#include "orthopart/masspart.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "orthopart/random.hpp"

namespace orthopart {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void require_dim(const Hyperplane& h, std::span<const double> x) {
  if (h.dim() != x.size()) throw std::invalid_argument("point and hyperplane dimensions differ");
}

}  // namespace

Hyperplane::Hyperplane(std::vector<double> t) : coeffs_(std::move(t)) {
  if (coeffs_.size() < 2) throw std::invalid_argument("hyperplane needs d >= 1");
  for (double c : coeffs_)
    if (!std::isfinite(c)) throw std::invalid_argument("hyperplane coefficients must be finite");
  const bool has_normal =
      std::any_of(coeffs_.begin() + 1, coeffs_.end(), [](double c) { return c != 0.0; });
  if (!has_normal) throw std::invalid_argument("v = +-e0 does not encode a hyperplane");
}

Hyperplane Hyperplane::from_unit(std::vector<double> v) {
  if (std::abs(norm(v) - 1.0) > 1e-12) throw std::invalid_argument("hyperplane vector must be a unit vector");
  return Hyperplane(std::move(v));
}

Hyperplane Hyperplane::from_coefficients(std::vector<double> t) { return Hyperplane(std::move(t)); }

Hyperplane Hyperplane::from_normal_offset(std::span<const double> u, double c) {
  std::vector<double> t;
  t.reserve(u.size() + 1);
  t.push_back(c);
  t.insert(t.end(), u.begin(), u.end());
  return Hyperplane(std::move(t));
}

std::vector<double> Hyperplane::unit() const {
  const double s = norm(coeffs_);
  std::vector<double> v(coeffs_);
  for (double& x : v) x /= s;
  return v;
}

std::vector<double> Hyperplane::normal() const {
  std::vector<double> u(coeffs_.begin() + 1, coeffs_.end());
  const double s = norm(u);
  for (double& x : u) x /= s;
  return u;
}

Hyperplane Hyperplane::negated() const {
  std::vector<double> t(coeffs_);
  for (double& x : t) x = -x;
  return Hyperplane(std::move(t));
}

HyperplaneTuple::HyperplaneTuple(std::vector<Hyperplane> planes) : planes_(std::move(planes)) {
  for (const auto& p : planes_)
    if (p.dim() != planes_.front().dim()) throw std::invalid_argument("hyperplanes have different dimensions");
}

HyperplaneTuple HyperplaneTuple::subset(std::span<const std::size_t> indices) const {
  std::vector<Hyperplane> out;
  for (std::size_t i : indices) out.push_back(planes_.at(i));
  return HyperplaneTuple(std::move(out));
}

WeightedPointMeasure::WeightedPointMeasure(std::size_t dim, std::vector<double> coords, std::vector<double> weights)
    : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {
  if (dim_ == 0) throw std::invalid_argument("measure dimension must be positive");
  if (coords_.size() % dim_ != 0) throw std::invalid_argument("coordinate count is not a multiple of the dimension");
  const std::size_t n = coords_.size() / dim_;
  if (weights_.empty()) weights_.assign(n, 1.0);
  if (weights_.size() != n) throw std::invalid_argument("one weight per point required");
  for (double x : coords_)
    if (!std::isfinite(x)) throw std::invalid_argument("coordinates must be finite");
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be positive and finite");
    integral_ = integral_ && w == std::floor(w);
    total_ += w;
  }
  if (!(total_ > 0.0)) throw std::invalid_argument("measure must have positive total mass");
}

WeightedPointMeasure WeightedPointMeasure::from_points(const std::vector<std::vector<double>>& points,
                                                       std::vector<double> weights) {
  if (points.empty()) throw std::invalid_argument("measure needs at least one point");
  const std::size_t d = points.front().size();
  std::vector<double> coords;
  coords.reserve(points.size() * d);
  for (const auto& p : points) {
    if (p.size() != d) throw std::invalid_argument("points have different dimensions");
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return WeightedPointMeasure(d, std::move(coords), std::move(weights));
}

int side(const Hyperplane& h, std::span<const double> x) {
  require_dim(h, x);
  const auto& t = h.coefficients();
  double s = t[0];
  for (std::size_t i = 0; i < x.size(); ++i) s -= t[i + 1] * x[i];
  const double scale = 1e-12 * norm(t) * (1.0 + norm(x));
  if (std::abs(s) <= scale) return 0;
  return s > 0 ? 1 : -1;
}

int side_exact(const Hyperplane& h, std::span<const double> x) {
  require_dim(h, x);
  const auto& t = h.coefficients();
  double s = t[0];
  double magnitude = std::abs(t[0]);
  for (std::size_t i = 0; i < x.size(); ++i) {
    s -= t[i + 1] * x[i];
    magnitude += std::abs(t[i + 1] * x[i]);
  }
  // Forward error of the running sum is below (d + 2) eps magnitude.
  const double bound = 2.0 * static_cast<double>(x.size() + 2) * std::numeric_limits<double>::epsilon() * magnitude;
  if (std::abs(s) > bound && std::isfinite(s)) return s > 0 ? 1 : -1;

  using boost::multiprecision::cpp_rational;
  cpp_rational acc(t[0]);
  for (std::size_t i = 0; i < x.size(); ++i) acc -= cpp_rational(t[i + 1]) * cpp_rational(x[i]);
  return acc.sign();
}

namespace {

// Per-point side of every plane in the tuple: bit j set when the point is
// strictly outside H(v_j).  Boundary points count as inside.
struct Classified {
  std::vector<std::uint32_t> outside;
  std::vector<bool> on_boundary;
  double boundary_mass = 0.0;
};

Classified classify(const WeightedPointMeasure& mu, const HyperplaneTuple& t, const EvalOptions& options) {
  if (t.size() > 24) throw std::invalid_argument("too many hyperplanes in one tuple");
  if (t.size() > 0 && t.dim() != mu.dim()) throw std::invalid_argument("measure and hyperplane dimensions differ");
  if (options.mode == EvalMode::exact && !mu.integral_weights())
    throw std::invalid_argument("exact mode needs integer weights");
  Classified c;
  c.outside.assign(mu.size(), 0);
  c.on_boundary.assign(mu.size(), false);
  for (std::size_t p = 0; p < mu.size(); ++p) {
    const auto x = mu.point(p);
    for (std::size_t j = 0; j < t.size(); ++j) {
      const int s = options.mode == EvalMode::exact ? side_exact(t[j], x) : side(t[j], x);
      if (s == 0) {
        if (options.mode == EvalMode::exact) throw BoundaryPoint("point lies on a hyperplane (exact mode)");
        c.on_boundary[p] = true;
      } else if (s < 0) {
        c.outside[p] |= 1u << j;
      }
    }
    if (c.on_boundary[p]) c.boundary_mass += mu.weight(p);
  }
  if (options.mode == EvalMode::floating && c.boundary_mass > options.boundary_tol * mu.total())
    throw BoundaryPoint("boundary mass exceeds tolerance");
  return c;
}

}  // namespace

double g_eval(const WeightedPointMeasure& mu, const HyperplaneTuple& t, const EvalOptions& options) {
  const Classified c = classify(mu, t, options);
  double g = 0.0;
  for (std::size_t p = 0; p < mu.size(); ++p) {
    // The point's cell has r(s) = number of planes it lies outside of.
    const bool odd = std::popcount(c.outside[p]) % 2 == 1;
    g += odd ? -mu.weight(p) : mu.weight(p);
  }
  return g;
}

std::vector<double> cell_masses(const WeightedPointMeasure& mu, const HyperplaneTuple& t, const EvalOptions& options) {
  const Classified c = classify(mu, t, options);
  std::vector<double> cells(std::size_t{1} << t.size(), 0.0);
  for (std::size_t p = 0; p < mu.size(); ++p) cells[c.outside[p]] += mu.weight(p);
  return cells;
}

double boundary_mass(const WeightedPointMeasure& mu, const HyperplaneTuple& t) {
  return classify(mu, t, EvalOptions{}).boundary_mass;
}

std::vector<std::vector<std::size_t>> subset_constraints(std::size_t k, std::size_t n) {
  if (n < 1 || n > k) throw std::invalid_argument("subset constraints need 1 <= n <= k");
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t size = 1; size <= n; ++size) {
    std::vector<std::size_t> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      out.push_back(idx);
      // Advance to the next size-combination in lexicographic order.
      std::size_t pos = size;
      while (pos > 0 && idx[pos - 1] == k - size + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t q = pos; q < size; ++q) idx[q] = idx[q - 1] + 1;
    }
  }
  return out;
}

EquipartitionReport verify_equipartition(const std::vector<WeightedPointMeasure>& measures,
                                         const HyperplaneTuple& planes, std::size_t n,
                                         const VerifyOptions& options) {
  const std::size_t k = planes.size();
  if (measures.empty()) throw std::invalid_argument("no measures to verify");
  if (n < 1 || n > k) throw std::invalid_argument("verification needs 1 <= n <= k");
  if (k > planes.dim()) throw std::invalid_argument("verification needs k <= d");
  for (const auto& mu : measures)
    if (mu.dim() != planes.dim()) throw std::invalid_argument("measure and hyperplane dimensions differ");

  EquipartitionReport report;
  report.k = k;
  report.n = n;
  EvalOptions eval{.mode = options.mode};

  for (const auto& mu : measures)
    if (options.mode == EvalMode::floating)
      report.boundary_fraction = std::max(report.boundary_fraction, boundary_mass(mu, planes) / mu.total());

  for (const auto& subset : subset_constraints(k, n)) {
    SubsetGValues entry{.planes = subset, .g = {}};
    const auto sub = planes.subset(subset);
    for (const auto& mu : measures) entry.g.push_back(g_eval(mu, sub, eval));
    report.g_values.push_back(std::move(entry));
  }

  const double share = std::ldexp(1.0, -static_cast<int>(n));
  bool cells_ok = true;
  for (const auto& subset : subset_constraints(k, n)) {
    if (subset.size() != n) continue;
    const auto sub = planes.subset(subset);
    for (std::size_t l = 0; l < measures.size(); ++l) {
      CellBlock block{.planes = subset, .measure = l, .masses = cell_masses(measures[l], sub, eval)};
      const double total = measures[l].total();
      for (double h : block.masses) {
        const double dev = std::abs(h - total * share);
        block.max_deviation = std::max(block.max_deviation, dev / total);
        if (dev > options.tol * total) cells_ok = false;
      }
      report.max_deviation = std::max(report.max_deviation, block.max_deviation);
      report.cells.push_back(std::move(block));
    }
  }

  for (std::size_t i = 0; i < k; ++i) {
    const auto ni = planes[i].normal();
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto nj = planes[j].normal();
      double dot = 0.0;
      for (std::size_t c = 0; c < ni.size(); ++c) dot += ni[c] * nj[c];
      report.orthogonality_residual = std::max(report.orthogonality_residual, std::abs(dot));
    }
  }

  report.pass = cells_ok && report.boundary_fraction <= options.tol &&
                (!options.require_orthogonal || report.orthogonality_residual <= options.orth_tol);
  return report;
}

std::vector<WeightedPointMeasure> moment_curve_fixture(std::size_t m, std::size_t d, std::size_t samples,
                                                       double gap, std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("moment curve needs d >= 1");
  std::vector<WeightedPointMeasure> out;
  for (std::size_t l = 1; l <= m; ++l) {
    Rng rng(mix_seed(seed, l));
    std::vector<double> coords;
    coords.reserve(samples * d);
    for (std::size_t s = 0; s < samples; ++s) {
      const double t = rng.uniform(static_cast<double>(l) * gap, static_cast<double>(l) * gap + 1.0);
      double power = 1.0;
      for (std::size_t i = 0; i < d; ++i) {
        power *= t;
        coords.push_back(power);
      }
    }
    out.emplace_back(d, std::move(coords));
  }
  return out;
}

}  // namespace orthopart
