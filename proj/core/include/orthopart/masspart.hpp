#pragma once

// Hyperplanes encoded as points of S^d, finite point measures, and the
// signed-mass functions g whose vanishing certifies equipartition.
//
// A vector v = (t_0, t_1, ..., t_d) encodes the hyperplane
// t_1 x_1 + ... + t_d x_d = t_0 and the closed half-space H(v) on its <= side.

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace orthopart {

/// Raised in exact mode when a point lies on one of the hyperplanes.
class BoundaryPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class Hyperplane {
 public:
  /// `v` must be a unit vector (within 1e-12) with some t_i != 0, i >= 1.
  static Hyperplane from_unit(std::vector<double> v);
  /// Any coefficient vector (t_0, ..., t_d) with a nonzero normal part;
  /// it is kept as given for side tests and normalized for reporting.
  static Hyperplane from_coefficients(std::vector<double> t);
  /// The plane {x : u.x = c}, with H on the u.x <= c side.
  static Hyperplane from_normal_offset(std::span<const double> u, double c);

  std::size_t dim() const { return coeffs_.size() - 1; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  /// The encoding point on S^d.
  std::vector<double> unit() const;
  /// Unit normal (t_1, ..., t_d) / |(t_1, ..., t_d)|.
  std::vector<double> normal() const;
  /// Encodes the same hyperplane with the opposite half-space.
  Hyperplane negated() const;

 private:
  explicit Hyperplane(std::vector<double> t);
  std::vector<double> coeffs_;
};

class HyperplaneTuple {
 public:
  HyperplaneTuple() = default;
  explicit HyperplaneTuple(std::vector<Hyperplane> planes);

  std::size_t size() const { return planes_.size(); }
  std::size_t dim() const { return planes_.empty() ? 0 : planes_.front().dim(); }
  const Hyperplane& operator[](std::size_t i) const { return planes_[i]; }
  const std::vector<Hyperplane>& planes() const { return planes_; }
  HyperplaneTuple subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<Hyperplane> planes_;
};

class WeightedPointMeasure {
 public:
  /// `coords` is row-major, `dim` entries per point.  Empty weights mean
  /// unit weights.
  WeightedPointMeasure(std::size_t dim, std::vector<double> coords, std::vector<double> weights = {});
  static WeightedPointMeasure from_points(const std::vector<std::vector<double>>& points,
                                          std::vector<double> weights = {});

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& coords() const { return coords_; }
  double total() const { return total_; }
  /// All weights are integers, so sums below 2^53 are exact in double.
  bool integral_weights() const { return integral_; }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<double> weights_;
  double total_ = 0.0;
  bool integral_ = true;
};

/// Sign of t_0 - (t_1 x_1 + ... + t_d x_d); 0 within 1e-12 |v| (1 + |x|).
int side(const Hyperplane& h, std::span<const double> x);
/// Exact sign of the same quantity, inputs read as exact binary rationals.
int side_exact(const Hyperplane& h, std::span<const double> x);

enum class EvalMode { exact, floating };

struct EvalOptions {
  EvalMode mode = EvalMode::floating;
  /// Floating mode: largest tolerated boundary mass, as a fraction of the
  /// total.  Boundary points count on the <= side.
  double boundary_tol = std::numeric_limits<double>::infinity();
};

/// g(v_1..v_n) = sum over sign vectors s of (-1)^{r(s)} mu(H(v, s)).
double g_eval(const WeightedPointMeasure& mu, const HyperplaneTuple& t, const EvalOptions& options = {});

/// Masses of the 2^n cells; bit j of the index is set when s_j = -1, i.e.
/// the cell lies outside H(v_j).
std::vector<double> cell_masses(const WeightedPointMeasure& mu, const HyperplaneTuple& t,
                                const EvalOptions& options = {});

/// Mass lying on at least one plane (tolerance-based).
double boundary_mass(const WeightedPointMeasure& mu, const HyperplaneTuple& t);

/// Nonempty subsets of {0..k-1} of size <= n, by size then lexicographic;
/// there are alpha_n(k) of them.
std::vector<std::vector<std::size_t>> subset_constraints(std::size_t k, std::size_t n);

struct VerifyOptions {
  /// Allowed |cell mass / total - 2^-n|; also the allowed boundary fraction.
  double tol = 1e-9;
  double orth_tol = 1e-9;
  bool require_orthogonal = true;
  EvalMode mode = EvalMode::floating;
};

struct SubsetGValues {
  std::vector<std::size_t> planes;
  std::vector<double> g;  ///< one per measure
};

struct CellBlock {
  std::vector<std::size_t> planes;  ///< an n-subset
  std::size_t measure = 0;
  std::vector<double> masses;  ///< 2^n entries
  double max_deviation = 0.0;  ///< as a fraction of the measure's total
};

struct EquipartitionReport {
  std::size_t k = 0, n = 0;
  std::vector<SubsetGValues> g_values;
  std::vector<CellBlock> cells;
  double max_deviation = 0.0;
  double orthogonality_residual = 0.0;
  double boundary_fraction = 0.0;
  bool pass = false;
};

/// Checks that every n-subset of the k planes cuts every measure into 2^n
/// parts of equal mass, by direct cell counting, and that the normals are
/// pairwise orthogonal.  The g-values of all subsets of size <= n are
/// reported alongside.
EquipartitionReport verify_equipartition(const std::vector<WeightedPointMeasure>& measures,
                                         const HyperplaneTuple& planes, std::size_t n,
                                         const VerifyOptions& options = {});

/// m measures, each `samples` points uniform in t on [l gap, l gap + 1]
/// (l = 1..m) along the moment curve (t, t^2, ..., t^d).
std::vector<WeightedPointMeasure> moment_curve_fixture(std::size_t m, std::size_t d, std::size_t samples,
                                                       double gap, std::uint64_t seed);

}  // namespace orthopart
