#pragma once

// Numerical search for k mutually orthogonal hyperplanes, any n of which
// cut every given measure into 2^n equal parts.
//
// The search runs over orthonormal k-frames in R^d.  Each plane's offset is
// fixed by bisecting the first measure along its normal, so the remaining
// unknowns are the frame parameters and every candidate is accepted only
// after verify_equipartition passes on it.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "orthopart/masspart.hpp"

namespace orthopart {

struct Bisection {
  double offset = 0.0;
  /// The plane {u.x = offset} leaves exactly half the mass strictly on
  /// each side.  False when the median falls on a point.
  bool exact_split = false;
};

/// Bisects `mu` by a plane with normal `direction` (a unit vector): the
/// weighted median of the projections.  When the mass splits exactly in two
/// between consecutive projections the midpoint is returned.
Bisection bisect_offset(const WeightedPointMeasure& mu, std::span<const double> direction);

/// Orthonormal columns u_1..u_k in R^d, stored column by column.
using Frame = std::vector<std::vector<double>>;

/// Number of frame parameters, d k - k (k + 1) / 2.
std::size_t frame_param_count(std::size_t d, std::size_t k);

/// Rotations in the coordinate planes (i, j), i < k, i < j < d, applied to the
/// first k standard basis vectors.  theta = 0 gives e_1, ..., e_k.
Frame frame_param(std::span<const double> theta, std::size_t d, std::size_t k);

struct FrameConfig {
  Frame frame;
  std::vector<double> offsets;
  HyperplaneTuple planes;
};

/// Builds the planes {u_i . x = c_i} with c_i bisecting `first`.
FrameConfig config_from_frame(Frame frame, const WeightedPointMeasure& first);

struct ResidualOptions {
  /// Zero for hard side tests; otherwise sides are tanh(distance / width).
  double smoothing_width = 0.0;
};

/// Sum of squared g / total over all measures and nonempty subsets of size
/// <= n, except the singletons of the first measure, which vanish by
/// construction.
double residual_for_config(const FrameConfig& config, const std::vector<WeightedPointMeasure>& measures,
                           std::size_t n, const ResidualOptions& options = {});

double residual(std::span<const double> theta, const std::vector<WeightedPointMeasure>& measures, std::size_t k,
                std::size_t n, const ResidualOptions& options = {});

struct SolveOptions {
  std::size_t restarts = 64;
  std::size_t max_iters = 2000;
  double residual_tol = 1e-8;
  /// Verification tolerance per cell fraction; empty means 4 / sqrt(N) for
  /// the smallest measure.
  std::optional<double> verify_tol;
  std::uint64_t seed = 42;
  double smoothing_width = 0.0;
  std::size_t threads = 1;
};

enum class SolveStatus { solved, tolerance_not_met };
std::string to_string(SolveStatus status);

struct SolveResult {
  FrameConfig config;
  double residual = 0.0;
  EquipartitionReport verified;
  std::size_t restarts_used = 0;
  SolveStatus status = SolveStatus::tolerance_not_met;
};

/// Multistart simplex search over frames.  Deterministic for a given seed,
/// independent of the thread count.
SolveResult solve_orthogonal(const std::vector<WeightedPointMeasure>& measures, std::size_t k, std::size_t n,
                             const SolveOptions& options = {});

struct PancakeOptions {
  /// Allowed |quadrant mass - total/4| as a fraction of the total.
  double tol = 0.0;
  std::size_t max_bisections = 200;
  std::size_t grid = 64;
};

struct PancakeResult {
  SolveStatus status = SolveStatus::tolerance_not_met;
  double theta = 0.0;                 ///< first normal is (cos theta, sin theta)
  std::array<double, 2> offsets{};    ///< along the two normals
  HyperplaneTuple lines;
  std::array<double, 4> open_masses{};   ///< masses strictly inside each quadrant
  std::array<double, 4> final_masses{};  ///< after placing the points on the lines
  std::size_t boundary_points = 0;
  std::size_t evaluations = 0;
};

/// Two perpendicular lines cutting a planar point measure into four equal
/// parts, by a sign-change search over the rotation angle.  Points on a line
/// are handed to adjacent quadrants that are short of total / 4.
PancakeResult pancake_solve(const WeightedPointMeasure& points, const PancakeOptions& options = {});

}  // namespace orthopart
