#pragma once

// Closed-form bounds on the dimension needed for (orthogonal) equipartitions
// of m measures by k hyperplanes.  All arithmetic is exact integer.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace orthopart {

std::uint64_t binomial(std::int64_t s, std::int64_t i);

/// alpha_l(j) = sum_{i=1..l} C(j, i): number of equipartition equations.
std::uint64_t alpha(unsigned ell, unsigned j);
/// beta_l(j) = sum_{i=0..l-1} C(j-1, i), with C(-1, 0) taken as 0 for j = 0.
std::uint64_t beta(unsigned ell, unsigned j);

/// floor(log2 m) for m >= 1.
unsigned floor_log2(std::uint64_t m);

/// Dimension of the Stiefel manifold of orthonormal k-frames in R^n.
std::uint64_t stiefel_dim(unsigned n, unsigned k);

struct ClosedForm {
  std::string family;   ///< e.g. "k=2 m=2^j-1"
  std::uint64_t value;  ///< the family's formula value
};

struct BoundRecord {
  unsigned m = 0, k = 0, n = 0;
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;
  bool tight = false;
  std::optional<ClosedForm> closed_form;
};

/// Bounds for k (not necessarily orthogonal) hyperplanes cutting each of
/// m measures into 2^k equal parts.
BoundRecord delta_bounds(unsigned m, unsigned k);

/// Bounds for k mutually orthogonal hyperplanes, any n of which cut each of
/// m measures into 2^n equal parts.  Requires 1 <= n <= k, and n >= 2 when
/// k >= 2 (for n = 1 the upper formula falls below the lower bound).
BoundRecord delta_star_bounds(unsigned m, unsigned k, unsigned n);

struct IntRange {
  unsigned lo = 1, hi = 0;  ///< inclusive; empty when lo > hi
  bool empty() const { return lo > hi; }
};

/// Parses "5" or "2..7".
IntRange parse_range(const std::string& text);

struct NMode {
  bool equals_k = false;  ///< n = k in every row
  IntRange range;
};

/// Rows sorted by (k, n, m).  Combinations outside the domain of
/// delta_star_bounds are skipped.
std::vector<BoundRecord> bounds_table(IntRange m_range, IntRange k_range, NMode n_mode);

std::string bounds_csv(const std::vector<BoundRecord>& rows);

}  // namespace orthopart
