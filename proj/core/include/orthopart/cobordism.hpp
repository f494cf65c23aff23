#pragma once

// Borsuk-Ulam criteria for (Z/2)^k actions on products of spheres and on
// Stiefel manifolds, decided as nonvanishing of products of linear forms
// in P(i_1, ..., i_k).
//
// A generator Gamma(i_1, ..., i_k) is identified with the unit of
// P(i_1, ..., i_k); Gamma(i - j) then corresponds to the monomial a^j, so
// the Smith operators act by ring multiplication.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orthopart/f2ring.hpp"

namespace orthopart {

/// q = eps_1 lambda_1 + ... + eps_k lambda_k in (Z/2)^k.
class GroupElement {
 public:
  explicit GroupElement(Bits eps);
  /// Parses "101": the first character is eps_1.
  static GroupElement parse(std::string_view bits);
  static GroupElement generator(std::size_t k, std::size_t index);
  static GroupElement all_ones(std::size_t k);

  std::size_t rank() const { return eps_.size(); }
  const Bits& bits() const { return eps_; }
  bool is_zero() const;
  unsigned weight() const;
  std::string to_string() const;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  Bits eps_;
};

struct GammaClass {
  std::vector<unsigned> degrees;
  friend bool operator==(const GammaClass&, const GammaClass&) = default;
  friend auto operator<=>(const GammaClass& a, const GammaClass& b) { return a.degrees <=> b.degrees; }
};

/// An F2-combination of generators below a fixed top class Gamma(top),
/// stored as a polynomial in P(top).
class GammaElement {
 public:
  explicit GammaElement(const GammaClass& top);
  GammaElement(GammaClass top, F2Poly coefficients);

  const GammaClass& top() const { return top_; }
  const F2Poly& coefficients() const { return poly_; }
  bool is_zero() const { return poly_.is_zero(); }
  /// The generators in the sum, highest degrees first.
  std::vector<GammaClass> classes() const;

 private:
  GammaClass top_;
  F2Poly poly_;
};

/// Applies the Smith operator of q.  Throws on the zero element.
GammaElement smith_apply(const GroupElement& q, const GammaElement& x);
GammaElement smith_apply(const GroupElement& q, const GammaClass& g);

enum class CriterionMethod { full_expansion, certificate };
std::string to_string(CriterionMethod method);

struct CriterionReport {
  bool nonzero = false;
  std::optional<Monomial> witness;
  RingSpec ring;
  CriterionMethod method = CriterionMethod::full_expansion;
};

struct CriterionOptions {
  std::size_t term_guard = kDefaultTermGuard;
  /// Try the p* witness when the targets form (P_{k,n})^m.
  bool use_certificate = true;
};

/// Decides whether prod_l (linear form of targets[l]) is nonzero in P(dims).
/// In the full-expansion path the witness is the lexicographically
/// greatest surviving monomial.
CriterionReport criterion_spheres(const std::vector<GroupElement>& targets,
                                  const std::vector<unsigned>& dims,
                                  const CriterionOptions& options = {});

/// The same test in P(n-1, n-2, ..., n-k).
CriterionReport criterion_stiefel(const std::vector<GroupElement>& targets, unsigned n, unsigned k,
                                  const CriterionOptions& options = {});

/// All weight-j vectors of length k, in descending binary order.
std::vector<Bits> weight_vectors(unsigned k, unsigned j);

/// Q_{k,j}: product of the linear forms of all weight-j vectors.
F2Poly build_Q(unsigned k, unsigned j, const RingSpec& ring);
/// P_{k,n} = Q_{k,1} ... Q_{k,n}.
F2Poly build_P(unsigned k, unsigned n, const RingSpec& ring);
/// Forms whose product is (P_{k,n})^m.
std::vector<Bits> P_power_forms(unsigned k, unsigned n, unsigned m);
/// A ring with every cap equal to deg P_{k,n}: nothing in P_{k,n} is truncated.
RingSpec untruncated_ring_for_P(unsigned k, unsigned n);

/// Sum of the distinct rearrangements of the exponent pattern
/// (beta_n(k), beta_n(k-1), ..., beta_n(1)).  Limited to k <= 7.
F2Poly permutation_sum_P(unsigned k, unsigned n);

struct PStarCertificate {
  unsigned q = 0;  ///< floor(log2 m)
  unsigned r = 0;  ///< m - 2^q
  unsigned dstar = 0;
  Monomial pstar;
  std::vector<unsigned> caps;  ///< (d*, d*-1, ..., d*-k+1)
  bool ok = false;             ///< p* fits within caps
};

PStarCertificate pstar_certificate(unsigned m, unsigned k, unsigned n);

struct HeadroomViolation {
  unsigned k, n, q, r, i;
  std::uint64_t d0, di;
};

struct HeadroomScan {
  std::vector<HeadroomViolation> violations;
  std::uint64_t cases = 0;
  std::uint64_t equalities_at_i0 = 0;
  /// Equalities d_0 - d_i = i with i > 0, split by n = 2 and n > 2.
  std::uint64_t equalities_n2 = 0;
  std::uint64_t equalities_other = 0;
  /// Every (k, q) at n = 2, r = 2^q - 1 attains equality for all i.
  bool n2_tight_everywhere = true;
};

/// Exhaustive check of d_0 - d_i >= i, d_i = 2^q beta_n(k-i) + r beta_n(i+1),
/// for 2 <= n <= k <= k_max, 0 <= q <= q_max, 0 <= r < 2^q, 0 <= i < k.
/// A nonzero `only_n` restricts the scan to that n.
HeadroomScan pstar_headroom_scan(unsigned k_max, unsigned q_max, unsigned only_n = 0);

}  // namespace orthopart
