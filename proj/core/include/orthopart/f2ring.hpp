#pragma once

// Arithmetic in truncated polynomial rings over GF(2):
//
//   P(i_1, ..., i_k) = F2[a_1, ..., a_k] / (a_1^{i_1+1}, ..., a_k^{i_k+1})
//
// Monomials are packed into a single 128-bit key, one bit field per
// variable, a_1 in the most significant field.  Integer order on keys is
// therefore the lexicographic order a_1 > a_2 > ... > a_k.

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace orthopart {

/// Thrown when an expansion would exceed its configured term budget.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A 0/1 vector; entry j is the coefficient of a_{j+1}.
using Bits = std::vector<std::uint8_t>;

/// Exponent vector, entry j is the exponent of a_{j+1}.
struct Monomial {
  std::vector<unsigned> exponents;

  unsigned degree() const;
  friend bool operator==(const Monomial&, const Monomial&) = default;
  /// Lexicographic with a_1 most significant.
  friend auto operator<=>(const Monomial& a, const Monomial& b) {
    return a.exponents <=> b.exponents;
  }
};

std::string to_string(const Monomial& m);

class RingSpec {
 public:
  __extension__ using Key = unsigned __int128;

  explicit RingSpec(std::vector<unsigned> caps);

  std::size_t num_vars() const { return layout_->caps.size(); }
  const std::vector<unsigned>& caps() const { return layout_->caps; }
  unsigned cap(std::size_t j) const { return layout_->caps[j]; }
  /// Sum of all caps: the top degree of the ring.
  unsigned top_degree() const { return layout_->top_degree; }

  bool fits(const Monomial& m) const;

  Key pack(const Monomial& m) const;
  Monomial unpack(Key key) const;
  unsigned exponent(Key key, std::size_t j) const {
    return static_cast<unsigned>((key >> layout_->shifts[j]) & layout_->masks[j]);
  }
  Key unit_key(std::size_t j) const { return Key{1} << layout_->shifts[j]; }
  /// Multiplies two in-ring monomials; false when the product leaves the ring.
  bool multiply_keys(Key a, Key b, Key& out) const;
  unsigned key_degree(Key key) const;

  friend bool operator==(const RingSpec& a, const RingSpec& b) {
    return a.layout_ == b.layout_ || a.layout_->caps == b.layout_->caps;
  }

 private:
  struct Layout {
    std::vector<unsigned> caps;
    std::vector<unsigned> shifts;
    std::vector<Key> masks;
    unsigned top_degree = 0;
  };
  std::shared_ptr<const Layout> layout_;
};

RingSpec ring_new(std::vector<unsigned> caps);

/// An element of a truncated ring: a set of monomials, each with
/// coefficient 1.  Immutable once built.
class F2Poly {
 public:
  using Key = RingSpec::Key;

  explicit F2Poly(RingSpec ring) : ring_(std::move(ring)) {}
  /// Builds from arbitrary monomials: duplicates cancel in pairs and
  /// monomials outside the caps are dropped.
  F2Poly(RingSpec ring, const std::vector<Monomial>& monomials);

  static F2Poly zero(const RingSpec& ring) { return F2Poly(ring); }
  static F2Poly one(const RingSpec& ring);
  static F2Poly variable(const RingSpec& ring, std::size_t j);
  /// Internal constructor; `keys` may be unsorted and contain repeats.
  static F2Poly from_keys(RingSpec ring, std::vector<Key> keys);

  const RingSpec& ring() const { return ring_; }
  bool is_zero() const { return keys_.empty(); }
  std::size_t size() const { return keys_.size(); }
  /// Keys in canonical order: lexicographically greatest first.
  std::span<const Key> keys() const { return keys_; }
  std::vector<Monomial> monomials() const;
  bool contains(const Monomial& m) const;
  /// Lexicographically greatest monomial. Precondition: nonzero.
  Monomial leading() const;
  /// Lexicographically least monomial. Precondition: nonzero.
  Monomial trailing() const;

  friend bool operator==(const F2Poly& a, const F2Poly& b) {
    return a.ring_ == b.ring_ && a.keys_ == b.keys_;
  }

 private:
  RingSpec ring_;
  std::vector<Key> keys_;
};

F2Poly poly_add(const F2Poly& p, const F2Poly& q);
F2Poly poly_mul(const F2Poly& p, const F2Poly& q);
/// p^e with p^0 = 1.  Uses squaring by Frobenius.
F2Poly poly_pow(const F2Poly& p, unsigned e);
F2Poly linear_form(const Bits& eps, const RingSpec& ring);

inline F2Poly operator+(const F2Poly& p, const F2Poly& q) { return poly_add(p, q); }
inline F2Poly operator*(const F2Poly& p, const F2Poly& q) { return poly_mul(p, q); }

inline bool is_zero(const F2Poly& p) { return p.is_zero(); }
inline bool contains_monomial(const F2Poly& p, const Monomial& m) { return p.contains(m); }

inline constexpr std::size_t kDefaultTermGuard = std::size_t{1} << 25;

/// Product of linear forms, truncated term-by-term.  Forms are multiplied
/// in ascending Hamming weight and monomials whose remaining headroom is
/// smaller than the number of forms still to come are pruned.  Throws
/// GuardExceeded if an intermediate support grows past `guard` terms.
F2Poly product_of_forms(const std::vector<Bits>& forms, const RingSpec& ring,
                        std::size_t guard = kDefaultTermGuard);

/// Reference expansion: distributes every choice of one variable per form
/// in the free ring, reduces mod 2 and truncates once at the end.  Shares
/// no code with the packed arithmetic.  Throws GuardExceeded when the
/// number of branches exceeds `guard`.
F2Poly free_expand_oracle(const std::vector<Bits>& forms, const std::vector<unsigned>& caps,
                          std::size_t guard = kDefaultTermGuard);

/// `{"caps":[..],"monomials":[[..],..]}` with monomials in canonical order.
std::string poly_to_json(const F2Poly& p);
F2Poly poly_from_json(std::string_view text);

}  // namespace orthopart
