#include "orthopart/cobordism.hpp"

#include <algorithm>
#include <map>

#include "orthopart/bounds.hpp"

namespace orthopart {

GroupElement::GroupElement(Bits eps) : eps_(std::move(eps)) {
  if (eps_.empty()) throw std::invalid_argument("group element needs k >= 1");
  for (auto b : eps_)
    if (b > 1) throw std::invalid_argument("group element entries must be 0 or 1");
}

GroupElement GroupElement::parse(std::string_view bits) {
  Bits eps;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bad bit string '" + std::string(bits) + "'");
    eps.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return GroupElement(std::move(eps));
}

GroupElement GroupElement::generator(std::size_t k, std::size_t index) {
  if (index >= k) throw std::out_of_range("generator index out of range");
  Bits eps(k, 0);
  eps[index] = 1;
  return GroupElement(std::move(eps));
}

GroupElement GroupElement::all_ones(std::size_t k) { return GroupElement(Bits(k, 1)); }

bool GroupElement::is_zero() const {
  return std::all_of(eps_.begin(), eps_.end(), [](auto b) { return b == 0; });
}

unsigned GroupElement::weight() const {
  return static_cast<unsigned>(std::count(eps_.begin(), eps_.end(), std::uint8_t{1}));
}

std::string GroupElement::to_string() const {
  std::string s;
  for (auto b : eps_) s.push_back(b ? '1' : '0');
  return s;
}

GammaElement::GammaElement(const GammaClass& top)
    : top_(top), poly_(F2Poly::one(RingSpec(top.degrees))) {}

GammaElement::GammaElement(GammaClass top, F2Poly coefficients)
    : top_(std::move(top)), poly_(std::move(coefficients)) {
  if (poly_.ring().caps() != top_.degrees)
    throw std::invalid_argument("coefficient ring must be P(top degrees)");
}

std::vector<GammaClass> GammaElement::classes() const {
  std::vector<GammaClass> out;
  for (const auto& m : poly_.monomials()) {
    GammaClass g{top_.degrees};
    for (std::size_t j = 0; j < g.degrees.size(); ++j) g.degrees[j] -= m.exponents[j];
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

GammaElement smith_apply(const GroupElement& q, const GammaElement& x) {
  if (q.is_zero()) throw std::invalid_argument("Smith operator of the zero element is undefined here");
  if (q.rank() != x.top().degrees.size()) throw std::invalid_argument("group rank does not match the class");
  const auto& ring = x.coefficients().ring();
  return GammaElement(x.top(), poly_mul(linear_form(q.bits(), ring), x.coefficients()));
}

GammaElement smith_apply(const GroupElement& q, const GammaClass& g) {
  return smith_apply(q, GammaElement(g));
}

std::string to_string(CriterionMethod method) {
  switch (method) {
    case CriterionMethod::full_expansion: return "full-expansion";
    case CriterionMethod::certificate: return "certificate";
  }
  return "unknown";
}

std::vector<Bits> weight_vectors(unsigned k, unsigned j) {
  if (k == 0 || k > 30) throw std::invalid_argument("weight_vectors needs 1 <= k <= 30");
  std::vector<Bits> out;
  for (std::uint32_t mask = (1u << k); mask-- > 0;) {
    if (static_cast<unsigned>(std::popcount(mask)) != j) continue;
    Bits b(k);
    // eps_1 is the most significant bit of the mask.
    for (unsigned t = 0; t < k; ++t) b[t] = (mask >> (k - 1 - t)) & 1u;
    out.push_back(std::move(b));
  }
  return out;
}

F2Poly build_Q(unsigned k, unsigned j, const RingSpec& ring) {
  if (j < 1 || j > k) throw std::invalid_argument("Q_{k,j} needs 1 <= j <= k");
  if (ring.num_vars() != k) throw std::invalid_argument("ring rank does not match k");
  return product_of_forms(weight_vectors(k, j), ring);
}

std::vector<Bits> P_power_forms(unsigned k, unsigned n, unsigned m) {
  if (n < 1 || n > k) throw std::invalid_argument("P_{k,n} needs 1 <= n <= k");
  std::vector<Bits> forms;
  for (unsigned rep = 0; rep < m; ++rep)
    for (unsigned j = 1; j <= n; ++j)
      for (auto& b : weight_vectors(k, j)) forms.push_back(std::move(b));
  return forms;
}

F2Poly build_P(unsigned k, unsigned n, const RingSpec& ring) {
  if (n < 1 || n > k) throw std::invalid_argument("P_{k,n} needs 1 <= n <= k");
  if (ring.num_vars() != k) throw std::invalid_argument("ring rank does not match k");
  return product_of_forms(P_power_forms(k, n, 1), ring);
}

RingSpec untruncated_ring_for_P(unsigned k, unsigned n) {
  return RingSpec(std::vector<unsigned>(k, static_cast<unsigned>(alpha(n, k))));
}

F2Poly permutation_sum_P(unsigned k, unsigned n) {
  if (n < 1 || n > k) throw std::invalid_argument("permutation sum needs 1 <= n <= k");
  if (k > 7) throw std::invalid_argument("permutation sum limited to k <= 7");
  std::vector<unsigned> pattern(k);
  for (unsigned i = 0; i < k; ++i) pattern[i] = static_cast<unsigned>(beta(n, k - i));
  // next_permutation over the sorted pattern visits each distinct
  // rearrangement exactly once.
  std::sort(pattern.begin(), pattern.end());
  std::vector<Monomial> terms;
  do {
    terms.push_back(Monomial{pattern});
  } while (std::next_permutation(pattern.begin(), pattern.end()));
  return F2Poly(untruncated_ring_for_P(k, n), terms);
}

PStarCertificate pstar_certificate(unsigned m, unsigned k, unsigned n) {
  if (m < 1) throw std::invalid_argument("certificate needs m >= 1");
  if (n < 1 || n > k) throw std::invalid_argument("certificate needs 1 <= n <= k");
  PStarCertificate cert;
  cert.q = floor_log2(m);
  cert.r = m - (1u << cert.q);
  const std::uint64_t two_q = std::uint64_t{1} << cert.q;
  cert.dstar = static_cast<unsigned>(two_q * beta(n, k) + cert.r);
  cert.pstar.exponents.resize(k);
  cert.caps.resize(k);
  cert.ok = true;
  for (unsigned i = 0; i < k; ++i) {
    // exponent of a_{i+1}: 2^q beta_n(k-i) + r beta_n(i+1)
    const std::uint64_t e = two_q * beta(n, k - i) + std::uint64_t{cert.r} * beta(n, i + 1);
    cert.pstar.exponents[i] = static_cast<unsigned>(e);
    const std::int64_t cap = static_cast<std::int64_t>(cert.dstar) - static_cast<std::int64_t>(i);
    cert.caps[i] = cap < 0 ? 0u : static_cast<unsigned>(cap);
    if (cap < 0 || static_cast<std::int64_t>(e) > cap) cert.ok = false;
  }
  return cert;
}

HeadroomScan pstar_headroom_scan(unsigned k_max, unsigned q_max, unsigned only_n) {
  if (q_max > 30) throw std::invalid_argument("q_max too large");
  HeadroomScan scan;
  for (unsigned k = 2; k <= k_max; ++k) {
    for (unsigned n = 2; n <= k; ++n) {
      if (only_n != 0 && n != only_n) continue;
      for (unsigned q = 0; q <= q_max; ++q) {
        const std::uint64_t two_q = std::uint64_t{1} << q;
        for (std::uint64_t r = 0; r < two_q; ++r) {
          const std::uint64_t d0 = two_q * beta(n, k) + r * beta(n, 1);
          bool all_equal = true;
          for (unsigned i = 0; i < k; ++i) {
            const std::uint64_t di = two_q * beta(n, k - i) + r * beta(n, i + 1);
            ++scan.cases;
            const std::int64_t gap = static_cast<std::int64_t>(d0) - static_cast<std::int64_t>(di);
            if (gap < static_cast<std::int64_t>(i)) {
              scan.violations.push_back({k, n, q, static_cast<unsigned>(r), i, d0, di});
              all_equal = false;
            } else if (gap == static_cast<std::int64_t>(i)) {
              if (i == 0)
                ++scan.equalities_at_i0;
              else if (n == 2)
                ++scan.equalities_n2;
              else
                ++scan.equalities_other;
            } else {
              all_equal = false;
            }
          }
          if (n == 2 && r == two_q - 1 && !all_equal) scan.n2_tight_everywhere = false;
        }
      }
    }
  }
  return scan;
}

namespace {

// Recognizes the multiset of forms of (P_{k,n})^m; returns (n, m).
std::optional<std::pair<unsigned, unsigned>> match_P_power(const std::vector<GroupElement>& targets,
                                                           unsigned k) {
  if (targets.empty() || k > 20) return std::nullopt;
  std::map<Bits, unsigned> counts;
  unsigned n = 0;
  for (const auto& t : targets) {
    ++counts[t.bits()];
    n = std::max(n, t.weight());
  }
  const unsigned m = counts.begin()->second;
  std::size_t expected_distinct = 0;
  for (unsigned j = 1; j <= n; ++j) expected_distinct += binomial(k, j);
  if (counts.size() != expected_distinct) return std::nullopt;
  for (const auto& [bits, c] : counts)
    if (c != m) return std::nullopt;
  return std::make_pair(n, m);
}

std::vector<Bits> forms_of(const std::vector<GroupElement>& targets) {
  std::vector<Bits> forms;
  forms.reserve(targets.size());
  for (const auto& t : targets) forms.push_back(t.bits());
  return forms;
}

}  // namespace

CriterionReport criterion_spheres(const std::vector<GroupElement>& targets, const std::vector<unsigned>& dims,
                                  const CriterionOptions& options) {
  RingSpec ring(dims);
  const std::size_t k = dims.size();
  for (const auto& t : targets) {
    if (t.rank() != k) throw std::invalid_argument("target " + t.to_string() + " has the wrong rank");
    if (t.is_zero()) throw std::invalid_argument("zero group element is not a valid target");
  }
  CriterionReport report{.nonzero = false, .witness = std::nullopt, .ring = ring,
                         .method = CriterionMethod::full_expansion};

  // Each factor raises the degree by one.
  if (targets.size() > ring.top_degree()) return report;

  // Products of single variables are a single monomial.
  if (std::all_of(targets.begin(), targets.end(), [](const auto& t) { return t.weight() == 1; })) {
    Monomial mono{std::vector<unsigned>(k, 0)};
    for (const auto& t : targets)
      for (std::size_t j = 0; j < k; ++j) mono.exponents[j] += t.bits()[j];
    if (ring.fits(mono)) {
      report.nonzero = true;
      report.witness = mono;
    }
    return report;
  }

  if (options.use_certificate) {
    if (auto match = match_P_power(targets, static_cast<unsigned>(k))) {
      const auto [n, m] = *match;
      const auto cert = pstar_certificate(m, static_cast<unsigned>(k), n);
      if (ring.fits(cert.pstar)) {
        // The coefficient of p* is computed exactly by expanding inside the
        // box below p*, where only p* itself can reach full degree.
        RingSpec box(cert.pstar.exponents);
        const F2Poly below = product_of_forms(forms_of(targets), box, options.term_guard);
        if (below.contains(cert.pstar)) {
          report.nonzero = true;
          report.witness = cert.pstar;
          report.method = CriterionMethod::certificate;
          return report;
        }
      }
    }
  }

  const F2Poly prod = product_of_forms(forms_of(targets), ring, options.term_guard);
  if (!prod.is_zero()) {
    report.nonzero = true;
    report.witness = prod.leading();
  }
  return report;
}

CriterionReport criterion_stiefel(const std::vector<GroupElement>& targets, unsigned n, unsigned k,
                                  const CriterionOptions& options) {
  if (k < 1 || k > n) throw std::invalid_argument("Stiefel criterion needs 1 <= k <= n");
  std::vector<unsigned> dims(k);
  for (unsigned i = 0; i < k; ++i) dims[i] = n - 1 - i;
  return criterion_spheres(targets, dims, options);
}

}  // namespace orthopart
