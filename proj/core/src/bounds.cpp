#include "orthopart/bounds.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace orthopart {

std::uint64_t binomial(std::int64_t s, std::int64_t i) {
  if (i < 0 || s < i) return 0;
  if (s < 0) return 0;
  i = std::min(i, s - i);
  std::uint64_t c = 1;
  for (std::int64_t t = 1; t <= i; ++t) c = c * static_cast<std::uint64_t>(s - i + t) / static_cast<std::uint64_t>(t);
  return c;
}

std::uint64_t alpha(unsigned ell, unsigned j) {
  std::uint64_t sum = 0;
  for (unsigned i = 1; i <= ell; ++i) sum += binomial(j, i);
  return sum;
}

std::uint64_t beta(unsigned ell, unsigned j) {
  std::uint64_t sum = 0;
  for (unsigned i = 0; i < ell; ++i) sum += binomial(static_cast<std::int64_t>(j) - 1, i);
  return sum;
}

unsigned floor_log2(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("floor_log2 of zero");
  return static_cast<unsigned>(std::bit_width(m) - 1);
}

std::uint64_t stiefel_dim(unsigned n, unsigned k) {
  if (k > n) throw std::invalid_argument("Stiefel manifold needs k <= n");
  return std::uint64_t{n} * k - std::uint64_t{k} * (k + 1) / 2;
}

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

std::uint64_t shared_upper(unsigned m, std::uint64_t beta_top) {
  return m + (beta_top - 1) * (std::uint64_t{1} << floor_log2(m));
}

// Returns j >= 1 with m = 2^j - offset, if any.
std::optional<unsigned> power_family(unsigned m, unsigned offset) {
  const std::uint64_t v = std::uint64_t{m} + offset;
  if (std::has_single_bit(v)) return static_cast<unsigned>(std::bit_width(v) - 1);
  return std::nullopt;
}

void finish(BoundRecord& rec) {
  if (rec.lower > rec.upper) throw std::logic_error("bounds inverted");
  rec.tight = rec.lower == rec.upper;
}

}  // namespace

BoundRecord delta_bounds(unsigned m, unsigned k) {
  if (m < 1 || k < 1) throw std::invalid_argument("delta bounds need m, k >= 1");
  if (k > 62) throw std::invalid_argument("k too large");
  BoundRecord rec;
  rec.m = m;
  rec.k = k;
  rec.n = k;
  rec.lower = ceil_div(std::uint64_t{m} * ((std::uint64_t{1} << k) - 1), k);
  rec.upper = shared_upper(m, std::uint64_t{1} << (k - 1));
  if (k == 2) {
    if (auto j = power_family(m, 1); j && *j >= 1)
      rec.closed_form = ClosedForm{"k=2 m=2^j-1", 3 * (std::uint64_t{1} << (*j - 1)) - 1};
  }
  finish(rec);
  return rec;
}

BoundRecord delta_star_bounds(unsigned m, unsigned k, unsigned n) {
  if (m < 1 || k < 1) throw std::invalid_argument("delta* bounds need m, k >= 1");
  if (n < 1 || n > k) throw std::invalid_argument("delta* bounds need 1 <= n <= k");
  if (n == 1 && k >= 2)
    throw std::invalid_argument("delta* upper bound needs n >= 2 when k >= 2");
  if (k > 62) throw std::invalid_argument("k too large");
  BoundRecord rec;
  rec.m = m;
  rec.k = k;
  rec.n = n;
  // ceil(m alpha / k + (k-1)/2) = ceil((2 m alpha + k (k-1)) / 2k)
  const std::uint64_t num = 2 * std::uint64_t{m} * alpha(n, k) + std::uint64_t{k} * (k - 1);
  rec.lower = ceil_div(num, 2 * std::uint64_t{k});
  rec.upper = shared_upper(m, beta(n, k));

  if (k == 2 && n == 2) {
    if (auto j = power_family(m, 1))
      rec.closed_form = ClosedForm{"k=2 m=2^j-1", 3 * (std::uint64_t{1} << (*j - 1)) - 1};
    else if (auto j2 = power_family(m, 2); j2 && *j2 >= 2)
      rec.closed_form = ClosedForm{"k=2 m=2^j-2", 3 * (std::uint64_t{1} << (*j2 - 1)) - 2};
  } else if (n == 2) {
    if (auto j = power_family(m, 1))
      rec.closed_form = ClosedForm{"n=2 m=2^j-1", (std::uint64_t{1} << (*j - 1)) * (k + 1) - 1};
  }
  finish(rec);
  return rec;
}

IntRange parse_range(const std::string& text) {
  auto to_uint = [&](const std::string& s) -> unsigned {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad range '" + text + "'");
    return static_cast<unsigned>(std::stoul(s));
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const unsigned v = to_uint(text);
    return {v, v};
  }
  return {to_uint(text.substr(0, dots)), to_uint(text.substr(dots + 2))};
}

std::vector<BoundRecord> bounds_table(IntRange m_range, IntRange k_range, NMode n_mode) {
  std::vector<BoundRecord> rows;
  if (m_range.empty() || k_range.empty()) return rows;
  for (unsigned k = std::max(1u, k_range.lo); k <= k_range.hi; ++k) {
    IntRange ns = n_mode.equals_k ? IntRange{k, k} : n_mode.range;
    for (unsigned n = std::max(1u, ns.lo); n <= ns.hi && n <= k; ++n) {
      if (n == 1 && k >= 2) continue;
      for (unsigned m = std::max(1u, m_range.lo); m <= m_range.hi; ++m)
        rows.push_back(delta_star_bounds(m, k, n));
    }
  }
  return rows;
}

std::string bounds_csv(const std::vector<BoundRecord>& rows) {
  std::ostringstream os;
  os << "m,k,n,lower,upper,tight,closed_form\n";
  for (const auto& r : rows) {
    os << r.m << ',' << r.k << ',' << r.n << ',' << r.lower << ',' << r.upper << ','
       << (r.tight ? "true" : "false") << ',';
    if (r.closed_form) os << r.closed_form->family << " -> " << r.closed_form->value;
    os << '\n';
  }
  return os.str();
}

}  // namespace orthopart
