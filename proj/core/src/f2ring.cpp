#include "orthopart/f2ring.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace orthopart {

namespace {

using Key = RingSpec::Key;

// Sorts descending and cancels equal keys in pairs.
void canonicalize(std::vector<Key>& keys) {
  std::sort(keys.begin(), keys.end(), std::greater<>());
  std::size_t out = 0;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    if ((j - i) % 2 == 1) keys[out++] = keys[i];
    i = j;
  }
  keys.resize(out);
}

void require_same_ring(const F2Poly& p, const F2Poly& q) {
  if (!(p.ring() == q.ring())) throw std::invalid_argument("polynomials live in different rings");
}

}  // namespace

unsigned Monomial::degree() const {
  return std::accumulate(exponents.begin(), exponents.end(), 0u);
}

std::string to_string(const Monomial& m) {
  std::ostringstream os;
  bool any = false;
  for (std::size_t j = 0; j < m.exponents.size(); ++j) {
    if (m.exponents[j] == 0) continue;
    if (any) os << '*';
    os << 'a' << (j + 1);
    if (m.exponents[j] > 1) os << '^' << m.exponents[j];
    any = true;
  }
  if (!any) os << '1';
  return os.str();
}

RingSpec::RingSpec(std::vector<unsigned> caps) {
  if (caps.empty()) throw std::invalid_argument("ring needs at least one variable");
  auto layout = std::make_shared<Layout>();
  layout->caps = std::move(caps);
  const std::size_t k = layout->caps.size();
  layout->shifts.resize(k);
  layout->masks.resize(k);
  unsigned shift = 0;
  // Last variable in the lowest field.
  for (std::size_t jj = k; jj-- > 0;) {
    const unsigned cap = layout->caps[jj];
    // One guard bit so the sum of two in-range exponents never carries.
    const unsigned width = static_cast<unsigned>(std::bit_width(cap)) + 1;
    layout->shifts[jj] = shift;
    layout->masks[jj] = (Key{1} << width) - 1;
    shift += width;
    layout->top_degree += cap;
  }
  if (shift > 128) throw std::invalid_argument("ring too large for packed monomials (over 128 bits)");
  layout_ = std::move(layout);
}

RingSpec ring_new(std::vector<unsigned> caps) { return RingSpec(std::move(caps)); }

bool RingSpec::fits(const Monomial& m) const {
  if (m.exponents.size() != num_vars()) return false;
  for (std::size_t j = 0; j < num_vars(); ++j)
    if (m.exponents[j] > cap(j)) return false;
  return true;
}

RingSpec::Key RingSpec::pack(const Monomial& m) const {
  if (!fits(m)) throw std::invalid_argument("monomial " + to_string(m) + " does not fit the ring");
  Key key = 0;
  for (std::size_t j = 0; j < num_vars(); ++j) key |= Key{m.exponents[j]} << layout_->shifts[j];
  return key;
}

Monomial RingSpec::unpack(Key key) const {
  Monomial m;
  m.exponents.resize(num_vars());
  for (std::size_t j = 0; j < num_vars(); ++j) m.exponents[j] = exponent(key, j);
  return m;
}

bool RingSpec::multiply_keys(Key a, Key b, Key& out) const {
  const Key sum = a + b;
  for (std::size_t j = 0; j < num_vars(); ++j)
    if (exponent(sum, j) > cap(j)) return false;
  out = sum;
  return true;
}

unsigned RingSpec::key_degree(Key key) const {
  unsigned d = 0;
  for (std::size_t j = 0; j < num_vars(); ++j) d += exponent(key, j);
  return d;
}

F2Poly::F2Poly(RingSpec ring, const std::vector<Monomial>& monomials) : ring_(std::move(ring)) {
  keys_.reserve(monomials.size());
  for (const auto& m : monomials) {
    if (m.exponents.size() != ring_.num_vars())
      throw std::invalid_argument("monomial has wrong number of variables");
    if (ring_.fits(m)) keys_.push_back(ring_.pack(m));
  }
  canonicalize(keys_);
}

F2Poly F2Poly::one(const RingSpec& ring) { return from_keys(ring, {Key{0}}); }

F2Poly F2Poly::variable(const RingSpec& ring, std::size_t j) {
  if (j >= ring.num_vars()) throw std::out_of_range("variable index out of range");
  if (ring.cap(j) == 0) return zero(ring);
  return from_keys(ring, {ring.unit_key(j)});
}

F2Poly F2Poly::from_keys(RingSpec ring, std::vector<Key> keys) {
  F2Poly p(std::move(ring));
  canonicalize(keys);
  p.keys_ = std::move(keys);
  return p;
}

std::vector<Monomial> F2Poly::monomials() const {
  std::vector<Monomial> out;
  out.reserve(keys_.size());
  for (Key k : keys_) out.push_back(ring_.unpack(k));
  return out;
}

bool F2Poly::contains(const Monomial& m) const {
  if (!ring_.fits(m)) return false;
  const Key key = ring_.pack(m);
  return std::binary_search(keys_.begin(), keys_.end(), key, std::greater<>());
}

Monomial F2Poly::leading() const {
  if (keys_.empty()) throw std::logic_error("zero polynomial has no leading monomial");
  return ring_.unpack(keys_.front());
}

Monomial F2Poly::trailing() const {
  if (keys_.empty()) throw std::logic_error("zero polynomial has no trailing monomial");
  return ring_.unpack(keys_.back());
}

F2Poly poly_add(const F2Poly& p, const F2Poly& q) {
  require_same_ring(p, q);
  std::vector<Key> keys;
  keys.reserve(p.size() + q.size());
  std::set_symmetric_difference(p.keys().begin(), p.keys().end(), q.keys().begin(), q.keys().end(),
                                std::back_inserter(keys), std::greater<>());
  return F2Poly::from_keys(p.ring(), std::move(keys));
}

F2Poly poly_mul(const F2Poly& p, const F2Poly& q) {
  require_same_ring(p, q);
  const RingSpec& ring = p.ring();
  std::vector<Key> keys;
  keys.reserve(p.size() * q.size());
  for (Key a : p.keys()) {
    for (Key b : q.keys()) {
      Key prod;
      if (ring.multiply_keys(a, b, prod)) keys.push_back(prod);
    }
  }
  return F2Poly::from_keys(ring, std::move(keys));
}

namespace {

// Over F2 the square of a sum is the sum of squares.
F2Poly frobenius(const F2Poly& p) {
  std::vector<Key> keys;
  keys.reserve(p.size());
  for (Key a : p.keys()) {
    Key sq;
    if (p.ring().multiply_keys(a, a, sq)) keys.push_back(sq);
  }
  return F2Poly::from_keys(p.ring(), std::move(keys));
}

}  // namespace

F2Poly poly_pow(const F2Poly& p, unsigned e) {
  F2Poly result = F2Poly::one(p.ring());
  F2Poly base = p;
  while (e > 0) {
    if (e & 1u) result = poly_mul(result, base);
    e >>= 1;
    if (e > 0) base = frobenius(base);
  }
  return result;
}

F2Poly linear_form(const Bits& eps, const RingSpec& ring) {
  if (eps.size() != ring.num_vars())
    throw std::invalid_argument("linear form length does not match the number of variables");
  std::vector<Key> keys;
  for (std::size_t j = 0; j < eps.size(); ++j) {
    if (eps[j] > 1) throw std::invalid_argument("linear form entries must be 0 or 1");
    if (eps[j] && ring.cap(j) > 0) keys.push_back(ring.unit_key(j));
  }
  return F2Poly::from_keys(ring, std::move(keys));
}

F2Poly product_of_forms(const std::vector<Bits>& forms, const RingSpec& ring, std::size_t guard) {
  const std::size_t k = ring.num_vars();
  std::vector<std::vector<std::size_t>> supports;
  supports.reserve(forms.size());
  for (const auto& f : forms) {
    if (f.size() != k) throw std::invalid_argument("linear form length does not match the number of variables");
    std::vector<std::size_t> vars;
    for (std::size_t j = 0; j < k; ++j) {
      if (f[j] > 1) throw std::invalid_argument("linear form entries must be 0 or 1");
      if (f[j]) vars.push_back(j);
    }
    supports.push_back(std::move(vars));
  }
  if (forms.size() > ring.top_degree()) return F2Poly::zero(ring);
  for (const auto& s : supports)
    if (s.empty()) return F2Poly::zero(ring);

  std::stable_sort(supports.begin(), supports.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });

  std::vector<Key> current{Key{0}};
  std::vector<Key> next;
  std::size_t remaining = supports.size();
  for (const auto& vars : supports) {
    --remaining;
    next.clear();
    next.reserve(current.size() * vars.size());
    for (Key mono : current) {
      for (std::size_t j : vars) {
        if (ring.exponent(mono, j) >= ring.cap(j)) continue;
        const Key prod = mono + ring.unit_key(j);
        // Every later factor raises the degree by one.
        if (ring.top_degree() - ring.key_degree(prod) < remaining) continue;
        next.push_back(prod);
      }
    }
    canonicalize(next);
    if (next.size() > guard)
      throw GuardExceeded("product of forms exceeded the term guard (" + std::to_string(guard) + ")");
    current.swap(next);
    if (current.empty()) break;
  }
  return F2Poly::from_keys(ring, std::move(current));
}

F2Poly free_expand_oracle(const std::vector<Bits>& forms, const std::vector<unsigned>& caps,
                          std::size_t guard) {
  const std::size_t k = caps.size();
  std::vector<std::vector<std::size_t>> choices;
  double branches = 1.0;
  for (const auto& f : forms) {
    if (f.size() != k) throw std::invalid_argument("linear form length does not match the number of variables");
    std::vector<std::size_t> vars;
    for (std::size_t j = 0; j < k; ++j)
      if (f[j]) vars.push_back(j);
    branches *= static_cast<double>(vars.size());
    choices.push_back(std::move(vars));
  }
  if (branches > static_cast<double>(guard))
    throw GuardExceeded("free expansion has too many branches");

  // Exponent vector -> parity of the number of branches producing it.
  std::map<std::vector<unsigned>, bool> parity;
  std::vector<unsigned> exps(k, 0);
  std::function<void(std::size_t)> expand = [&](std::size_t i) {
    if (i == choices.size()) {
      parity[exps] = !parity[exps];
      return;
    }
    for (std::size_t j : choices[i]) {
      ++exps[j];
      expand(i + 1);
      --exps[j];
    }
  };
  if (branches > 0.0) expand(0);

  std::vector<Monomial> survivors;
  for (const auto& [e, odd] : parity) {
    if (!odd) continue;
    bool inside = true;
    for (std::size_t j = 0; j < k; ++j) inside = inside && e[j] <= caps[j];
    if (inside) survivors.push_back(Monomial{e});
  }
  return F2Poly(RingSpec(caps), survivors);
}

std::string poly_to_json(const F2Poly& p) {
  nlohmann::json j;
  j["caps"] = p.ring().caps();
  nlohmann::json monos = nlohmann::json::array();
  for (const auto& m : p.monomials()) monos.push_back(m.exponents);
  j["monomials"] = std::move(monos);
  return j.dump();
}

F2Poly poly_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed polynomial JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("caps") || !j.contains("monomials"))
    throw std::invalid_argument("polynomial JSON needs \"caps\" and \"monomials\"");
  RingSpec ring(j.at("caps").get<std::vector<unsigned>>());
  std::vector<Monomial> monos;
  for (const auto& m : j.at("monomials")) {
    Monomial mono{m.get<std::vector<unsigned>>()};
    if (!ring.fits(mono)) throw std::invalid_argument("monomial " + to_string(mono) + " exceeds the caps");
    monos.push_back(std::move(mono));
  }
  return F2Poly(ring, monos);
}

}  // namespace orthopart
