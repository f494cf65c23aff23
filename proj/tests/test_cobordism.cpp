#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "orthopart/bounds.hpp"
#include "orthopart/cobordism.hpp"
#include "orthopart/random.hpp"

using namespace orthopart;

namespace {

GroupElement ge(const char* s) { return GroupElement::parse(s); }

std::vector<GroupElement> forms(std::initializer_list<const char*> bits) {
  std::vector<GroupElement> v;
  for (auto b : bits) v.push_back(ge(b));
  return v;
}

std::vector<GroupElement> coordinate_family(unsigned n, unsigned k) {
  std::vector<GroupElement> v;
  for (unsigned i = 0; i < k; ++i) v.insert(v.end(), n - 1 - i, GroupElement::generator(k, i));
  return v;
}

}  // namespace

TEST(GroupElement, ParseAndPrint) {
  const auto q = ge("101");
  EXPECT_EQ(q.rank(), 3u);
  EXPECT_EQ(q.bits(), (Bits{1, 0, 1}));
  EXPECT_EQ(q.weight(), 2u);
  EXPECT_EQ(q.to_string(), "101");
  EXPECT_TRUE(ge("000").is_zero());
  EXPECT_EQ(GroupElement::generator(3, 1).to_string(), "010");
  EXPECT_EQ(GroupElement::all_ones(2).to_string(), "11");
  EXPECT_THROW(ge("10x"), std::invalid_argument);
  EXPECT_THROW(ge(""), std::invalid_argument);
}

TEST(Smith, SingleGenerator) {
  const auto out = smith_apply(ge("10"), GammaClass{{2, 1}});
  ASSERT_EQ(out.classes().size(), 1u);
  EXPECT_EQ(out.classes().front(), (GammaClass{{1, 1}}));
}

TEST(Smith, SumOfGenerators) {
  const auto out = smith_apply(ge("11"), GammaClass{{1, 1}});
  const auto cls = out.classes();
  ASSERT_EQ(cls.size(), 2u);
  EXPECT_EQ(cls[0], (GammaClass{{1, 0}}));
  EXPECT_EQ(cls[1], (GammaClass{{0, 1}}));
}

TEST(Smith, TruncatedToZero) {
  EXPECT_TRUE(smith_apply(ge("10"), GammaClass{{0, 1}}).is_zero());
  EXPECT_THROW(smith_apply(ge("00"), GammaClass{{1, 1}}), std::invalid_argument);
}

TEST(Smith, CompositionLowersDegrees) {
  // Applying generator l exactly j_l times lowers slot l by j_l.
  for (unsigned k = 1; k <= 3; ++k) {
    std::vector<unsigned> top(k, 0);
    while (true) {
      std::vector<unsigned> lower(k, 0);
      while (true) {
        GammaElement x{GammaClass{top}};
        for (unsigned l = 0; l < k; ++l)
          for (unsigned t = 0; t < lower[l]; ++t) x = smith_apply(GroupElement::generator(k, l), x);
        GammaClass expect{top};
        for (unsigned l = 0; l < k; ++l) expect.degrees[l] -= lower[l];
        ASSERT_EQ(x.classes(), std::vector<GammaClass>{expect});
        unsigned pos = 0;
        while (pos < k && lower[pos] == top[pos]) lower[pos++] = 0;
        if (pos == k) break;
        ++lower[pos];
      }
      unsigned pos = 0;
      while (pos < k && top[pos] == 4) top[pos++] = 0;
      if (pos == k) break;
      ++top[pos];
    }
  }
}

TEST(Criterion, Spheres) {
  for (unsigned d = 0; d <= 6; ++d)
    for (unsigned m = 1; m <= 8; ++m) {
      std::vector<GroupElement> t(m, ge("1"));
      EXPECT_EQ(criterion_spheres(t, {d}).nonzero, m <= d) << m << " " << d;
    }
  const auto a = criterion_spheres(forms({"10", "10", "01"}), {2, 1});
  EXPECT_TRUE(a.nonzero);
  EXPECT_EQ(a.witness->exponents, (std::vector<unsigned>{2, 1}));
  const auto b = criterion_spheres(forms({"10", "01", "11"}), {2, 2});
  EXPECT_TRUE(b.nonzero);
  EXPECT_EQ(b.witness->exponents, (std::vector<unsigned>{2, 1}));
}

TEST(Criterion, Errors) {
  EXPECT_THROW(criterion_spheres(forms({"00"}), {1, 1}), std::invalid_argument);
  EXPECT_THROW(criterion_spheres(forms({"101"}), {1, 1}), std::invalid_argument);
  EXPECT_THROW(criterion_stiefel(forms({"1"}), 2, 3), std::invalid_argument);
}

TEST(Criterion, Stiefel) {
  EXPECT_TRUE(criterion_stiefel(forms({"10", "10", "01"}), 3, 2).nonzero);
  EXPECT_FALSE(criterion_stiefel(forms({"10", "10", "10"}), 3, 2).nonzero);
  const auto r = criterion_stiefel(forms({"11"}), 2, 2);
  EXPECT_TRUE(r.nonzero);
  EXPECT_EQ(r.ring.caps(), (std::vector<unsigned>{1, 0}));
  EXPECT_EQ(r.witness->exponents, (std::vector<unsigned>{1, 0}));
}

TEST(Criterion, CoordinateFamilyOnStiefelManifolds) {
  for (unsigned n = 1; n <= 8; ++n)
    for (unsigned k = 1; k <= n; ++k) EXPECT_TRUE(criterion_stiefel(coordinate_family(n, k), n, k).nonzero);
}

TEST(Criterion, WitnessIsInProductAndWithinCaps) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const unsigned k = 1 + static_cast<unsigned>(rng.below(3));
    std::vector<unsigned> dims(k);
    for (auto& d : dims) d = static_cast<unsigned>(rng.below(5));
    const unsigned total = std::accumulate(dims.begin(), dims.end(), 0u);
    std::vector<GroupElement> t;
    std::vector<Bits> raw;
    const auto count = rng.below(total + 2);
    for (std::size_t i = 0; i < count; ++i) {
      Bits b(k, 0);
      while (std::all_of(b.begin(), b.end(), [](auto x) { return x == 0; }))
        for (auto& x : b) x = static_cast<std::uint8_t>(rng.below(2));
      t.emplace_back(b);
      raw.push_back(b);
    }
    const auto rep = criterion_spheres(t, dims);
    const auto truth = free_expand_oracle(raw, dims);
    ASSERT_EQ(rep.nonzero, !truth.is_zero());
    if (rep.nonzero) {
      ASSERT_TRUE(rep.witness.has_value());
      ASSERT_TRUE(rep.ring.fits(*rep.witness));
      ASSERT_TRUE(truth.contains(*rep.witness));
    }
  }
}

TEST(Criterion, Monotone) {
  Rng rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    const unsigned k = 2 + static_cast<unsigned>(rng.below(2));
    std::vector<unsigned> dims(k);
    for (auto& d : dims) d = static_cast<unsigned>(rng.below(4));
    std::vector<GroupElement> t;
    for (std::size_t i = 0; i < 1 + rng.below(6); ++i) {
      Bits b(k, 0);
      b[rng.below(k)] = 1;
      for (auto& x : b) x |= static_cast<std::uint8_t>(rng.below(2));
      t.emplace_back(b);
    }
    if (!criterion_spheres(t, dims).nonzero) continue;
    auto bigger = dims;
    for (auto& d : bigger) d += static_cast<unsigned>(rng.below(3));
    ASSERT_TRUE(criterion_spheres(t, bigger).nonzero);
  }
}

TEST(Criterion, CertificateAgreesWithExpansion) {
  for (unsigned k = 2; k <= 3; ++k)
    for (unsigned n = 2; n <= k; ++n)
      for (unsigned m = 1; m <= 4; ++m) {
        std::vector<GroupElement> t;
        for (const auto& b : P_power_forms(k, n, m)) t.emplace_back(b);
        const auto cert = pstar_certificate(m, k, n);
        const auto fast = criterion_spheres(t, cert.caps);
        const auto slow = criterion_spheres(t, cert.caps, {.use_certificate = false});
        const bool cancels = k == 3 && n == 3 && m == 3;
        EXPECT_EQ(fast.method, cancels ? CriterionMethod::full_expansion : CriterionMethod::certificate);
        EXPECT_EQ(slow.method, CriterionMethod::full_expansion);
        EXPECT_TRUE(fast.nonzero);
        EXPECT_EQ(fast.nonzero, slow.nonzero);
        if (!cancels) EXPECT_EQ(*fast.witness, cert.pstar);
      }
}

TEST(Criterion, CertificateMonomialCanCancel) {
  // 2(4,2,1) + (1,2,4) = 2(4,1,2) + (1,4,2): two terms, so p* drops out mod 2
  // even though the product survives in the same ring.
  const auto cert = pstar_certificate(3, 3, 3);
  EXPECT_EQ(cert.pstar, (Monomial{{9, 6, 6}}));
  EXPECT_EQ(cert.caps, (std::vector<unsigned>{9, 8, 7}));
  EXPECT_TRUE(cert.ok);
  const RingSpec ring(cert.caps);
  const auto power = product_of_forms(P_power_forms(3, 3, 3), ring);
  EXPECT_FALSE(contains_monomial(power, cert.pstar));
  EXPECT_EQ(power.monomials(), (std::vector<Monomial>{Monomial{{9, 8, 4}}}));
  EXPECT_EQ(free_expand_oracle(P_power_forms(3, 3, 3), cert.caps, 1u << 24), power);
}

TEST(Criterion, GuardIsHonoured) {
  std::vector<GroupElement> t;
  for (const auto& b : P_power_forms(5, 5, 1)) t.emplace_back(b);
  EXPECT_THROW(criterion_spheres(t, {31, 30, 29, 28, 27}, {.term_guard = 16, .use_certificate = false}),
               GuardExceeded);
}

TEST(Products, Q) {
  const auto big = untruncated_ring_for_P(3, 3);
  const RingSpec r2({4, 4});
  EXPECT_TRUE(build_Q(2, 1, r2) == F2Poly(r2, {Monomial{{1, 1}}}));
  EXPECT_TRUE(build_Q(2, 2, r2) == F2Poly(r2, {Monomial{{1, 0}}, Monomial{{0, 1}}}));
  const auto q32 = build_Q(3, 2, big);
  const auto expect = product_of_forms({{1, 1, 0}, {1, 0, 1}, {0, 1, 1}}, big);
  EXPECT_TRUE(q32 == expect);
  for (const auto& m : q32.monomials()) EXPECT_EQ(m.degree(), 3u);
  EXPECT_THROW(build_Q(2, 3, r2), std::invalid_argument);
  EXPECT_THROW(build_Q(2, 0, r2), std::invalid_argument);
}

TEST(Products, P) {
  const RingSpec r({2, 2});
  EXPECT_TRUE(build_P(2, 2, r) == F2Poly(r, {Monomial{{2, 1}}, Monomial{{1, 2}}}));
  for (unsigned k = 1; k <= 6; ++k) {
    const auto p = build_P(k, 1, untruncated_ring_for_P(k, 1));
    EXPECT_TRUE(p == F2Poly(p.ring(), {Monomial{std::vector<unsigned>(k, 1)}}));
  }
  for (unsigned k = 1; k <= 5; ++k)
    for (unsigned n = 1; n <= k; ++n)
      for (const auto& m : build_P(k, n, untruncated_ring_for_P(k, n)).monomials())
        ASSERT_EQ(m.degree(), alpha(n, k));
  EXPECT_THROW(build_P(2, 3, r), std::invalid_argument);
}

TEST(Products, ExtremeMonomials) {
  for (unsigned k = 2; k <= 5; ++k)
    for (unsigned n = 2; n <= k; ++n) {
      const auto p = build_P(k, n, untruncated_ring_for_P(k, n));
      std::vector<unsigned> hi(k);
      for (unsigned i = 0; i < k; ++i) hi[i] = static_cast<unsigned>(beta(n, k - i));
      auto lo = hi;
      std::reverse(lo.begin(), lo.end());
      EXPECT_EQ(p.leading().exponents, hi) << k << "," << n;
      EXPECT_EQ(p.trailing().exponents, lo) << k << "," << n;
    }
}

TEST(Products, SymmetricUnderRelabelling) {
  Rng rng(11);
  for (unsigned k = 2; k <= 5; ++k)
    for (unsigned n = 1; n <= k; ++n) {
      const auto p = build_P(k, n, untruncated_ring_for_P(k, n));
      std::vector<std::size_t> perm(k);
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t i = k; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
      std::vector<Monomial> moved;
      for (const auto& m : p.monomials()) {
        Monomial out{std::vector<unsigned>(k)};
        for (std::size_t j = 0; j < k; ++j) out.exponents[perm[j]] = m.exponents[j];
        moved.push_back(out);
      }
      EXPECT_TRUE(F2Poly(p.ring(), moved) == p);
    }
}

TEST(Products, RearrangementSumSmallCases) {
  const auto p22 = permutation_sum_P(2, 2);
  EXPECT_TRUE(p22 == F2Poly(p22.ring(), {Monomial{{2, 1}}, Monomial{{1, 2}}}));
  const auto p21 = permutation_sum_P(2, 1);
  EXPECT_TRUE(p21 == F2Poly(p21.ring(), {Monomial{{1, 1}}}));
  EXPECT_TRUE(p21 == build_P(2, 1, p21.ring()));
  const auto p33 = permutation_sum_P(3, 3);
  EXPECT_EQ(p33.size(), 6u);
  for (const auto& m : p33.monomials()) {
    auto e = m.exponents;
    std::sort(e.begin(), e.end());
    EXPECT_EQ(e, (std::vector<unsigned>{1, 2, 4}));
  }
  EXPECT_THROW(permutation_sum_P(8, 2), std::invalid_argument);
}

TEST(Products, RearrangementSumWhereItHolds) {
  for (unsigned k = 1; k <= 5; ++k)
    for (unsigned n = 1; n <= k; ++n) {
      if (n > 2 && n < k) continue;  // the sum differs from the product there
      EXPECT_TRUE(build_P(k, n, untruncated_ring_for_P(k, n)) == permutation_sum_P(k, n)) << k << "," << n;
    }
}

TEST(Products, RearrangementSumDiffersForMiddleOrders) {
  // Independently cross-checked: at (4,3) the product has 96 monomials and
  // the rearrangement sum 24, e.g. a1 a2^2 a3^5 a4^6 is missing from the sum.
  const auto p = build_P(4, 3, untruncated_ring_for_P(4, 3));
  const auto s = permutation_sum_P(4, 3);
  EXPECT_EQ(p.size(), 96u);
  EXPECT_EQ(s.size(), 24u);
  EXPECT_TRUE(p.contains(Monomial{{1, 2, 5, 6}}));
  EXPECT_FALSE(s.contains(Monomial{{1, 2, 5, 6}}));
  for (const auto& m : s.monomials()) EXPECT_TRUE(p.contains(m));
}

TEST(Certificate, HandValues) {
  auto c = pstar_certificate(1, 2, 2);
  EXPECT_EQ(c.q, 0u);
  EXPECT_EQ(c.r, 0u);
  EXPECT_EQ(c.dstar, 2u);
  EXPECT_EQ(c.pstar.exponents, (std::vector<unsigned>{2, 1}));
  EXPECT_EQ(c.caps, (std::vector<unsigned>{2, 1}));
  EXPECT_TRUE(c.ok);

  c = pstar_certificate(3, 2, 2);
  EXPECT_EQ(c.q, 1u);
  EXPECT_EQ(c.r, 1u);
  EXPECT_EQ(c.dstar, 5u);
  EXPECT_EQ(c.pstar.exponents, (std::vector<unsigned>{5, 4}));
  EXPECT_EQ(c.caps, (std::vector<unsigned>{5, 4}));
  EXPECT_TRUE(c.ok);

  c = pstar_certificate(2, 3, 2);
  EXPECT_EQ(c.dstar, 6u);
  EXPECT_EQ(c.pstar.exponents, (std::vector<unsigned>{6, 4, 2}));
  EXPECT_EQ(c.caps, (std::vector<unsigned>{6, 5, 4}));
  EXPECT_TRUE(c.ok);
}

TEST(Certificate, FitsAcrossRange) {
  for (unsigned k = 2; k <= 6; ++k)
    for (unsigned n = 2; n <= k; ++n)
      for (unsigned m = 1; m <= 64; ++m) {
        const auto c = pstar_certificate(m, k, n);
        ASSERT_TRUE(c.ok) << m << "," << k << "," << n;
        ASSERT_EQ(c.dstar, delta_star_bounds(m, k, n).upper);
        ASSERT_EQ(c.pstar.degree(), m * alpha(n, k));
      }
}

TEST(Certificate, SingleFormOrderDoesNotFit) {
  // With n = 1 every exponent of p* equals m while the caps decrease.
  for (unsigned k = 2; k <= 4; ++k)
    for (unsigned m = 1; m <= 8; ++m) EXPECT_FALSE(pstar_certificate(m, k, 1).ok);
  EXPECT_TRUE(pstar_certificate(5, 1, 1).ok);
}

TEST(Headroom, HandCases) {
  // k=3, n=2, q=1, r=1: d_i = 7 - i.
  const auto s = pstar_headroom_scan(3, 1, 2);
  EXPECT_TRUE(s.violations.empty());
  EXPECT_GT(s.equalities_n2, 0u);
  const auto t = pstar_headroom_scan(2, 0, 2);
  EXPECT_TRUE(t.violations.empty());
  EXPECT_GT(t.equalities_at_i0, 0u);
}

TEST(Headroom, FullScan) {
  const auto s = pstar_headroom_scan(8, 6);
  EXPECT_TRUE(s.violations.empty());
  EXPECT_GT(s.equalities_at_i0, 0u);
  EXPECT_GT(s.equalities_n2, 0u);
  EXPECT_TRUE(s.n2_tight_everywhere);
}
