#include <gtest/gtest.h>

#include "asymlab/map.hpp"

using namespace asymlab;

namespace {

constexpr mpfr_prec_t P = 200;

BigReal big(const char* s) { return BigReal(s, P); }

AsymmetricMap family(const char* beta, const char* t) {
  return AsymmetricMap(big(beta), big(t), BigReal(1L, P), BigReal(1L, P), P);
}

}  // namespace

TEST(Map, EvalExamples) {
  auto m = family("2", "2");
  EXPECT_TRUE(m.eval(big("-0.5")).is_zero());
  EXPECT_TRUE(m.eval(BigReal(0L, P)) == 1L);
  EXPECT_TRUE(m.eval(BigReal(1L, P)) == -1L);
  EXPECT_TRUE(m.eval(BigReal(-1L, P)) == -1L);
  EXPECT_THROW(m.eval(big("1.0001")), DomainError);
}

TEST(Map, StandardFamilyConstants) {
  auto m = family("2", "1.5");
  EXPECT_TRUE(m.a0() == -1L);
  EXPECT_TRUE(m.b0() == 1L);
  EXPECT_TRUE(m.k0() == 1L);
  EXPECT_TRUE(m.t_max() == 2L);
  EXPECT_LE(abs(m.eps0() - BigReal(1L, P) / 3L), ulp(BigReal(1L, P)));
  EXPECT_LE(abs(m.eval_branch(1, m.eps0()) - 1L), ulp(BigReal(1L, P)) * 2L);
}

TEST(Map, BranchExamples) {
  auto m = family("2", "2");
  EXPECT_TRUE(m.eps0().is_zero());
  EXPECT_THROW(m.eval_branch(1, big("0.25")), BranchDomainError);
  EXPECT_TRUE(m.eval_branch(1, BigReal(0L, P)) == 1L);
  EXPECT_TRUE(m.eval_branch(2, big("0.5")) == big("0.5"));
  EXPECT_THROW(m.eval_branch(2, big("-0.1")), BranchDomainError);
  EXPECT_THROW(m.eval_branch(3, big("0.1")), DomainError);
}

TEST(Map, DerivativeExamples) {
  auto m = family("2", "2");
  EXPECT_TRUE(m.derivative(big("-0.3")) == 2L);
  EXPECT_TRUE(m.derivative(big("0.5")) == -2L);
  EXPECT_THROW(m.derivative(BigReal(0L, P)), NotDifferentiableError);
  auto m15 = family("1.5", "2");
  EXPECT_LE(abs(m15.derivative(big("0.25")) + big("1.5")), 1e-50);
}

TEST(Map, IterateExamples) {
  auto m = family("2", "2");
  Orbit o = m.iterate(BigReal(0L, P), 3);
  ASSERT_EQ(o.points.size(), 4u);
  EXPECT_TRUE(o.points[0].is_zero());
  EXPECT_TRUE(o.points[1] == 1L);
  EXPECT_TRUE(o.points[2] == -1L);
  EXPECT_TRUE(o.points[3] == -1L);
  EXPECT_EQ(o.word, (BranchWord{2, 2, 1}));

  Orbit none = m.iterate(big("0.3"), 0);
  ASSERT_EQ(none.points.size(), 1u);
  EXPECT_TRUE(none.points[0] == big("0.3"));

  auto m2 = family("2", "1.5");
  Orbit o2 = m2.iterate(BigReal(0L, P), 2);
  EXPECT_TRUE(o2.points[1] == big("0.5"));
  EXPECT_TRUE(o2.points[2] == big("0.125"));
}

TEST(Map, DerivativeAlongOrbit) {
  auto m = family("2", "2");
  EXPECT_TRUE(m.derivative_along_orbit(big("0.5"), 1) == -2L);
  EXPECT_TRUE(m.derivative_along_orbit(big("-0.3"), 1) == m.derivative(big("-0.3")));
  EXPECT_THROW(m.derivative_along_orbit(BigReal(0L, P), 2), NotDifferentiableError);
  // t = 1.5: fixed point 1/3 has multiplier -1
  auto m2 = family("2", "1.5");
  BigReal p = BigReal(1L, P) / 3L;
  EXPECT_LE(abs(m2.eval(p) - p), 1e-50);
  EXPECT_LE(abs(m2.derivative_along_orbit(p, 1) + 1L), 1e-10);
}

TEST(Map, BranchesAgreeWithEvalOnAGrid) {
  for (const char* t : {"1", "1.3", "1.7", "2"}) {
    auto m = family("2.5", t);
    for (long i = -100; i <= 100; ++i) {
      BigReal x = BigReal(i, P) / 100L;
      BigReal y = m.eval(x);
      EXPECT_TRUE(m.in_domain(y)) << "t = " << t << ", x = " << x.to_string(6);
      if (x.sign() < 0) {
        EXPECT_TRUE(m.eval_branch(1, x) == y);
      } else {
        EXPECT_TRUE(m.eval_branch(2, x) == y);
      }
    }
  }
}

TEST(Map, InverseBranches) {
  auto m = family("2", "1.7");
  for (const char* s : {"-0.9", "-0.3", "0.1", "0.6"}) {
    BigReal y = big(s);
    EXPECT_LE(abs(m.eval_branch(1, m.inverse_branch(1, y)) - y), 1e-55);
    EXPECT_LE(abs(m.eval_branch(2, m.inverse_branch(2, y)) - y), 1e-55);
  }
}

TEST(Map, WordMatchesOrbitSigns) {
  auto m = family("2", "1.6443");
  Orbit o = m.iterate(BigReal(0L, P), 64);
  for (std::size_t j = 0; j < o.word.size(); ++j)
    EXPECT_EQ(o.word[j], o.points[j].sign() < 0 ? 1 : 2) << "step " << j;
}

TEST(Map, RightBranchSchwarzianNonPositive) {
  // S f = f'''/f' - 1.5 (f''/f')^2 by central differences
  for (const char* beta : {"1.5", "2", "3"}) {
    auto m = family(beta, "1.8");
    BigReal h = ldexp(BigReal(1L, P), -40);
    for (long i = 1; i <= 24; ++i) {
      BigReal x = BigReal(i, P) / 25L;
      auto f = [&](const BigReal& u) { return m.eval_branch(2, u); };
      BigReal f1 = (f(x + h) - f(x - h)) / (h * 2L);
      BigReal f2 = (f(x + h) - f(x) * 2L + f(x - h)) / (h * h);
      BigReal f3 = (f(x + h * 2L) - f(x + h) * 2L + f(x - h) * 2L - f(x - h * 2L)) / (h * h * h * 2L);
      BigReal S = f3 / f1 - (f2 / f1) * (f2 / f1) * big("1.5");
      EXPECT_LE(S, 1e-6) << "beta " << beta << ", x " << x.to_string(6);
    }
  }
}

TEST(Map, ScaledBranches) {
  AsymmetricMap m(BigReal(2L, P), big("1.3"), big("0.5"), BigReal(4L, P), P);
  EXPECT_TRUE(m.a0() == -2L);
  EXPECT_TRUE(m.b0() == big("0.5"));
  EXPECT_TRUE(m.k0() == 8L);
  EXPECT_LE(abs(m.eval(m.a0()) + 1L), 1e-55);
  EXPECT_LE(abs(m.eval(m.b0()) + 1L), 1e-55);
  EXPECT_LE(abs(m.eval_branch(1, m.eps0()) - m.b0()), 1e-55);
}

TEST(Map, RejectsBadParameters) {
  EXPECT_THROW(family("1", "1.5"), DomainError);
  EXPECT_THROW(family("2", "2.1"), DomainError);
  EXPECT_THROW(family("2", "0.9"), DomainError);
  EXPECT_THROW(AsymmetricMap(BigReal(2L, P), big("1.5"), big("1.5"), BigReal(1L, P), P), DomainError);
}
