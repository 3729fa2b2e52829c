#include <cmath>

#include <gtest/gtest.h>

#include "asymlab/cascade.hpp"
#include "asymlab/scaling.hpp"

using namespace asymlab;

namespace {

constexpr mpfr_prec_t P = 320;

BigReal big(const char* s) { return BigReal(s, P); }

AsymmetricMap proto(const char* beta = "2") {
  return AsymmetricMap(big(beta), BigReal(1L, P), BigReal(1L, P), BigReal(1L, P), P);
}

BigReal golden() { return (sqrt(BigReal(5L, P)) - 1L) / 2L; }

BigReal rel() { return auto_rel_tol(P); }

}  // namespace

TEST(Phi, LevelZero) {
  auto m = proto();
  EXPECT_TRUE(phi(m, 0, BigReal(1L, P)).is_zero());
  EXPECT_TRUE(phi(m, 0, big("1.375")) == big("0.375"));
}

TEST(Phi, LevelOneRootIsOnePlusLambda) {
  auto m = proto();
  BigReal t1 = golden() + 1L;
  EXPECT_LE(abs(phi(m, 1, t1)), 1e-80);
}

TEST(FindSuperstable, ClosedForms) {
  auto m = proto();
  CascadeRecord r0 = find_superstable(m, 0, BigReal(1L, P), rel());
  EXPECT_TRUE(*r0.t_superstable == 1L);
  CascadeRecord r1 = find_superstable(m, 1, BigReal(1L, P), rel());
  EXPECT_LE(abs(*r1.t_superstable - (golden() + 1L)), 1e-80);
  EXPECT_EQ(r1.condition, CascadeCondition::CriticalPeriodic);
  EXPECT_LE(r1.bracket_width, abs(*r1.t_superstable) * rel() * 2L);
}

TEST(FindSuperstable, LevelTwoFromTheLevelOneRoot) {
  auto m = proto();
  BigReal t1 = *find_superstable(m, 1, BigReal(1L, P), rel()).t_superstable;
  CascadeRecord r2 = find_superstable(m, 2, t1, rel());
  BigReal t2 = *r2.t_superstable;
  EXPECT_GT(t2, t1);
  EXPECT_LT(t2, 2L);
  EXPECT_LE(abs(phi(m, 2, t2)), 1e-60);
  EXPECT_GT(abs(phi(m, 1, t2)), 1e-3);
  EXPECT_GT(abs(phi(m, 0, t2)), 1e-3);
}

TEST(FindFlip, LevelOneIsOneAndAHalf) {
  auto m = proto();
  CascadeRecord u1 = find_flip(m, 1, BigReal(1L, P), golden() + 1L, rel());
  EXPECT_LE(abs(*u1.u - big("1.5")), 1e-60);
  EXPECT_EQ(u1.condition, CascadeCondition::MultiplierMinusOne);
  EXPECT_LE(abs(u1.residual), 1e-50);
  EXPECT_THROW(find_flip(m, 2, BigReal(1L, P), big("1.9"), rel()), DomainError);
}

TEST(FindFlip, CubicCaseAgainstBisectionOracle) {
  // beta = 3: t(1 - p^3) - 1 = p and 3 t p^2 = 1 reduce to 4p^3 + 3p^2 - 1 = 0
  auto m = proto("3");
  auto g = [](const BigReal& p) { return p * p * p * 4L + p * p * 3L - 1L; };
  BigReal p = bisect_root(g, BigReal(0L, P), BigReal(1L, P), ldexp(BigReal(1L, P), -250)).root;
  BigReal t_oracle = BigReal(1L, P) / (p * p * 3L);
  CascadeRecord u1 = find_flip(m, 1, BigReal(1L, P), big("1.99"), rel());
  EXPECT_LE(abs(*u1.u - t_oracle), 1e-60);
  AsymmetricMap at = m.with_t(*u1.u);
  EXPECT_LE(abs(at.eval(p) - p), 1e-60);
  EXPECT_LE(abs(at.derivative(p) + 1L), 1e-60);
}

TEST(FindWindowEnd, LevelZeroIsTheTop) {
  auto m = proto();
  CascadeRecord v0 = find_window_end(m, 0, big("1.9"), BigReal(2L, P), rel());
  EXPECT_TRUE(*v0.v == 2L);
  EXPECT_EQ(v0.condition, CascadeCondition::SurjectiveWindow);
  EXPECT_TRUE(v0.residual.is_zero());
}

TEST(CascadeSolver, OrderingAndNesting) {
  CascadeSolver cs(proto(), rel());
  const int N = 5;
  std::vector<BigReal> u, v;
  for (int n = 1; n <= N; ++n) {
    u.push_back(*cs.flip(n).u);
    v.push_back(*cs.window_end(n, N).v);
  }
  for (int n = 1; n <= N; ++n) {
    const BigReal& un = u[static_cast<std::size_t>(n - 1)];
    const BigReal& vn = v[static_cast<std::size_t>(n - 1)];
    EXPECT_LT(un, vn) << "n = " << n;
    if (n % 2 == 1) {
      BigReal tn = *cs.superstable(n).t_superstable;
      EXPECT_LT(un, tn);
      EXPECT_LT(tn, vn);
      AsymmetricMap at = cs.proto().with_t(tn);
      EXPECT_LE(abs(phi(at, n)), 1e-40);
      for (int j = 0; j < n; ++j) EXPECT_GT(abs(phi(at, j)), 1e-40) << "n = " << n << ", j = " << j;
    }
    if (n > 1) {
      EXPECT_LT(u[static_cast<std::size_t>(n - 2)], un);
      EXPECT_LT(vn, v[static_cast<std::size_t>(n - 2)]);
    }
  }
  EXPECT_TRUE(*cs.window_end(0, N).v == 2L);
  EXPECT_THROW(cs.superstable(2), DomainError);
}

TEST(CascadeSolver, SuperstableGapsShrink) {
  CascadeSolver cs(proto(), rel());
  BigReal prev_gap(P);
  for (int n = 3; n <= 9; n += 2) {
    BigReal gap = *cs.superstable(n).t_superstable - *cs.superstable(n - 2).t_superstable;
    EXPECT_GT(gap, 0L);
    if (n > 3) EXPECT_LT(gap, prev_gap) << "n = " << n;
    prev_gap = gap;
  }
}

TEST(EstimateTstar, LevelOne) {
  CascadeSolver cs(proto(), rel());
  CascadeRecord r = estimate_tstar(cs, 1);
  EXPECT_LE(abs(*r.t_superstable - (golden() + 1L)), 1e-60);
  EXPECT_LE(r.bracket_width, abs(*r.t_superstable) * rel() * 2L);
  EXPECT_THROW(estimate_tstar(cs, 0), DomainError);
}

TEST(Bifurcation, PeriodOneThenTwo) {
  auto s = bifurcation_sweep(2.0, 1.0, 1.0, 1.3, 1.55, 2, 100000, 256);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].detected_period, 1);
  EXPECT_EQ(s[0].attractor_points.size(), 1u);
  EXPECT_EQ(s[1].detected_period, 2);
  EXPECT_NE(s[1].attractor_points[0], s[1].attractor_points[1]);
}

TEST(Bifurcation, PeriodsArePowersOfTwoBelowAccumulation) {
  // with more workers the result is identical
  auto one = bifurcation_sweep(2.0, 1.0, 1.0, 1.3, 1.644, 300, 100000, 256, 1);
  auto two = bifurcation_sweep(2.0, 1.0, 1.0, 1.3, 1.644, 300, 100000, 256, 3);
  int prev = 1;
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].detected_period, two[i].detected_period);
    EXPECT_EQ(one[i].attractor_points, two[i].attractor_points);
    int p = one[i].detected_period;
    if (p == 0) continue;  // within a grid step of a flip
    EXPECT_EQ(p & (p - 1), 0) << "t = " << one[i].t;
    EXPECT_GE(p, prev) << "t = " << one[i].t;
    prev = p;
  }
  EXPECT_GE(prev, 8);
}

TEST(Bifurcation, RejectsBadRanges) {
  EXPECT_THROW(bifurcation_sweep(2.0, 1.0, 1.0, 0.5, 1.5, 10, 10, 8), DomainError);
  EXPECT_THROW(bifurcation_sweep(2.0, 1.0, 1.0, 1.5, 2.5, 10, 10, 8), DomainError);
  EXPECT_THROW(bifurcation_sweep(2.0, 1.0, 1.0, 1.3, 1.5, 0, 10, 8), DomainError);
}
