#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "loconc/lattice.hpp"
#include "test_support.hpp"

using namespace loconc;

namespace {

// Distance to the nearest of the (2R+1)^n integer points around ta.
double brute_dist(const std::vector<double>& a, double t, int R = 2) {
  const std::size_t n = a.size();
  std::vector<int> off(n, -R);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = t * a[i] - (std::floor(t * a[i]) + off[i]);
      s += d * d;
    }
    best = std::min(best, std::sqrt(s));
    std::size_t k = 0;
    while (k < n && ++off[k] > R) off[k++] = -R;
    if (k == n) break;
  }
  return best;
}

// First grid point with margin <= 0.
double grid_lcd(const std::vector<double>& a, double gamma, double alpha, double t_max, double step) {
  const double norm = euclidean_norm(a);
  for (double t = step; t <= t_max; t += step)
    if (rv_margin(a, norm, gamma, alpha, t) <= 0.0) return t;
  return std::numeric_limits<double>::infinity();
}

double grid_min(const std::vector<double>& a, double lo, double hi, int points) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= points; ++i) m = std::min(m, lattice_dist(a, lo + (hi - lo) * i / points));
  return m;
}

}  // namespace

TEST(LatticeDist, Examples) {
  EXPECT_NEAR(lattice_dist(std::vector<double>{3.0, 4.0}, 0.1), 0.5, 1e-15);
  EXPECT_EQ(lattice_dist(std::vector<double>{3.0, 4.0}, 1.0), 0.0);
  EXPECT_NEAR(lattice_dist(std::vector<double>{1.0, 1.0, 1.0, 1.0}, 0.75), 0.5, 1e-15);
}

TEST(LatticeDist, MatchesEnumeration) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> tdist(-4.0, 4.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = testkit::random_vector(rng, 1 + trial % 4, -3.0, 3.0);
    const double t = tdist(rng);
    EXPECT_NEAR(lattice_dist(a, t), brute_dist(a, t), 1e-12);
  }
}

// Below 1/(2||a||_inf) every coordinate rounds to zero.
TEST(LatticeDist, IdentityRegime) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = testkit::random_vector(rng, 1 + trial % 50, -5.0, 5.0);
    const double t0 = identity_regime_end(a);
    std::uniform_real_distribution<double> u(0.0, t0);
    const double t = u(rng);
    EXPECT_NEAR(lattice_dist(a, t), t * euclidean_norm(a), 1e-12 * (1.0 + t * euclidean_norm(a)));
  }
  EXPECT_THROW(identity_regime_end(std::vector<double>{0.0, 0.0}), InputError);
}

TEST(LipschitzMinimize, QuadraticAndAbsoluteValue) {
  const auto q = lipschitz_minimize([](double x) { return (x - 0.3) * (x - 0.3); }, -1.0, 1.0, 2.6, 1e-9);
  EXPECT_LE(q.lower, 0.0 + 1e-15);
  EXPECT_GE(q.lower, -1e-9);
  EXPECT_NEAR(q.argmin, 0.3, 1e-4);
  const auto v = lipschitz_minimize([](double x) { return std::abs(x - 0.123); }, 0.0, 1.0, 1.0, 1e-10);
  EXPECT_NEAR(v.upper, 0.0, 1e-10);
  EXPECT_LE(v.lower, v.upper);
}

TEST(Alpha, Examples) {
  // (1,1,1,1) on [0.5, 0.75]: dist = 2(1 - t), smallest at 0.75.
  EXPECT_NEAR(alpha_over_interval(std::vector<double>{1, 1, 1, 1}, 0.5, 0.75, 1e-9), 0.5, 1e-8);
  // An integer vector hits the lattice at t = 1.
  EXPECT_NEAR(alpha_over_interval(std::vector<double>{3.0, 4.0}, 0.125, 1.0, 1e-9), 0.0, 1e-8);
  EXPECT_THROW(alpha_over_interval(std::vector<double>{1.0}, 0.0, 1.0, 1e-6), InputError);
  EXPECT_THROW(alpha_over_interval(std::vector<double>{1.0}, 0.5, 1.0, 0.0), InputError);
}

TEST(Alpha, AgreesWithDenseGrid) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = testkit::random_vector(rng, 2 + trial % 5, 0.2, 2.0);
    const double lo = identity_regime_end(a);
    const double hi = lo + 2.0;
    const double tol = 1e-6;
    const auto r = alpha_over_interval_detail(a, lo, hi, tol);
    const double g = grid_min(a, lo, hi, 200000);
    EXPECT_LE(r.alpha, g + 1e-12);
    EXPECT_LE(r.witness - r.alpha, tol * (1 + 1e-9));
    // grid spacing 1e-5 with Lipschitz ||a|| bounds the grid overshoot
    EXPECT_GE(r.alpha, g - euclidean_norm(a) * 1e-5 - tol);
  }
}

// At t0 one coordinate sits at half an integer, so alpha <= ||a|| / (2||a||_inf).
TEST(Alpha, LeftEndpointCap) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = testkit::random_vector(rng, 1 + trial % 20, -3.0, 3.0);
    const double t0 = identity_regime_end(a);
    const double alpha = alpha_over_interval(a, t0, t0 + 1.0, 1e-6);
    EXPECT_LE(alpha, euclidean_norm(a) / (2.0 * max_abs(a)) + 1e-12);
  }
}

TEST(IntervalAdmissibility, Examples) {
  const std::vector<double> ones{1, 1, 1, 1};
  const auto ok = check_condition_3b(ones, 0.75, 0.5, 1e-9);
  EXPECT_TRUE(ok.holds);
  const auto bad = check_condition_3b(ones, 0.75, 0.6, 1e-9);
  EXPECT_FALSE(bad.holds);
  EXPECT_LT(bad.witness_value, 0.6);
  EXPECT_THROW(check_condition_3b(ones, 0.2, 0.1, 1e-9), InputError);
}

TEST(GammaAdmissibility, Examples) {
  const std::vector<double> one{1.0};
  // margin 1 - t - 0.1 on [0.5, 1]: root at 0.9
  EXPECT_TRUE(check_condition_4d(one, 0.85, 0.5, 0.1, 1e-9).holds);
  const auto bad = check_condition_4d(one, 0.95, 0.5, 0.1, 1e-9);
  EXPECT_FALSE(bad.holds);
  EXPECT_LT(bad.witness_value, 0.0);
  // nothing to search below t0
  EXPECT_TRUE(check_condition_4d(std::vector<double>{2.0}, 0.2, 0.5, 0.1, 1e-9).holds);
  EXPECT_THROW(check_condition_4d(one, 0.8, 1.0, 0.1, 1e-9), InputError);
}

TEST(EssentialLcd, AnalyticValues) {
  const std::vector<double> one{1.0};
  const double tol = 1e-9;
  const ExtendedReal d1 = essential_lcd(one, 0.5, 0.1, 10.0, tol);
  ASSERT_TRUE(d1.is_finite());
  EXPECT_GE(d1.value(), 0.9 - 1e-12);
  EXPECT_LE(d1.value(), 0.9 + tol);
  const ExtendedReal d2 = essential_lcd(one, 0.5, 1.0, 10.0, tol);
  ASSERT_TRUE(d2.is_finite());
  EXPECT_GE(d2.value(), 2.0 / 3.0 - 1e-12);
  EXPECT_LE(d2.value(), 2.0 / 3.0 + tol);
}

TEST(EssentialLcd, InfiniteWhenNothingBeforeHorizon) {
  EXPECT_TRUE(essential_lcd(std::vector<double>{1.0}, 0.5, 0.1, 0.8, 1e-9).is_infinite());
  EXPECT_THROW(essential_lcd(std::vector<double>{1.0}, 0.0, 0.1, 1.0, 1e-9), InputError);
  EXPECT_THROW(essential_lcd(std::vector<double>{1.0}, 0.5, 0.0, 1.0, 1e-9), InputError);
}

TEST(EssentialLcd, IrrationalPair) {
  const std::vector<double> a{1.0, std::sqrt(2.0)};
  const double tol = 1e-6;
  const ExtendedReal d = essential_lcd(a, 0.1, 0.01, 10.0, tol);
  const double g = grid_lcd(a, 0.1, 0.01, 10.0, tol / 10);
  if (std::isinf(g)) {
    EXPECT_TRUE(d.is_infinite());
  } else {
    ASSERT_TRUE(d.is_finite());
    EXPECT_NEAR(d.value(), g, tol);
  }
}

// Margin stays positive on (0, lcd - tol]: condition (4d) holds up to there.
TEST(EssentialLcd, ConditionHoldsBelowLcd) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = testkit::random_vector(rng, 2 + trial % 4, 0.3, 2.0);
    const double tol = 1e-5;
    const ExtendedReal d = essential_lcd(a, 0.2, 0.1, 20.0, tol);
    if (d.is_infinite()) continue;
    const double D = d.value() - tol;
    if (D <= identity_regime_end(a)) continue;
    EXPECT_TRUE(check_condition_4d(a, D, 0.2, 0.1, 1e-7).holds);
    EXPECT_LE(rv_margin(a, euclidean_norm(a), 0.2, 0.1, d.value()), 0.0);
  }
}

TEST(EssentialLcd, AgreesWithGridOracle) {
  std::mt19937_64 rng(36);
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = testkit::random_vector(rng, 2 + trial % 4, 0.2, 2.0);
    const double tol = 1e-4;
    const ExtendedReal d = essential_lcd(a, 0.1, 0.05, 5.0, tol);
    const double g = grid_lcd(a, 0.1, 0.05, 5.0, tol / 10);
    const double dv = d.as_double();
    const bool same = (std::isinf(g) && std::isinf(dv)) || std::abs(dv - g) <= tol;
    mismatches += same ? 0 : 1;
  }
  EXPECT_EQ(mismatches, 0);
}

TEST(EssentialLcd, ScaleCovariance) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> su(0.5, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = testkit::random_vector(rng, 2 + trial % 3, 0.3, 2.0);
    const double s = su(rng);
    std::vector<double> sa(a);
    for (double& v : sa) v *= s;
    const double tol = 1e-7;
    const ExtendedReal d = essential_lcd(a, 0.2, 0.1, 20.0, tol);
    const ExtendedReal ds = essential_lcd(sa, 0.2, 0.1, 20.0 / s, tol);
    ASSERT_EQ(d.is_finite(), ds.is_finite());
    if (d.is_finite()) {
      EXPECT_NEAR(ds.value() * s, d.value(), 4 * tol * std::max(1.0, s));
    }
  }
}

// Larger alpha or gamma enlarges the feasible set, so the infimum moves left.
TEST(EssentialLcd, MonotoneInParameters) {
  std::mt19937_64 rng(38);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = testkit::random_vector(rng, 2 + trial % 3, 0.3, 2.0);
    const double tol = 1e-7;
    const double d_small = essential_lcd(a, 0.1, 0.05, 20.0, tol).as_double();
    const double d_alpha = essential_lcd(a, 0.1, 0.2, 20.0, tol).as_double();
    const double d_gamma = essential_lcd(a, 0.4, 0.05, 20.0, tol).as_double();
    EXPECT_LE(d_alpha, d_small + tol);
    EXPECT_LE(d_gamma, d_small + tol);
  }
}

TEST(ArithmeticProfile, Consistent) {
  const std::vector<double> ones{1, 1, 1, 1};
  const auto p = arithmetic_profile(ones, 0.75, 0.5, 0.1, 10.0, 1e-9);
  EXPECT_NEAR(p.alpha_inf, 0.5, 1e-8);
  EXPECT_EQ(p.t_lo, 0.5);
  EXPECT_EQ(p.lipschitz, 2.0);
  ASSERT_TRUE(p.lcd.is_finite());
  // 2(1 - t) <= 0.1 first at t = 0.95
  EXPECT_NEAR(p.lcd.value(), 0.95, 1e-8);
}
