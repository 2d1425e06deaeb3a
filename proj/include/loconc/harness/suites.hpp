#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "loconc/bounds.hpp"
#include "loconc/charfun.hpp"
#include "loconc/concentration.hpp"
#include "loconc/dist_core.hpp"
#include "loconc/harness/experiment.hpp"
#include "loconc/harness/fit.hpp"
#include "loconc/harness/report.hpp"
#include "loconc/lattice.hpp"

namespace loconc {

struct SuiteRow {
  std::string case_id;
  std::string metric;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

struct SuiteResult {
  std::string name;
  bool checks_pass = true;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::string summary;
  std::vector<SuiteRow> rows;

  bool pass() const { return checks_pass && seconds < time_limit; }
  void add(std::string case_id, std::string metric, double value, double threshold, bool ok) {
    rows.push_back({std::move(case_id), std::move(metric), value, threshold, ok});
    checks_pass = checks_pass && ok;
  }
};

inline void write_suite_csv(std::ostream& out, const SuiteResult& r) {
  out << "suite,case,metric,value,threshold,pass\n";
  for (const auto& row : r.rows)
    out << r.name << ',' << row.case_id << ',' << row.metric << ',' << detail::format_double(row.value) << ','
        << detail::format_double(row.threshold) << ',' << (row.pass ? "true" : "false") << '\n';
  out << r.name << ",all,seconds," << detail::format_double(r.seconds) << ','
      << detail::format_double(r.time_limit) << ',' << (r.seconds < r.time_limit ? "true" : "false") << '\n';
}

namespace suites {

using Clock = std::chrono::steady_clock;

template <class Body>
SuiteResult timed(std::string name, double limit, Body&& body) {
  SuiteResult r;
  r.name = std::move(name);
  r.time_limit = limit;
  const auto start = Clock::now();
  body(r);
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

inline DiscreteLaw random_law(std::mt19937_64& rng, int atoms, double spread, bool equal_weights = false) {
  std::uniform_real_distribution<double> pos(-spread, spread);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::vector<double> x(static_cast<std::size_t>(atoms)), p(x.size());
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = pos(rng);
    p[i] = equal_weights ? 1.0 : w(rng);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return make_discrete(x, p);
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> a(n);
  for (double& v : a) v = u(rng);
  return a;
}

inline std::string fmt(double x) { return detail::format_double(x); }

// |lattice_dist(a, t) - t ||a||| on the identity regime.
inline SuiteResult eq4s() {
  return timed("eq4s", 1.0, [](SuiteResult& r) {
    std::mt19937_64 rng(4001);
    std::uniform_int_distribution<int> nd(1, 50);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto a = random_vector(rng, static_cast<std::size_t>(nd(rng)), -10.0, 10.0);
      const double t0 = identity_regime_end(a);
      const double t = std::uniform_real_distribution<double>(-t0, t0)(rng);
      const double err = std::abs(lattice_dist(a, t) - std::abs(t) * euclidean_norm(a));
      worst = std::max(worst, err);
      if (err > 1e-9) r.add("case" + std::to_string(i), "abs_error", err, 1e-9, false);
    }
    r.add("all", "max_abs_error", worst, 1e-9, worst <= 1e-9);
    r.summary = "max |dist - t||a||| = " + fmt(worst) + " over 1000 pairs";
  });
}

struct EsseenCase {
  std::string id;
  SumSpec spec;
  DiscreteLaw law;  // summand law, kept for symmetrization
};

inline std::vector<EsseenCase> esseen_corpus(bool holdout) {
  std::vector<EsseenCase> out;
  std::mt19937_64 rng(holdout ? 4202 : 4201);
  for (int n = 1; n <= 10; ++n) {
    const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
    const std::string tag = "n" + std::to_string(n);
    if (holdout) {
      const DiscreteLaw u5 = random_law(rng, 5, 2.0, true);
      out.push_back({"uniform5_" + tag, SumSpec(ones, u5), u5});
      continue;
    }
    const DiscreteLaw rad = make_discrete({-1.0, 1.0}, {0.5, 0.5});
    const DiscreteLaw ber = make_discrete({0.0, 1.0}, {0.7, 0.3});
    const DiscreteLaw r3 = random_law(rng, 3, 2.0);
    out.push_back({"rademacher_" + tag, SumSpec(ones, rad), rad});
    out.push_back({"bernoulli03_" + tag, SumSpec(ones, ber), ber});
    out.push_back({"random3_" + tag, SumSpec(ones, r3), r3});
  }
  return out;
}

inline constexpr std::array<double, 3> kEsseenLambdas{0.5, 1.0, 2.0};

// Sandwich esseen_lower <= C_low q and q <= C_up esseen_upper, fitted on the
// calibration families, checked on the holdout family with 1.5x slack.
inline SuiteResult esseen_sandwich() {
  return timed("esseen", 30.0, [](SuiteResult& r) {
    double C_low = 0.0, C_up = 0.0;
    bool ordered = true;
    struct Triple {
      std::string id;
      double q, lo, up;
    };
    const auto measure = [&](const std::vector<EsseenCase>& corpus) {
      std::vector<Triple> out;
      for (const auto& c : corpus) {
        const DiscreteLaw conv = exact_convolution(c.spec);
        for (double l : kEsseenLambdas) {
          out.push_back({c.id + "_l" + fmt(l), q_exact(conv, l).value, esseen_lower(c.spec, l),
                         esseen_upper(c.spec, l)});
        }
      }
      return out;
    };
    for (const auto& t : measure(esseen_corpus(false))) {
      const bool ok = t.lo <= t.up;
      ordered = ordered && ok;
      if (!ok) r.add(t.id, "lower_minus_upper", t.lo - t.up, 0.0, false);
      C_low = std::max(C_low, t.lo / t.q);
      C_up = std::max(C_up, t.q / t.up);
    }
    const bool finite = std::isfinite(C_low) && std::isfinite(C_up) && C_low > 0.0 && C_up > 0.0;
    r.add("calibration", "C_low", C_low, std::numeric_limits<double>::infinity(), finite);
    r.add("calibration", "C_up", C_up, std::numeric_limits<double>::infinity(), finite);
    std::size_t holdout_violations = 0;
    for (const auto& t : measure(esseen_corpus(true))) {
      const bool ok = t.lo <= t.up && t.lo <= 1.5 * C_low * t.q && t.q <= 1.5 * C_up * t.up;
      if (!ok) {
        ++holdout_violations;
        r.add(t.id, "holdout_ratio_low", t.lo / t.q, 1.5 * C_low, false);
      }
    }
    r.add("holdout", "violations", static_cast<double>(holdout_violations), 0.0, holdout_violations == 0);
    r.summary = "C_low = " + fmt(C_low) + ", C_up = " + fmt(C_up) + ", lower<=upper " +
                (ordered ? "everywhere" : "VIOLATED") + ", holdout violations " +
                std::to_string(holdout_violations);
  });
}

// q_exact(G^n, lambda) / esseen_symmetric(G^n, lambda) over the symmetrized corpus.
inline SuiteResult esseen_band() {
  return timed("esseen_band", 30.0, [](SuiteResult& r) {
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (const auto& c : esseen_corpus(false)) {
      const DiscreteLaw G = symmetrize(c.law);
      const SumSpec spec(std::vector<double>(c.spec.coeffs().begin(), c.spec.coeffs().end()), G);
      const DiscreteLaw conv = exact_convolution(spec);
      for (double l : kEsseenLambdas) {
        const double ratio = q_exact(conv, l).value / esseen_symmetric(spec, l);
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
      }
    }
    r.add("band", "r_min", rmin, 0.1, rmin > 0.1);
    r.add("band", "r_max", rmax, 10.0, rmax < 10.0);
    r.summary = "ratio band [" + fmt(rmin) + ", " + fmt(rmax) + "]";
  });
}

// beta >= M(1) / 4 on random symmetric laws.
inline SuiteResult beta() {
  return timed("beta", 1.0, [](SuiteResult& r) {
    std::mt19937_64 rng(4004);
    std::uniform_int_distribution<int> atoms(1, 8);
    std::uniform_real_distribution<double> logscale(-3.0, 1.5);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
      // even cases symmetrize, odd cases mirror a law directly
      const DiscreteLaw G = [&] {
        const int k = atoms(rng);
        const DiscreteLaw base = random_law(rng, k, std::pow(10.0, logscale(rng)));
        if (i % 2 == 0) return symmetrize(base);
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t j = 0; j < base.size(); ++j) {
          pairs.emplace_back(base.atoms()[j], 0.5 * base.probs()[j]);
          pairs.emplace_back(-base.atoms()[j], 0.5 * base.probs()[j]);
        }
        return DiscreteLaw::from_pairs(std::move(pairs));
      }();
      const double b = dyadic_profile(G).beta;
      const double m = m_tau(G, 1.0);
      const bool ok = b >= m / 4.0;
      worst = std::min(worst, b - m / 4.0);
      if (!ok) r.add("law" + std::to_string(i), "beta_minus_quarter_M", b - m / 4.0, 0.0, false);
    }
    r.add("all", "min_beta_minus_quarter_M", worst, 0.0, worst >= 0.0);
    r.summary = "min(beta - M(1)/4) = " + fmt(worst) + " over 100 symmetric laws";
  });
}

// Q(Rademacher^{*n}, 1) against n: slope of the log-log fit and one constant
// for the bound Q <= C / sqrt(n M(1)).
inline SuiteResult decay() {
  return timed("decay", 10.0, [](SuiteResult& r) {
    std::vector<double> xs, ys;
    std::vector<ReportRow> rows;
    for (int n : {4, 8, 16, 32, 64}) {
      ExperimentSpec s;
      s.id = "rademacher_n" + std::to_string(n);
      s.coeffs.assign(static_cast<std::size_t>(n), 1.0);
      s.laws = {Rademacher{}};
      s.lambdas = {1.0};
      s.method = LhsMethod::exact;
      s.bounds = {"esseen"};
      const Report rep = run_experiment(s);
      const double q = rep.rows.front().bound.lhs.value;
      r.add(s.id, "Q", q, 1.0, q > 0.0);
      xs.push_back(std::log(n));
      ys.push_back(std::log(q));
      rows.insert(rows.end(), rep.rows.begin(), rep.rows.end());
    }
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    r.add("fit", "slope", slope, -0.5, std::abs(slope + 0.5) <= 0.05);
    const FitResult fit = fit_constants(rows, "esseen");
    const auto fitted = fit.feasible ? with_constants(rows, fit.constants) : rows;
    std::size_t violations = 0;
    for (const auto& row : fitted) violations += row.bound.satisfied() ? 0 : 1;
    r.add("fit", "C", fit.constants.C_front, std::numeric_limits<double>::infinity(),
          fit.feasible && std::isfinite(fit.constants.C_front) && violations == 0);
    r.summary = "slope " + fmt(slope) + ", fitted C = " + fmt(fit.constants.C_front) + " with " +
                std::to_string(violations) + " violations";
  });
}

inline std::vector<double> golden_vector() {
  const double inv_phi = 2.0 / (1.0 + std::sqrt(5.0));
  auto a = arithmetic_coeffs(30, 1.0, inv_phi);
  const double m = max_abs(a);
  for (double& x : a) x /= m;
  return a;
}

// Calibration vectors 1 + (k-1) s with s the fractional part of sqrt(m),
// m not a square, max-normalized like the holdout vector.
inline std::vector<std::vector<double>> irrational_spacing_corpus() {
  std::mt19937_64 rng(4006);
  std::uniform_int_distribution<int> md(2, 400), nd(20, 40);
  std::vector<std::vector<double>> out;
  while (out.size() < 20) {
    const int m = md(rng);
    const double s = std::sqrt(static_cast<double>(m)) - std::floor(std::sqrt(static_cast<double>(m)));
    if (s < 0.1) continue;  // also rejects perfect squares
    auto a = arithmetic_coeffs(nd(rng), 1.0, s);
    const double mx = max_abs(a);
    for (double& x : a) x /= mx;
    out.push_back(std::move(a));
  }
  return out;
}

inline ExperimentSpec thm1_experiment(std::string id, std::vector<double> a, std::uint64_t seed) {
  ExperimentSpec s;
  s.id = std::move(id);
  s.coeffs = std::move(a);
  s.laws = {Rademacher{}};
  s.lambdas = {1.0};
  s.method = LhsMethod::monte_carlo;
  s.count = 1'000'000;
  s.seed = seed;
  s.arith.tol = 1e-4;
  s.bounds = {"thm1"};
  return s;
}

// The M(1) bound on the golden-ratio vector with constants fitted elsewhere.
inline SuiteResult thm1(std::vector<ReportRow>* report_rows = nullptr) {
  return timed("thm1", 60.0, [&](SuiteResult& r) {
    ExperimentSpec holdout = thm1_experiment("golden_n30", golden_vector(), 6001);
    holdout.constants.fit = true;
    std::uint64_t seed = 6100;
    int i = 0;
    for (auto& a : irrational_spacing_corpus())
      holdout.constants.calibration.push_back(thm1_experiment("calib" + std::to_string(i++), std::move(a), seed++));
    const Report rep = run_experiment(holdout);
    for (const auto& note : rep.notes) r.add("fit", note, 0.0, 0.0, false);
    const BoundReport& b = rep.rows.front().bound;
    const double direct_alpha = alpha_over_interval(holdout.coeffs, identity_regime_end(holdout.coeffs), 1.0, 1e-4);
    r.add("golden_n30", "alpha", b.alpha, direct_alpha, b.alpha == direct_alpha);
    r.add("golden_n30", "lhs", b.lhs.value, b.rhs.value.as_double(), b.satisfied() && !b.vacuous());
    r.add("golden_n30", "C_front", b.constants.C_front, 0.0, true);
    r.add("golden_n30", "c_exp", b.constants.c_exp, 0.0, true);

    // p = 0 for Rademacher: the p-form gives nothing while M(1) = 1/2 does.
    const double p = 1.0 - q_exact(Distribution{Rademacher{}}, 2.0).value;
    const double M1 = m_tau(symmetrize(Distribution{Rademacher{}}), 1.0);
    const double a_norm = euclidean_norm(holdout.coeffs);
    const bool fs_vacuous = fs_bound(a_norm, 1.0, b.alpha, p, {}).value.is_infinite();
    const bool thm1_finite = thm1_bound(a_norm, b.alpha, M1, {}).value.is_finite();
    r.add("rademacher", "p", p, 0.0, p == 0.0);
    r.add("rademacher", "M1", M1, 0.5, M1 > 0.0);
    r.add("rademacher", "fs_vacuous_thm1_finite", fs_vacuous && thm1_finite ? 1.0 : 0.0, 1.0,
          fs_vacuous && thm1_finite);
    if (report_rows) *report_rows = rep.rows;
    r.summary = "lhs " + fmt(b.lhs.value) + " <= rhs " + fmt(b.rhs.value.as_double()) + " (C_front " +
                fmt(b.constants.C_front) + ", c " + fmt(b.constants.c_exp) + ", alpha " + fmt(b.alpha) +
                "); fs vacuous at p = 0 while thm1 finite: " + (fs_vacuous && thm1_finite ? "yes" : "no");
  });
}

inline double grid_lcd(const std::vector<double>& a, double gamma, double alpha, double t_max, double step) {
  const double norm = euclidean_norm(a);
  for (std::size_t i = 1;; ++i) {
    const double t = static_cast<double>(i) * step;
    if (t > t_max) return std::numeric_limits<double>::infinity();
    if (rv_margin(a, norm, gamma, alpha, t) <= 0.0) return t;
  }
}

inline SuiteResult lcd() {
  return timed("lcd", 60.0, [](SuiteResult& r) {
    const double d1 = essential_lcd(std::vector<double>{1, 1, 1, 1}, 0.5, 0.2, 1e-6).as_double();
    r.add("ones4", "lcd", d1, 0.9, std::abs(d1 - 0.9) <= 1e-6);
    const double d2 = essential_lcd(std::vector<double>{1.0}, 0.5, 0.4, 1e-6).as_double();
    r.add("one", "lcd", d2, 2.0 / 3.0, std::abs(d2 - 2.0 / 3.0) <= 1e-6);

    std::mt19937_64 rng(4007);
    std::uniform_int_distribution<int> nd(2, 5);
    const double tol = 1e-4, gamma = 0.1, alpha = 0.05, t_max = 5.0;
    std::size_t grid_mismatches = 0;
    for (int i = 0; i < 100; ++i) {
      const auto a = random_vector(rng, static_cast<std::size_t>(nd(rng)), 0.2, 2.0);
      const double d = essential_lcd(a, gamma, alpha, t_max, tol).as_double();
      const double g = grid_lcd(a, gamma, alpha, t_max, tol / 10.0);
      const bool ok = (std::isinf(d) && std::isinf(g)) || std::abs(d - g) <= tol;
      if (!ok) {
        ++grid_mismatches;
        r.add("grid" + std::to_string(i), "lcd_minus_grid", d - g, tol, false);
      }
    }
    r.add("grid", "mismatches", static_cast<double>(grid_mismatches), 0.0, grid_mismatches == 0);

    std::uniform_real_distribution<double> su(0.5, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const auto a = random_vector(rng, static_cast<std::size_t>(nd(rng)), 0.3, 2.0);
      const double s = su(rng);
      std::vector<double> sa(a);
      for (double& x : sa) x *= s;
      const double stol = 1e-7;
      const double d = essential_lcd(a, 0.2, 0.1, 20.0, stol).as_double();
      const double ds = essential_lcd(sa, 0.2, 0.1, 20.0 / s, stol).as_double();
      const double err = (std::isinf(d) && std::isinf(ds)) ? 0.0 : std::abs(ds * s - d);
      const double allowed = stol * (1.0 + s);
      worst = std::max(worst, err / allowed);
      if (err > allowed) r.add("scale" + std::to_string(i), "abs_error", err, allowed, false);
    }
    r.add("scale", "worst_error_over_allowed", worst, 1.0, worst <= 1.0);
    r.summary = "analytic " + fmt(d1) + ", " + fmt(d2) + "; grid mismatches " + std::to_string(grid_mismatches) +
                "; scale covariance worst/allowed " + fmt(worst);
  });
}

inline SuiteResult regularity() {
  return timed("regularity", 1.0, [](SuiteResult& r) {
    std::mt19937_64 rng(4008);
    std::uniform_int_distribution<int> atoms(1, 12);
    std::uniform_real_distribution<double> scale(0.01, 5.0);
    std::size_t violations = 0;
    for (int i = 0; i < 200; ++i) {
      const DiscreteLaw F = random_law(rng, atoms(rng), 3.0);
      const double mu = scale(rng), lambda = scale(rng);
      const double lhs = q_exact(F, mu).value;
      const double rhs = static_cast<double>(regularity_factor(mu, lambda)) * q_exact(F, lambda).value;
      if (!(lhs <= rhs)) {
        ++violations;
        r.add("case" + std::to_string(i), "lhs_minus_rhs", lhs - rhs, 0.0, false);
      }
    }
    r.add("all", "violations", static_cast<double>(violations), 0.0, violations == 0);
    r.summary = std::to_string(violations) + " violations over 200 (F, mu, lambda)";
  });
}

inline SuiteResult bound6() {
  return timed("bound6", 5.0, [](SuiteResult& r) {
    std::mt19937_64 rng(4009);
    std::uniform_int_distribution<int> atoms(1, 10);
    std::uniform_real_distribution<double> td(-30.0, 30.0);
    std::size_t violations = 0;
    for (int i = 0; i < 1000; ++i) {
      const Distribution F = random_law(rng, atoms(rng), 3.0);
      const Bound6Check c = check_bound_6(F, td(rng));
      if (!c.holds) {
        ++violations;
        r.add("case" + std::to_string(i), "lhs_minus_rhs", c.lhs - c.rhs, 0.0, false);
      }
    }
    r.add("bound6", "violations", static_cast<double>(violations), 0.0, violations == 0);

    std::vector<double> ts;
    for (int i = 0; i <= 2000; ++i) ts.push_back(i / 2000.0);
    std::uniform_int_distribution<int> nd(1, 20);
    double feasible = std::numeric_limits<double>::infinity();
    std::size_t envelope_failures = 0;
    for (int i = 0; i < 20; ++i) {
      const auto a = random_vector(rng, static_cast<std::size_t>(nd(rng)), -3.0, 3.0);
      for (double t : ts) envelope_failures += check_bounds_7(a, t, 0.1).holds ? 0 : 1;
      feasible = std::min(feasible, max_feasible_c_probe(a, ts));
    }
    r.add("envelopes", "failures_at_c0.1", static_cast<double>(envelope_failures), 0.0, envelope_failures == 0);
    r.add("envelopes", "feasible_c_probe", feasible, 0.1, feasible >= 0.1);
    r.summary = std::to_string(violations) + " violations of |F^(t)| <= exp(-(1 - |F^(t)|^2)/2) over 1000 cases; envelopes at c=0.1 " +
                (envelope_failures == 0 ? "hold" : "FAIL") + ", largest feasible c on the grid " + fmt(feasible);
  });
}

inline SuiteResult quadrature() {
  return timed("quadrature", 1.0, [](SuiteResult& r) {
    const SumSpec point({1.0}, Distribution{PointMass{0.0}});
    const SumSpec rad({1.0}, Distribution{Rademacher{}});
    const auto check = [&](const char* id, const char* metric, double got, double want) {
      r.add(id, metric, got, want, std::abs(got - want) <= 1e-8);
    };
    check("pointmass", "upper", esseen_upper(point, 1.0), 1.0);
    check("pointmass", "lower", esseen_lower(point, 1.0), 1.0);
    check("rademacher", "upper", esseen_upper(rad, 1.0), std::sin(1.0));
    check("rademacher", "lower", esseen_lower(rad, 1.0), 0.5 + std::sin(2.0) / 4.0);
    double worst = 0.0;
    for (const auto& row : r.rows) worst = std::max(worst, std::abs(row.value - row.threshold));
    r.summary = "max abs error " + fmt(worst);
  });
}

}  // namespace suites

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"eq4s",       "esseen", "beta",   "decay",     "lcd",
                                              "regularity", "thm1",   "bound6", "quadrature"};
  return names;
}

// Runs one named suite. The esseen suite covers both the sandwich and the
// symmetric-integral band.
inline std::vector<SuiteResult> run_suite(const std::string& name) {
  if (name == "eq4s") return {suites::eq4s()};
  if (name == "esseen") return {suites::esseen_sandwich(), suites::esseen_band()};
  if (name == "beta") return {suites::beta()};
  if (name == "decay") return {suites::decay()};
  if (name == "lcd") return {suites::lcd()};
  if (name == "regularity") return {suites::regularity()};
  if (name == "thm1") return {suites::thm1()};
  if (name == "bound6") return {suites::bound6()};
  if (name == "quadrature") return {suites::quadrature()};
  throw InputError("unknown suite '" + name + "'");
}

// Exit status 0 when every part passes, 1 otherwise; the CSV lists each check.
inline int verify_suite(const std::string& name, const std::string& out_path) {
  const auto results = run_suite(name);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("cannot open output file " + out_path);
  bool pass = true;
  bool header = true;
  for (const auto& r : results) {
    std::ostringstream ss;
    write_suite_csv(ss, r);
    std::string text = ss.str();
    if (!header) text = text.substr(text.find('\n') + 1);
    out << text;
    header = false;
    pass = pass && r.pass();
  }
  return pass ? 0 : 1;
}

}  // namespace loconc
