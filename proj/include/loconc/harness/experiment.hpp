#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "loconc/bounds.hpp"
#include "loconc/concentration.hpp"
#include "loconc/dist_core.hpp"
#include "loconc/harness/fit.hpp"
#include "loconc/harness/report.hpp"
#include "loconc/json_io.hpp"
#include "loconc/lattice.hpp"
#include "loconc/random.hpp"

namespace loconc {

enum class LhsMethod { automatic, exact, monte_carlo };

struct ArithmeticParams {
  double tol = 1e-4;            // certification tolerance for alpha and the lcd
  std::optional<double> gamma;  // required by rv, thm2, cor4
  std::optional<double> alpha;  // required by rv, thm2, cor4
};

struct ExperimentSpec;

struct ConstantPolicy {
  bool fit = false;
  ConstantSet defaults;                         // used when no per-inequality entry exists
  std::map<std::string, ConstantSet> fixed;     // per-inequality overrides
  std::vector<ExperimentSpec> calibration;      // fit-on-corpus source
};

struct ExperimentSpec {
  std::string id = "experiment";
  std::vector<double> coeffs;
  std::vector<Distribution> laws;  // one (i.i.d.) or one per coefficient
  std::vector<double> lambdas;
  LhsMethod method = LhsMethod::automatic;
  std::size_t count = 1'000'000;
  std::uint64_t seed = 1;
  double delta = 0.05;
  std::size_t atom_cap = kDefaultAtomCap;
  ArithmeticParams arith;
  double tau = 1.0;
  std::vector<std::string> bounds;
  ConstantPolicy constants;
  unsigned threads = 0;  // 0: hardware concurrency

  SumSpec sum() const { return SumSpec(coeffs, laws); }

  void validate() const {
    require(!coeffs.empty(), "experiment: coefficients required");
    require(!laws.empty(), "experiment: distribution required");
    require(!lambdas.empty(), "experiment: lambda grid required");
    for (double l : lambdas) require(l > 0.0 && std::isfinite(l), "experiment: lambda grid must be positive");
    require(count >= 1000, "experiment: count must be >= 1000");
    require(delta > 0.0 && delta < 1.0, "experiment: delta must lie in (0,1)");
    require(tau > 0.0 && std::isfinite(tau), "experiment: tau must be positive");
    require(arith.tol > 0.0, "experiment: arithmetic tolerance must be positive");
    if (arith.gamma) require(*arith.gamma > 0.0 && *arith.gamma < 1.0, "experiment: gamma must lie in (0,1)");
    if (arith.alpha) require(*arith.alpha > 0.0, "experiment: alpha must be positive");
    for (const auto& b : bounds) {
      require(known_inequality(b), "experiment: unknown inequality id '" + b + "'");
      if (b == "rv" || b == "thm2" || b == "cor4")
        require(arith.gamma && arith.alpha, "experiment: " + b + " needs arithmetic gamma and alpha");
    }
    if (!bounds.empty()) require(laws.size() == 1, "experiment: bounds need i.i.d. summands");
    require(id.find_first_of(",\n\r\"") == std::string::npos, "experiment: id must not contain , or quotes");
    (void)sum();  // the constructor checks coefficient and law counts
  }
};

inline ExperimentSpec experiment_from_json(const Json& j) {
  const char* who = "experiment";
  if (!j.is_object()) throw InputError("experiment: expected an object");
  ExperimentSpec s;
  if (j.contains("id")) s.id = j.at("id").get<std::string>();
  if (j.contains("dist")) {
    s.laws.push_back(distribution_from_json(j.at("dist")));
  } else if (j.contains("dists")) {
    for (const Json& d : j.at("dists")) s.laws.push_back(distribution_from_json(d));
  } else {
    throw InputError("experiment: need 'dist' or 'dists'");
  }
  s.coeffs = coeffs_from_json(detail::field(j, "coeffs", who));
  s.lambdas = detail::numbers(detail::field(j, "lambdas", who), who);
  if (j.contains("method")) {
    const std::string m = j.at("method").get<std::string>();
    if (m == "exact") {
      s.method = LhsMethod::exact;
    } else if (m == "mc") {
      s.method = LhsMethod::monte_carlo;
    } else if (m == "auto") {
      s.method = LhsMethod::automatic;
    } else {
      throw InputError("experiment: method must be exact, mc or auto");
    }
  }
  const double count = detail::number_or(j, "count", static_cast<double>(s.count), who);
  require(count >= 1000 && count <= 1e10 && count == std::floor(count), "experiment: bad count");
  s.count = static_cast<std::size_t>(count);
  const double seed = detail::number_or(j, "seed", static_cast<double>(s.seed), who);
  require(seed >= 0 && seed == std::floor(seed) && seed < 9.007e15, "experiment: bad seed");
  s.seed = static_cast<std::uint64_t>(seed);
  s.delta = detail::number_or(j, "delta", s.delta, who);
  s.tau = detail::number_or(j, "tau", s.tau, who);
  if (j.contains("arith")) {
    const Json& a = j.at("arith");
    s.arith.tol = detail::number_or(a, "tol", s.arith.tol, who);
    if (a.contains("gamma")) s.arith.gamma = detail::number(a, "gamma", who);
    if (a.contains("alpha")) s.arith.alpha = detail::number(a, "alpha", who);
  }
  if (j.contains("bounds")) {
    for (const Json& b : j.at("bounds")) s.bounds.push_back(b.get<std::string>());
  }
  if (j.contains("constants")) {
    const Json& c = j.at("constants");
    const std::string policy = c.value("policy", "fixed");
    if (policy == "fit") {
      s.constants.fit = true;
      const Json& cal = detail::field(c, "calibration", who);
      if (!cal.is_array() || cal.empty()) throw InputError("experiment: calibration must be a non-empty array");
      for (const Json& e : cal) s.constants.calibration.push_back(experiment_from_json(e));
    } else if (policy != "fixed") {
      throw InputError("experiment: constant policy must be fixed or fit");
    }
    if (c.contains("values")) s.constants.defaults = constants_from_json(c.at("values"));
    if (c.contains("per_inequality")) {
      for (const auto& [name, v] : c.at("per_inequality").items()) s.constants.fixed[name] = constants_from_json(v);
    }
  }
  s.validate();
  return s;
}

namespace detail {

// Runs f(i) for i < n on up to `threads` workers; every slot is written by
// exactly one call, so results do not depend on scheduling.
template <class F>
void parallel_for_index(std::size_t n, unsigned threads, F&& f) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(n, std::max(1u, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
          try {
            f(i);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

// Q(F, lambda) of the summand law: exact when discrete, else from samples.
inline double summand_q(const Distribution& F, double lambda, std::size_t count, std::uint64_t seed) {
  if (auto d = to_discrete(F)) return q_exact(*d, lambda).value;
  std::vector<double> xs = sample(F, count, seed);
  std::sort(xs.begin(), xs.end());
  return max_window_mass(xs, lambda, [](std::size_t) { return 1.0; }) / static_cast<double>(count);
}

// M(tau) = E min(X~^2 / tau^2, 1); sampled symmetrization for sampler laws.
inline double summand_m(const Distribution& F, double tau, std::size_t count, std::uint64_t seed) {
  if (auto d = to_discrete(F)) return m_tau(symmetrize(*d), tau);
  const std::vector<double> x1 = sample(F, count, seed ^ 0x5bd1e995u);
  const std::vector<double> x2 = sample(F, count, seed ^ 0x1b873593u);
  double s = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double z = (x1[i] - x2[i]) / tau;
    s += std::min(z * z, 1.0);
  }
  return s / static_cast<double>(count);
}

}  // namespace detail

// LHS estimates for every lambda of the grid, in grid order.
inline std::vector<ConcentrationEstimate> measure_lhs(const ExperimentSpec& spec, unsigned threads) {
  const SumSpec sum = spec.sum();
  std::vector<ConcentrationEstimate> out;
  if (spec.method != LhsMethod::monte_carlo) {
    try {
      const DiscreteLaw law = exact_convolution(sum, spec.atom_cap);
      for (double l : spec.lambdas) out.push_back(q_exact(law, l));
      return out;
    } catch (const AtomCapExceeded&) {
      if (spec.method == LhsMethod::exact) throw;
    } catch (const UnsupportedVariant&) {
      if (spec.method == LhsMethod::exact) throw;
    }
  }
  std::vector<double> xs = sample_sum(sum, spec.count, spec.seed, threads);
  std::sort(xs.begin(), xs.end());
  for (double l : spec.lambdas) {
    const double hits = detail::max_window_mass(xs, l, [](std::size_t) { return 1.0; });
    out.push_back({l, hits / static_cast<double>(spec.count), EstimateMethod::monte_carlo, spec.count,
                   window_ci_half_width(spec.count, spec.delta), spec.seed});
  }
  return out;
}

namespace detail {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RowContext {
  const ExperimentSpec& spec;
  std::span<const double> a;
  double a_norm;
  double t0;
  double p;  // 1 - Q(F, 2)
  std::map<double, double> M;  // tau -> M(tau), filled before rows run
};

// The certified alpha with dist(ta) >= alpha on [t0, D]; below t0 the range
// is empty and every alpha is admissible.
inline double certified_alpha(const RowContext& c, double D) {
  if (D < c.t0) return std::numeric_limits<double>::infinity();
  return alpha_over_interval(c.a, c.t0, D, c.spec.arith.tol);
}

inline bool condition_4d_holds(const RowContext& c, double D) {
  return check_condition_4d(c.a, D, *c.spec.arith.gamma, *c.spec.arith.alpha, c.spec.arith.tol).holds;
}

// tau and D used by a row of the given inequality at window lambda.
inline std::pair<double, double> row_scales(const std::string& id, double lambda, double tau, double a_inf) {
  if (id == "cor2" || id == "cor4") return {tau, tau / lambda};
  if (id == "esseen") return {lambda / a_inf, 1.0 / a_inf};
  if (id == "thm1" || id == "thm2") return {1.0, 1.0 / lambda};
  return {kNaN, 1.0 / lambda};
}

inline BoundReport make_row(const RowContext& c, const std::string& id, const ConcentrationEstimate& lhs,
                            const ConstantSet& k) {
  BoundReport r;
  r.inequality = id;
  r.lhs = lhs;
  r.constants = k;
  r.a_norm = c.a_norm;
  const auto [tau, D] = row_scales(id, lhs.lambda, c.spec.tau, max_abs(c.a));
  r.D = D;
  r.tau = tau;
  const bool needs_p = id == "fs" || id == "rv";
  const bool given_arith = id == "rv" || id == "thm2" || id == "cor4";
  if (needs_p) r.p = c.p;
  if (!needs_p) r.M = c.M.at(tau);
  if (given_arith) {
    r.gamma = *c.spec.arith.gamma;
    r.alpha = *c.spec.arith.alpha;
    if (!condition_4d_holds(c, D)) return r;  // hypothesis fails: vacuous
  } else if (id == "fs") {
    if (D < c.t0) return r;  // stated only for D >= 1/(2||a||_inf)
    r.alpha = certified_alpha(c, D);
  } else if (id != "esseen") {
    r.alpha = certified_alpha(c, D);
  }
  BoundReport shape = r;
  shape.rhs = BoundRhs::of(0.0, 0.0);  // non-vacuous marker for evaluation
  r.rhs = evaluate_rhs(shape, k);
  return r;
}

inline ConstantSet constants_for(const ConstantPolicy& policy, const std::string& id) {
  const auto it = policy.fixed.find(id);
  return it == policy.fixed.end() ? policy.defaults : it->second;
}

}  // namespace detail

// Measures the LHS at each lambda and evaluates every requested inequality.
// Rows come out in lambda-major, bound-list order regardless of threading.
inline Report run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const unsigned threads = spec.threads ? spec.threads : default_threads();
  Report report;
  report.id = spec.id;

  std::map<std::string, ConstantSet> constants;
  for (const auto& b : spec.bounds) constants[b] = detail::constants_for(spec.constants, b);
  if (spec.constants.fit) {
    std::vector<ReportRow> calibration_rows;
    for (ExperimentSpec cal : spec.constants.calibration) {
      cal.bounds = spec.bounds;
      cal.constants = ConstantPolicy{};
      cal.constants.defaults = spec.constants.defaults;
      cal.threads = spec.threads;
      const Report r = run_experiment(cal);
      calibration_rows.insert(calibration_rows.end(), r.rows.begin(), r.rows.end());
    }
    for (const auto& b : spec.bounds) {
      const FitResult fit = fit_constants(calibration_rows, b);
      if (fit.feasible) {
        constants[b] = fit.constants;
      } else {
        report.notes.push_back("fit failed: " + fit.message);
      }
    }
  }
  report.constants = constants;

  const std::vector<ConcentrationEstimate> lhs = measure_lhs(spec, threads);
  if (spec.bounds.empty()) {
    for (const auto& e : lhs) {
      ReportRow row;
      row.experiment_id = spec.id;
      row.bound.inequality = "none";
      row.bound.lhs = e;
      report.rows.push_back(std::move(row));
    }
    return report;
  }

  const SumSpec sum = spec.sum();
  detail::RowContext ctx{spec, sum.coeffs(), sum.norm(), identity_regime_end(sum.coeffs()), detail::kNaN, {}};
  const Distribution& F = sum.law(0);
  const bool any_p = std::any_of(spec.bounds.begin(), spec.bounds.end(),
                                 [](const std::string& b) { return b == "fs" || b == "rv"; });
  if (any_p) ctx.p = std::clamp(1.0 - detail::summand_q(F, 2.0, spec.count, spec.seed), 0.0, 1.0);
  for (const auto& b : spec.bounds) {
    if (b == "fs" || b == "rv") continue;
    for (double l : spec.lambdas) {
      const double tau = detail::row_scales(b, l, spec.tau, sum.inf_norm()).first;
      if (!ctx.M.contains(tau)) ctx.M[tau] = detail::summand_m(F, tau, spec.count, spec.seed);
    }
  }

  const std::size_t nb = spec.bounds.size();
  std::vector<ReportRow> rows(spec.lambdas.size() * nb);
  detail::parallel_for_index(rows.size(), threads, [&](std::size_t i) {
    const std::string& b = spec.bounds[i % nb];
    rows[i].experiment_id = spec.id;
    rows[i].bound = detail::make_row(ctx, b, lhs[i / nb], constants.at(b));
  });
  report.rows = std::move(rows);
  return report;
}

}  // namespace loconc
