#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "loconc/loconc.hpp"

using namespace loconc;

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

Json estimate_json(const ConcentrationEstimate& e) {
  return {{"lambda", e.lambda},          {"value", e.value},
          {"method", to_string(e.method)}, {"sample_count", e.sample_count},
          {"ci_half_width", e.ci_half_width}, {"seed", e.seed}};
}

Json rhs_json(const std::string& which, const BoundRhs& r) {
  return {{"which", which},
          {"rhs", extended_to_json(r.value)},
          {"algebraic", r.value.is_finite() ? Json(r.algebraic) : Json("inf")},
          {"exponential", r.exponential},
          {"vacuous", r.value.is_infinite()}};
}

Json bound_json(const Json& params) {
  const char* who = "bound";
  const Json& w = detail::field(params, "which", who);
  if (!w.is_string()) throw InputError("bound: 'which' must be a string");
  const std::string which = w.get<std::string>();
  const ConstantSet k = params.contains("constants") ? constants_from_json(params.at("constants")) : ConstantSet{};
  const auto num = [&](const char* key) { return detail::number(params, key, who); };

  if (which == "kr" || which == "esseen_prop") {
    const auto lk = detail::numbers(detail::field(params, "lambda_k", who), who);
    const double C = detail::number_or(params, "C", 1.0, who);
    const ExtendedReal v =
        which == "kr" ? kr_bound(num("lambda"), lk, detail::numbers(detail::field(params, "q_k", who), who), C)
                      : esseen_prop_bound(num("lambda"), lk, detail::numbers(detail::field(params, "M_k", who), who), C);
    return {{"which", which}, {"rhs", extended_to_json(v)}, {"vacuous", v.is_infinite()}};
  }
  if (which == "fs") return rhs_json(which, fs_bound(num("a_norm"), num("D"), num("alpha"), num("p"), k));
  if (which == "rv")
    return rhs_json(which, rv_bound(num("a_norm"), num("D"), num("gamma"), num("alpha"), num("p"), k));
  if (which == "thm1") return rhs_json(which, thm1_bound(num("a_norm"), num("alpha"), num("M1"), k));
  if (which == "thm2") return rhs_json(which, thm2_bound(num("a_norm"), num("gamma"), num("alpha"), num("M1"), k));
  if (which == "cor2" || which == "cor4") {
    CorollaryInputs in;
    in.a_norm = num("a_norm");
    in.D = num("D");
    in.tau = detail::number_or(params, "tau", 1.0, who);
    in.alpha = num("alpha");
    in.M_tau = params.contains("M_tau") ? num("M_tau") : num("M1");
    if (params.contains("a_inf")) in.a_inf = num("a_inf");
    if (which == "cor4") in.gamma = num("gamma");
    const CorollaryBound c = corollary_bound(in, k);
    Json out = rhs_json(which, c.rhs);
    out["lambda"] = c.lambda;
    return out;
  }
  if (which == "esseen") {
    // Q(F_a, tau ||a||_inf) against ||a||_inf / (||a|| sqrt M(tau))
    BoundReport row;
    row.inequality = "esseen";
    row.a_norm = num("a_norm");
    row.D = 1.0 / num("a_inf");
    row.M = params.contains("M_tau") ? num("M_tau") : num("M1");
    require(row.a_norm > 0.0 && row.D > 0.0 && row.M >= 0.0 && row.M <= 1.0, "bound: invalid esseen inputs");
    row.rhs = BoundRhs::of(0.0, 0.0);
    return rhs_json(which, evaluate_rhs(row, k));
  }
  throw InputError("bound: unknown inequality '" + which + "'");
}

int run_main(int argc, char** argv) {
  CLI::App app{"Concentration functions, Esseen bounds and arithmetic structure of weighted sums"};
  app.require_subcommand(1);

  std::string dist, coeffs, params, spec_path, out_path, suite;
  std::string method = "exact";
  double lambda = 1.0, gamma = 0.5, alpha = 0.1, tol = 1e-6, t_lo = 0.0, t_hi = 1.0, delta = 0.05;
  std::optional<double> t_max;
  std::size_t count = 1'000'000;
  std::uint64_t seed = 1;
  unsigned threads = 0;

  auto* q = app.add_subcommand("q", "concentration function Q(F_a, lambda)");
  q->add_option("--dist", dist, "summand distribution JSON (inline or file)")->required();
  q->add_option("--coeffs", coeffs, "coefficient JSON (inline or file)")->required();
  q->add_option("--lambda", lambda, "window length")->required();
  q->add_option("--method", method, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  q->add_option("--count", count, "Monte Carlo sample count");
  q->add_option("--seed", seed, "Monte Carlo seed");
  q->add_option("--delta", delta, "confidence parameter of the reported interval");
  q->add_option("--threads", threads, "sampling threads (0: all cores)");

  auto* lcd = app.add_subcommand("lcd", "essential least common denominator");
  lcd->add_option("--coeffs", coeffs, "coefficient JSON")->required();
  lcd->add_option("--gamma", gamma, "gamma in (0,1)")->required();
  lcd->add_option("--alpha", alpha, "alpha > 0")->required();
  lcd->add_option("--tmax", t_max, "search horizon (default 1e3 ||a||_inf / alpha)");
  lcd->add_option("--tol", tol, "certification tolerance");

  auto* al = app.add_subcommand("alpha", "certified infimum of the lattice distance on [tlo, thi]");
  al->add_option("--coeffs", coeffs, "coefficient JSON")->required();
  al->add_option("--tlo", t_lo, "left end (default 1/(2||a||_inf))");
  al->add_option("--thi", t_hi, "right end")->required();
  al->add_option("--tol", tol, "certification tolerance");

  auto* bd = app.add_subcommand("bound", "evaluate one bound formula");
  bd->add_option("--params", params, "bound parameter JSON")->required();

  auto* run = app.add_subcommand("run", "run an experiment spec and write the report CSV");
  run->add_option("--spec", spec_path, "experiment JSON (inline or file)")->required();
  run->add_option("--out", out_path, "CSV output path")->required();

  auto* verify = app.add_subcommand("verify", "run an acceptance suite");
  verify->add_option("--suite", suite, "suite name")->required();
  verify->add_option("--out", out_path, "CSV output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (q->parsed()) {
    const SumSpec spec(coeffs_from_json(load_json_arg(coeffs)), distribution_from_json(load_json_arg(dist)));
    const ConcentrationEstimate e =
        method == "exact" ? q_exact(exact_convolution(spec), lambda)
                          : q_monte_carlo(spec, lambda, count, seed, delta, threads ? threads : default_threads());
    print(estimate_json(e));
    return 0;
  }
  if (lcd->parsed()) {
    const auto a = coeffs_from_json(load_json_arg(coeffs));
    require(alpha > 0.0, "lcd: alpha must be positive");
    const double horizon = t_max.value_or(default_lcd_horizon(a, alpha));
    const ExtendedReal d = essential_lcd(a, gamma, alpha, horizon, tol);
    print({{"lcd", extended_to_json(d)}, {"gamma", gamma}, {"alpha", alpha}, {"t_max", horizon}, {"tol", tol}});
    return 0;
  }
  if (al->parsed()) {
    const auto a = coeffs_from_json(load_json_arg(coeffs));
    const double lo = al->count("--tlo") ? t_lo : identity_regime_end(a);
    const IntervalInfimum r = alpha_over_interval_detail(a, lo, t_hi, tol);
    print({{"alpha", r.alpha},
           {"witness", r.witness},
           {"witness_t", r.witness_t},
           {"lipschitz", r.lipschitz},
           {"t_lo", lo},
           {"t_hi", t_hi}});
    return 0;
  }
  if (bd->parsed()) {
    print(bound_json(load_json_arg(params)));
    return 0;
  }
  if (run->parsed()) {
    const ExperimentSpec spec = experiment_from_json(load_json_arg(spec_path));
    const Report rep = run_experiment(spec);
    write_csv_file(out_path, rep.rows);
    const ReportSummary s = rep.summary();
    Json constants = Json::object();
    for (const auto& [id, k] : rep.constants) constants[id] = constants_to_json(k);
    print({{"id", rep.id},
           {"rows", s.rows},
           {"vacuous", s.vacuous},
           {"violations", s.violations},
           {"max_ratio", s.max_ratio},
           {"constants", constants},
           {"notes", rep.notes}});
    return s.violations == 0 ? 0 : kExitViolation;
  }
  if (verify->parsed()) {
    const int status = verify_suite(suite, out_path);
    std::cout << "suite " << suite << ": " << (status == 0 ? "pass" : "FAIL") << '\n';
    return status;
  }
  return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
  } catch (const AtomCapExceeded& e) {
    std::cerr << "input error: " << e.what() << " (use --method mc)\n";
  } catch (const HypothesisViolation& e) {
    std::cerr << "input error: " << e.what() << '\n';
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return kExitInput;
}
