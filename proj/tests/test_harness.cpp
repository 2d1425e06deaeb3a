#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "loconc/loconc.hpp"

using namespace loconc;

namespace {

ExperimentSpec rademacher_spec(std::vector<double> a, std::vector<double> lambdas, std::vector<std::string> bounds) {
  ExperimentSpec s;
  s.id = "rad";
  s.coeffs = std::move(a);
  s.laws = {Rademacher{}};
  s.lambdas = std::move(lambdas);
  s.bounds = std::move(bounds);
  s.arith.tol = 1e-9;
  return s;
}

}  // namespace

TEST(RunExperiment, FourRademacherScaledRow) {
  ExperimentSpec s = rademacher_spec({1, 1, 1, 1}, {1.0}, {"cor2"});
  s.tau = 0.75;  // D = tau / lambda = 0.75
  const Report rep = run_experiment(s);
  ASSERT_EQ(rep.rows.size(), 1u);
  const BoundReport& b = rep.rows[0].bound;
  EXPECT_EQ(b.lhs.method, EstimateMethod::exact);
  EXPECT_DOUBLE_EQ(b.lhs.value, 0.375);
  EXPECT_DOUBLE_EQ(b.D, 0.75);
  EXPECT_NEAR(b.alpha, 0.5, 1e-8);
  EXPECT_LE(b.alpha, 0.5);
  // M(0.75) of the symmetrized Rademacher law: atoms +-2 saturate
  EXPECT_DOUBLE_EQ(b.M, 0.5);
  EXPECT_FALSE(b.vacuous());
}

TEST(RunExperiment, PointMassRowsAreVacuous) {
  ExperimentSpec s;
  s.id = "pm";
  s.coeffs = {1.0, 2.0, 3.0};
  s.laws = {PointMass{0.5}};
  s.lambdas = {0.5, 1.0};
  s.bounds = {"fs", "thm1", "cor2", "esseen"};
  const Report rep = run_experiment(s);
  ASSERT_EQ(rep.rows.size(), 8u);
  for (const auto& r : rep.rows) {
    EXPECT_EQ(r.bound.lhs.value, 1.0);
    EXPECT_TRUE(r.bound.vacuous()) << r.bound.inequality;
    EXPECT_TRUE(r.bound.satisfied());
  }
  EXPECT_EQ(rep.summary().vacuous, 8u);
  EXPECT_EQ(rep.summary().violations, 0u);
}

TEST(RunExperiment, RowOrderIsLambdaMajor) {
  const Report rep = run_experiment(rademacher_spec({1, 1, 2}, {0.5, 1.0, 2.0}, {"thm1", "esseen"}));
  ASSERT_EQ(rep.rows.size(), 6u);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    EXPECT_EQ(rep.rows[i].bound.inequality, i % 2 == 0 ? "thm1" : "esseen");
    EXPECT_EQ(rep.rows[i].bound.lhs.lambda, (std::vector<double>{0.5, 1.0, 2.0})[i / 2]);
  }
}

TEST(RunExperiment, DeterministicAcrossRunsAndThreads) {
  ExperimentSpec s = rademacher_spec({1.0, 1.3, 1.7, 2.9}, {0.25, 0.5, 1.0}, {"thm1", "cor2", "esseen"});
  s.method = LhsMethod::monte_carlo;
  s.count = 20000;
  s.seed = 99;
  s.threads = 1;
  const std::string one = to_csv(run_experiment(s).rows);
  EXPECT_EQ(one, to_csv(run_experiment(s).rows));
  s.threads = 4;
  EXPECT_EQ(one, to_csv(run_experiment(s).rows));
}

TEST(RunExperiment, GivenArithmeticRoutesCheckGammaAdmissibility) {
  ExperimentSpec s = rademacher_spec({1, 1, 1, 1}, {1.0 / 0.85, 1.0 / 0.95}, {"thm2"});
  s.arith.gamma = 0.5;
  s.arith.alpha = 0.2;
  // lcd of (1,1,1,1) at (0.5, 0.2) is 0.9: D = 0.85 qualifies, D = 0.95 does not
  const Report rep = run_experiment(s);
  ASSERT_EQ(rep.rows.size(), 2u);
  EXPECT_FALSE(rep.rows[0].bound.vacuous());
  EXPECT_TRUE(rep.rows[1].bound.vacuous());
}

TEST(RunExperiment, BelowIdentityRegimeDropsExponentialTerm) {
  const Report rep = run_experiment(rademacher_spec({1, 1, 1, 1}, {4.0}, {"thm1", "fs"}));
  const BoundReport& thm1 = rep.rows[0].bound;
  EXPECT_DOUBLE_EQ(thm1.D, 0.25);
  EXPECT_TRUE(std::isinf(thm1.alpha));
  EXPECT_EQ(thm1.rhs.exponential, 0.0);
  EXPECT_TRUE(rep.rows[1].bound.vacuous());  // fs is stated for D >= 1/(2||a||_inf) only
}

TEST(RunExperiment, ExactPathRespectsAtomCap) {
  ExperimentSpec s = rademacher_spec({1.0, std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0)}, {1.0}, {});
  s.atom_cap = 8;
  s.method = LhsMethod::exact;
  EXPECT_THROW(run_experiment(s), AtomCapExceeded);
  s.method = LhsMethod::automatic;
  s.count = 5000;
  const Report rep = run_experiment(s);
  EXPECT_EQ(rep.rows[0].bound.lhs.method, EstimateMethod::monte_carlo);
  EXPECT_EQ(rep.rows[0].bound.lhs.sample_count, 5000u);
}

// Normal summands: M(1) = E min(Z^2, 1) with Z ~ N(0, 2), by midpoint rule.
TEST(RunExperiment, SamplerLawUsesSampledSymmetrization) {
  ExperimentSpec s;
  s.id = "normal";
  s.coeffs = {1.0, 1.0};
  s.laws = {make_sampler("normal", {0.0, 1.0})};
  s.lambdas = {1.0};
  s.count = 200000;
  s.bounds = {"esseen"};
  const Report rep = run_experiment(s);
  const BoundReport& b = rep.rows[0].bound;
  EXPECT_EQ(b.lhs.method, EstimateMethod::monte_carlo);
  double M = 0.0;
  const int N = 200000;
  const double lim = 12.0, h = 2 * lim / N;
  for (int i = 0; i < N; ++i) {
    const double z = -lim + (i + 0.5) * h;
    M += std::min(z * z, 1.0) * std::exp(-z * z / 4.0) / std::sqrt(4.0 * std::numbers::pi) * h;
  }
  EXPECT_NEAR(b.M, M, 0.01);
  // Q(N(0, 2), 1) = P(|Z| <= 1/2)
  EXPECT_NEAR(b.lhs.value, std::erf(0.5 / 2.0), 0.01);
}

TEST(ExperimentJson, ParsesGeneratorAndPolicy) {
  const Json j = Json::parse(R"({
    "id": "arith", "dist": {"type": "bernoulli", "p": 0.3},
    "coeffs": {"type": "arith", "n": 5, "base": 1, "step": 0.5, "normalize": "max"},
    "lambdas": [1, 2], "method": "exact", "bounds": ["thm1", "rv"],
    "arith": {"tol": 1e-6, "gamma": 0.5, "alpha": 0.1},
    "constants": {"values": {"C_front": 2.0}, "per_inequality": {"rv": {"c_exp": 0.5}}}
  })");
  const ExperimentSpec s = experiment_from_json(j);
  EXPECT_EQ(s.coeffs, (std::vector<double>{1.0 / 3, 1.5 / 3, 2.0 / 3, 2.5 / 3, 1.0}));
  EXPECT_EQ(s.method, LhsMethod::exact);
  EXPECT_EQ(s.constants.defaults.C_front, 2.0);
  EXPECT_EQ(s.constants.fixed.at("rv").c_exp, 0.5);
  const Report rep = run_experiment(s);
  EXPECT_EQ(rep.constants.at("thm1").C_front, 2.0);
  EXPECT_EQ(rep.constants.at("rv").C_front, 1.0);
}

TEST(ExperimentJson, RejectsInvalidSpecs) {
  const auto bad = [](const char* text) { return experiment_from_json(Json::parse(text)); };
  EXPECT_THROW(bad(R"({"dist":{"type":"rademacher"},"coeffs":[1],"lambdas":[0]})"), InputError);
  EXPECT_THROW(bad(R"({"dist":{"type":"rademacher"},"coeffs":[1],"lambdas":[1],"bounds":["nope"]})"), InputError);
  EXPECT_THROW(bad(R"({"dist":{"type":"rademacher"},"coeffs":[1],"lambdas":[1],"bounds":["rv"]})"), InputError);
  EXPECT_THROW(bad(R"({"dist":{"type":"cauchy"},"coeffs":[1],"lambdas":[1]})"), InputError);
  EXPECT_THROW(bad(R"({"coeffs":[1],"lambdas":[1]})"), InputError);
  EXPECT_THROW(bad(R"({"dist":{"type":"discrete","atoms":[0,1],"probs":[0.5,0.6]},"coeffs":[1],"lambdas":[1]})"),
               InputError);
  EXPECT_THROW(load_json_arg("{not json"), InputError);
  EXPECT_THROW(load_json_arg("/nonexistent/file.json"), InputError);
}

TEST(FitConstants, SingleRowRatio) {
  ReportRow row;
  row.bound.inequality = "esseen";
  row.bound.lhs.value = 0.5;
  row.bound.a_norm = 1.0;
  row.bound.D = 1.0;
  row.bound.M = 1.0;
  row.bound.rhs = BoundRhs::of(1.0, 0.0);
  const FitResult fit = fit_constants({row}, "esseen");
  ASSERT_TRUE(fit.feasible);
  EXPECT_EQ(fit.constants.C_front, 0.5);
  EXPECT_EQ(fit.constants.c_exp, 2.0);  // no exponential term: every rate ties
  EXPECT_EQ(fit.rows_used, 1u);
}

TEST(FitConstants, AllVacuousIsReported) {
  ReportRow row;
  row.bound.inequality = "thm1";
  const FitResult fit = fit_constants({row, row}, "thm1");
  EXPECT_FALSE(fit.feasible);
  EXPECT_FALSE(fit.message.empty());
  EXPECT_FALSE(fit_constants({}, "fs").feasible);
}

TEST(FitConstants, NeverViolatesCalibrationRows) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.3, 2.0);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<ReportRow> rows;
    for (int e = 0; e < 4; ++e) {
      ExperimentSpec s;
      s.id = "e" + std::to_string(e);
      s.coeffs = {u(rng), u(rng), u(rng), u(rng), u(rng)};
      s.laws = {Distribution{make_discrete({-1.0, 0.0, 1.5 + u(rng)}, {0.3, 0.3, 0.4})}};
      s.lambdas = {0.5, 1.0, 2.0};
      s.bounds = {"fs", "thm1", "cor2", "esseen"};
      s.arith.tol = 1e-5;
      const Report r = run_experiment(s);
      rows.insert(rows.end(), r.rows.begin(), r.rows.end());
    }
    for (const std::string id : {"fs", "thm1", "cor2", "esseen"}) {
      const FitResult fit = fit_constants(rows, id);
      ASSERT_TRUE(fit.feasible) << fit.message;
      for (const auto& r : with_constants(rows, fit.constants)) {
        if (r.bound.inequality == id) {
          EXPECT_TRUE(r.bound.satisfied()) << id;
        }
      }
    }
  }
}

// Constants fitted on one family, applied to another: the count is reported.
TEST(FitConstants, HoldoutFamilyViolationsAreCounted) {
  std::vector<ReportRow> calibration;
  for (int n = 2; n <= 8; ++n) {
    ExperimentSpec s = rademacher_spec(std::vector<double>(n, 1.0), {0.5, 1.0, 2.0}, {"esseen"});
    const Report r = run_experiment(s);
    calibration.insert(calibration.end(), r.rows.begin(), r.rows.end());
  }
  const FitResult fit = fit_constants(calibration, "esseen");
  ASSERT_TRUE(fit.feasible);
  ExperimentSpec h = rademacher_spec(std::vector<double>(6, 1.0), {0.5, 1.0, 2.0}, {"esseen"});
  h.laws = {make_bernoulli(0.3)};
  h.constants.fixed["esseen"] = fit.constants;
  const Report holdout = run_experiment(h);
  const auto s = holdout.summary();
  EXPECT_EQ(s.rows, 3u);
  EXPECT_LE(s.violations, s.rows);
  EXPECT_GT(s.max_ratio, 0.0);
}

TEST(FitConstants, FitPolicyUsesCalibrationCorpus) {
  ExperimentSpec s = rademacher_spec({1, 1, 1, 1, 1, 1}, {1.0}, {"esseen"});
  s.constants.fit = true;
  for (int n : {2, 3, 4}) s.constants.calibration.push_back(rademacher_spec(std::vector<double>(n, 1.0), {1.0}, {}));
  const Report rep = run_experiment(s);
  EXPECT_TRUE(rep.notes.empty());
  // Q sqrt(n M(1)) over n = 2, 3, 4 is largest at n = 4: (6/16) sqrt(2)
  EXPECT_NEAR(rep.constants.at("esseen").C_front, 0.375 * std::sqrt(4 * 0.5), 1e-15);
}

TEST(Csv, RoundTripIsExact) {
  ExperimentSpec s = rademacher_spec({0.7, 1.1, 1.9}, {0.1, 0.7, 3.0}, {"fs", "thm1", "cor2", "esseen"});
  s.method = LhsMethod::monte_carlo;
  s.count = 3000;
  std::vector<ReportRow> rows = run_experiment(s).rows;
  ExperimentSpec pm = s;
  pm.laws = {PointMass{1.0}};
  pm.method = LhsMethod::exact;
  const auto pm_rows = run_experiment(pm).rows;
  rows.insert(rows.end(), pm_rows.begin(), pm_rows.end());

  const std::string text = to_csv(rows);
  std::istringstream in(text);
  const auto back = read_csv(in);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_TRUE(back[i] == rows[i]) << "row " << i;
  EXPECT_EQ(to_csv(back), text);
}

TEST(Csv, HeaderStartsWithDocumentedColumns) {
  const std::string text = to_csv({});
  EXPECT_EQ(text.rfind("experiment_id,lambda,lhs,lhs_method,lhs_ci,alpha,gamma,D,tau,M,p,rhs,rhs_alg,rhs_exp,"
                       "C_front,C_exp,c_exp,satisfied,",
                       0),
            0u);
  std::istringstream junk("a,b\n1,2\n");
  EXPECT_THROW(read_csv(junk), InputError);
}

TEST(VerifySuite, WritesCsvAndReportsStatus) {
  const auto dir = std::filesystem::temp_directory_path() / "loconc_verify_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "eq4s.csv").string();
  EXPECT_EQ(verify_suite("eq4s", path), 0);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "suite,case,metric,value,threshold,pass");
  EXPECT_THROW(verify_suite("nosuch", path), InputError);
}
