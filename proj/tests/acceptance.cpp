#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "loconc/harness/suites.hpp"

// One line per acceptance criterion; exit status 1 if any fails.
int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string out_dir;
  app.add_option("--out", out_dir, "directory for per-criterion CSV files");
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int number;
    const char* title;
    loconc::SuiteResult (*run)();
  };
  const std::vector<Criterion> criteria{
      {1, "identity on the small-t regime", [] { return loconc::suites::eq4s(); }},
      {2, "Esseen sandwich with fitted constants", [] { return loconc::suites::esseen_sandwich(); }},
      {3, "symmetric Esseen equivalence band", [] { return loconc::suites::esseen_band(); }},
      {4, "dyadic beta >= M(1)/4", [] { return loconc::suites::beta(); }},
      {5, "n^(-1/2) decay for Rademacher sums", [] { return loconc::suites::decay(); }},
      {6, "M(1) bound on the golden-ratio vector", [] { return loconc::suites::thm1(); }},
      {7, "essential LCD", [] { return loconc::suites::lcd(); }},
      {8, "regularity of Q in lambda", [] { return loconc::suites::regularity(); }},
      {9, "characteristic function bound and envelopes", [] { return loconc::suites::bound6(); }},
      {10, "Esseen quadrature on analytic cases", [] { return loconc::suites::quadrature(); }},
  };

  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      std::fprintf(stderr, "cannot create %s: %s\n", out_dir.c_str(), ec.message().c_str());
      return 2;
    }
  }
  int failures = 0;
  for (const auto& c : criteria) {
    loconc::SuiteResult r;
    std::string error;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      error = e.what();
      r.checks_pass = false;
    }
    const bool pass = error.empty() && r.pass();
    failures += pass ? 0 : 1;
    std::printf("criterion %2d %s: %s (%.2fs of %.0fs) %s\n", c.number, pass ? "PASS" : "FAIL", c.title, r.seconds,
                r.time_limit, error.empty() ? r.summary.c_str() : ("error: " + error).c_str());
    if (!out_dir.empty() && error.empty()) {
      std::ofstream out(out_dir + "/criterion" + std::to_string(c.number) + "_" + r.name + ".csv");
      loconc::write_suite_csv(out, r);
    }
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
