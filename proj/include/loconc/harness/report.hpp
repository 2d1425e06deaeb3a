#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "loconc/bounds.hpp"
#include "loconc/errors.hpp"

namespace loconc {

// Inequality ids understood by the experiment driver. The lambda of a row is
// always the window of the measured Q; D and tau follow from it.
//   fs     Q(F_a, 1/D) vs 1/(||a|| D sqrt p) + exp(-c p^k alpha^2), alpha certified on [t0, D]
//   rv     Q(F_a, 1/D) vs 1/(gamma D ||a|| sqrt p) + exp(-2 p alpha^2), given (gamma, alpha)
//   thm1   Q(F_a, 1/D) vs 1/(||a|| D sqrt M(1)) + exp(-c alpha^2 M(1)), alpha certified on [t0, D]
//   thm2   as thm1 with gamma in the algebraic term, given (gamma, alpha)
//   cor2   Q(F_a, tau/D) with M(tau), alpha certified on [t0, D]
//   cor4   Q(F_a, tau/D) with M(tau) and gamma, given (gamma, alpha)
//   esseen Q(F_a, tau ||a||_inf) vs ||a||_inf / (||a|| sqrt M(tau)), no arithmetic term
inline const std::array<std::string_view, 7> kInequalityIds{"fs", "rv", "thm1", "thm2", "cor2", "cor4", "esseen"};

inline bool known_inequality(std::string_view id) {
  for (auto k : kInequalityIds)
    if (k == id) return true;
  return false;
}

struct ReportRow {
  std::string experiment_id;
  BoundReport bound;

  friend bool operator==(const ReportRow& x, const ReportRow& y);
};

struct ReportSummary {
  std::size_t rows = 0;
  std::size_t vacuous = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;
};

struct Report {
  std::string id;
  std::vector<ReportRow> rows;
  std::map<std::string, ConstantSet> constants;  // per inequality
  std::vector<std::string> notes;

  ReportSummary summary() const {
    ReportSummary s;
    s.rows = rows.size();
    for (const auto& r : rows) {
      if (r.bound.vacuous()) ++s.vacuous;
      if (!r.bound.satisfied()) ++s.violations;
      s.max_ratio = std::max(s.max_ratio, r.bound.ratio());
    }
    return s;
  }
};

// Right side of a row under another constant set, from the echoed inputs.
// Rows that were vacuous (hypothesis not met or no information) stay vacuous.
inline BoundRhs evaluate_rhs(const BoundReport& row, const ConstantSet& k) {
  if (row.vacuous()) return BoundRhs::vacuous();
  const std::string& id = row.inequality;
  if (id == "fs") return fs_bound(row.a_norm, row.D, row.alpha, row.p, k);
  if (id == "rv") return rv_bound(row.a_norm, row.D, row.gamma, row.alpha, row.p, k);
  if (id == "esseen") {
    k.validate();
    if (!(row.M > 0.0)) return BoundRhs::vacuous();
    return BoundRhs::of(k.C_front / (row.a_norm * row.D * std::sqrt(row.M)), 0.0);
  }
  if (id == "thm1" || id == "thm2" || id == "cor2" || id == "cor4") {
    CorollaryInputs in;
    in.a_norm = row.a_norm;
    in.D = row.D;
    in.tau = row.tau;
    in.alpha = row.alpha;
    in.M_tau = row.M;
    if (id == "thm2" || id == "cor4") in.gamma = row.gamma;
    return corollary_bound(in, k).rhs;
  }
  throw InputError("unknown inequality id '" + id + "'");
}

namespace detail {

inline bool same_double(double x, double y) {
  return (std::isnan(x) && std::isnan(y)) || x == y;
}

inline std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw InputError("csv: malformed number '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw InputError("csv: malformed integer '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

inline bool operator==(const ReportRow& x, const ReportRow& y) {
  using detail::same_double;
  const BoundReport& a = x.bound;
  const BoundReport& b = y.bound;
  return x.experiment_id == y.experiment_id && a.inequality == b.inequality &&
         same_double(a.lhs.lambda, b.lhs.lambda) && same_double(a.lhs.value, b.lhs.value) &&
         a.lhs.method == b.lhs.method && a.lhs.sample_count == b.lhs.sample_count &&
         same_double(a.lhs.ci_half_width, b.lhs.ci_half_width) && a.lhs.seed == b.lhs.seed &&
         a.rhs.value == b.rhs.value && same_double(a.rhs.algebraic, b.rhs.algebraic) &&
         same_double(a.rhs.exponential, b.rhs.exponential) && same_double(a.a_norm, b.a_norm) &&
         same_double(a.alpha, b.alpha) && same_double(a.gamma, b.gamma) && same_double(a.D, b.D) &&
         same_double(a.tau, b.tau) && same_double(a.M, b.M) && same_double(a.p, b.p) &&
         a.constants == b.constants;
}

// The first 18 columns are the documented report layout; the trailing ones
// make the file self-contained for exact round trips.
inline const std::vector<std::string>& csv_header() {
  static const std::vector<std::string> h{
      "experiment_id", "lambda", "lhs", "lhs_method", "lhs_ci", "alpha", "gamma", "D", "tau", "M", "p",
      "rhs", "rhs_alg", "rhs_exp", "C_front", "C_exp", "c_exp", "satisfied", "inequality", "p_exponent",
      "a_norm", "lhs_count", "lhs_seed"};
  return h;
}

inline void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  using detail::format_double;
  const auto& h = csv_header();
  for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
  out << '\n';
  for (const auto& row : rows) {
    const BoundReport& b = row.bound;
    require(row.experiment_id.find_first_of(",\n\r\"") == std::string::npos,
            "csv: experiment id must not contain commas, quotes or newlines");
    out << row.experiment_id << ',' << format_double(b.lhs.lambda) << ',' << format_double(b.lhs.value) << ','
        << to_string(b.lhs.method) << ',' << format_double(b.lhs.ci_half_width) << ','
        << format_double(b.alpha) << ',' << format_double(b.gamma) << ',' << format_double(b.D) << ','
        << format_double(b.tau) << ',' << format_double(b.M) << ',' << format_double(b.p) << ','
        << format_double(b.rhs.value.as_double()) << ',' << format_double(b.rhs.algebraic) << ','
        << format_double(b.rhs.exponential) << ',' << format_double(b.constants.C_front) << ','
        << format_double(b.constants.C_exp) << ',' << format_double(b.constants.c_exp) << ','
        << (b.satisfied() ? "true" : "false") << ',' << b.inequality << ',' << b.constants.p_exponent << ','
        << format_double(b.a_norm) << ',' << b.lhs.sample_count << ',' << b.lhs.seed << '\n';
  }
}

inline std::string to_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream ss;
  write_csv(ss, rows);
  return ss.str();
}

inline void write_csv_file(const std::string& path, const std::vector<ReportRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file " + path);
  write_csv(out, rows);
  if (!out) throw std::runtime_error("failed writing " + path);
}

inline std::vector<ReportRow> read_csv(std::istream& in) {
  using detail::parse_double;
  std::string line;
  if (!std::getline(in, line)) throw InputError("csv: empty input");
  const auto header = detail::split_commas(line);
  const auto& expected = csv_header();
  if (header.size() != expected.size()) throw InputError("csv: unexpected header");
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] != expected[i]) throw InputError("csv: unexpected header column " + std::string(header[i]));
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_commas(line);
    if (f.size() != expected.size()) throw InputError("csv: wrong field count");
    ReportRow row;
    BoundReport& b = row.bound;
    row.experiment_id = std::string(f[0]);
    b.lhs.lambda = parse_double(f[1]);
    b.lhs.value = parse_double(f[2]);
    if (f[3] == "exact") {
      b.lhs.method = EstimateMethod::exact;
    } else if (f[3] == "mc") {
      b.lhs.method = EstimateMethod::monte_carlo;
    } else {
      throw InputError("csv: unknown lhs_method");
    }
    b.lhs.ci_half_width = parse_double(f[4]);
    b.alpha = parse_double(f[5]);
    b.gamma = parse_double(f[6]);
    b.D = parse_double(f[7]);
    b.tau = parse_double(f[8]);
    b.M = parse_double(f[9]);
    b.p = parse_double(f[10]);
    const double rhs = parse_double(f[11]);
    b.rhs.value = std::isinf(rhs) ? ExtendedReal::infinite() : ExtendedReal(rhs);
    b.rhs.algebraic = parse_double(f[12]);
    b.rhs.exponential = parse_double(f[13]);
    b.constants.C_front = parse_double(f[14]);
    b.constants.C_exp = parse_double(f[15]);
    b.constants.c_exp = parse_double(f[16]);
    b.inequality = std::string(f[18]);
    b.constants.p_exponent = static_cast<int>(detail::parse_u64(f[19]));
    b.a_norm = parse_double(f[20]);
    b.lhs.sample_count = detail::parse_u64(f[21]);
    b.lhs.seed = detail::parse_u64(f[22]);
    if ((f[17] == "true") != b.satisfied() || (f[17] != "true" && f[17] != "false"))
      throw InputError("csv: satisfied column inconsistent with lhs and rhs");
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<ReportRow> read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return read_csv(in);
}

}  // namespace loconc
