#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "loconc/bounds.hpp"
#include "loconc/distribution.hpp"
#include "loconc/errors.hpp"
#include "loconc/extended_real.hpp"

namespace loconc {

using Json = nlohmann::json;

// Command-line JSON arguments are either inline text or a path to a file.
inline Json load_json_arg(const std::string& arg) {
  std::string text = arg;
  const bool looks_inline = !arg.empty() && (arg.front() == '{' || arg.front() == '[');
  if (!looks_inline) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(arg, ec)) throw InputError("not JSON and not a readable file: " + arg);
    std::ifstream in(arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

namespace detail {

inline const Json& field(const Json& j, const char* key, const char* who) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string(who) + ": missing field '" + key + "'");
  return j.at(key);
}

inline double number(const Json& j, const char* key, const char* who) {
  const Json& v = field(j, key, who);
  if (!v.is_number()) throw InputError(std::string(who) + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline double number_or(const Json& j, const char* key, double fallback, const char* who) {
  return j.contains(key) ? number(j, key, who) : fallback;
}

inline std::vector<double> numbers(const Json& v, const char* who) {
  if (!v.is_array()) throw InputError(std::string(who) + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const Json& x : v) {
    if (!x.is_number()) throw InputError(std::string(who) + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace detail

inline Distribution distribution_from_json(const Json& j) {
  const char* who = "distribution";
  const Json& type = detail::field(j, "type", who);
  if (!type.is_string()) throw InputError("distribution: 'type' must be a string");
  const std::string t = type.get<std::string>();
  if (t == "discrete") {
    const auto atoms = detail::numbers(detail::field(j, "atoms", who), who);
    const auto probs = detail::numbers(detail::field(j, "probs", who), who);
    return make_discrete(atoms, probs);
  }
  if (t == "rademacher") return Rademacher{};
  if (t == "bernoulli") return make_bernoulli(detail::number(j, "p", who));
  if (t == "uniform") return make_uniform(detail::number(j, "a", who), detail::number(j, "b", who));
  if (t == "pointmass") return PointMass{detail::number(j, "x", who)};
  if (t == "sampler") {
    const Json& id = detail::field(j, "id", who);
    if (!id.is_string()) throw InputError("distribution: sampler 'id' must be a string");
    const auto params = j.contains("params") ? detail::numbers(j.at("params"), who) : std::vector<double>{};
    return make_sampler(id.get<std::string>(), params);
  }
  throw InputError("distribution: unknown type '" + t + "'");
}

inline Json distribution_to_json(const Distribution& F) {
  struct Visitor {
    Json operator()(const DiscreteLaw& d) const {
      return {{"type", "discrete"},
              {"atoms", std::vector<double>(d.atoms().begin(), d.atoms().end())},
              {"probs", std::vector<double>(d.probs().begin(), d.probs().end())}};
    }
    Json operator()(const Rademacher&) const { return {{"type", "rademacher"}}; }
    Json operator()(const Bernoulli& b) const { return {{"type", "bernoulli"}, {"p", b.p}}; }
    Json operator()(const UniformLaw& u) const { return {{"type", "uniform"}, {"a", u.a}, {"b", u.b}}; }
    Json operator()(const PointMass& m) const { return {{"type", "pointmass"}, {"x", m.x}}; }
    Json operator()(const SamplerLaw& s) const { return {{"type", "sampler"}, {"id", s.id}, {"params", s.params}}; }
  };
  return std::visit(Visitor{}, F);
}

// a_k = base + (k - 1) step, k = 1..n.
inline std::vector<double> arithmetic_coeffs(int n, double base, double step) {
  require(n >= 1, "coefficients: n must be >= 1");
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) a[static_cast<std::size_t>(k)] = base + k * step;
  return a;
}

// {"coeffs":[...]}, a bare array, or {"type":"arith","n":..,"base":..,"step":..}.
// An optional "normalize": "max" | "euclidean" rescales the result.
inline std::vector<double> coeffs_from_json(const Json& j) {
  const char* who = "coefficients";
  std::vector<double> a;
  if (j.is_array()) {
    a = detail::numbers(j, who);
  } else if (j.is_object() && j.contains("coeffs")) {
    a = detail::numbers(j.at("coeffs"), who);
  } else if (j.is_object() && j.value("type", "") == "arith") {
    const double n = detail::number(j, "n", who);
    require(n >= 1 && n == std::floor(n) && n <= 1e7, "coefficients: n must be a positive integer");
    a = arithmetic_coeffs(static_cast<int>(n), detail::number(j, "base", who), detail::number(j, "step", who));
  } else {
    throw InputError("coefficients: expected {\"coeffs\":[...]} or an arith generator");
  }
  require(!a.empty(), "coefficients: empty vector");
  for (double x : a) require(std::isfinite(x), "coefficients: entries must be finite");
  if (j.is_object() && j.contains("normalize")) {
    const std::string how = j.at("normalize").get<std::string>();
    double s = 0.0;
    if (how == "max") {
      for (double x : a) s = std::max(s, std::abs(x));
    } else if (how == "euclidean") {
      for (double x : a) s += x * x;
      s = std::sqrt(s);
    } else if (how != "none") {
      throw InputError("coefficients: normalize must be none, max or euclidean");
    }
    if (how != "none") {
      require(s > 0.0, "coefficients: cannot normalize the zero vector");
      for (double& x : a) x /= s;
    }
  }
  return a;
}

inline ConstantSet constants_from_json(const Json& j) {
  const char* who = "constants";
  if (!j.is_object()) throw InputError("constants: expected an object");
  ConstantSet k;
  k.C_front = detail::number_or(j, "C_front", k.C_front, who);
  k.C_exp = detail::number_or(j, "C_exp", k.C_exp, who);
  k.c_exp = detail::number_or(j, "c_exp", k.c_exp, who);
  k.p_exponent = static_cast<int>(detail::number_or(j, "p_exponent", k.p_exponent, who));
  k.validate();
  return k;
}

inline Json constants_to_json(const ConstantSet& k) {
  return {{"C_front", k.C_front}, {"C_exp", k.C_exp}, {"c_exp", k.c_exp}, {"p_exponent", k.p_exponent}};
}

// JSON has no infinity; the sentinel travels as the string "inf".
inline Json extended_to_json(const ExtendedReal& x) {
  return x.is_finite() ? Json(x.value()) : Json("inf");
}

}  // namespace loconc
