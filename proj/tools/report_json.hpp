#pragma once

// JSON form of the library's reports. Every document carries
// schema_version; from_json is the inverse of to_json, so a report read
// back compares equal to the one written.

#include <cmath>
#include <limits>
#include <string>

#include "json.hpp"
#include "stieltjes.hpp"

namespace stieltjes::io {

using nlohmann::json;

inline constexpr int schema_version = 1;

// JSON has no inf/nan; they travel as strings.
inline json number(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  return v;
}

inline double read_number(const json &j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan")
      return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf")
      return std::numeric_limits<double>::infinity();
    if (s == "-inf")
      return -std::numeric_limits<double>::infinity();
    throw ParseError("expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

template <class E>
E read_enum(const json &j, std::initializer_list<E> values) {
  const auto s = j.get<std::string>();
  for (E v : values)
    if (to_string(v) == s)
      return v;
  throw ParseError("unknown verdict '" + s + "'");
}

inline json to_json(const MomentCheckResult &m) {
  return {{"n", m.n},
          {"log_integral", number(m.log_integral)},
          {"log_target", m.log_target},
          {"rel_error", number(m.rel_error)},
          {"nodes_used", m.nodes_used}};
}

inline MomentCheckResult moment_check_from_json(const json &j) {
  MomentCheckResult m;
  m.n = j.at("n").get<int>();
  m.log_integral = read_number(j.at("log_integral"));
  m.log_target = read_number(j.at("log_target"));
  m.rel_error = read_number(j.at("rel_error"));
  m.nodes_used = j.at("nodes_used").get<std::size_t>();
  return m;
}

inline json to_json(const CriterionReport &r) {
  json terms = json::array();
  for (const auto &[n, a] : r.c1.terms)
    terms.push_back({n, a});
  json checks = json::array();
  for (const auto &m : r.moment_checks)
    checks.push_back(to_json(m));
  json c1 = {{"verdict", to_string(r.c1.verdict)},
             {"fitted_decay_exponent", number(r.c1.fitted_decay_exponent)},
             {"terms", terms},
             {"note", r.c1.note}};
  c1["limit_n_an"] = r.c1.limit_n_an ? json(*r.c1.limit_n_an) : json(nullptr);
  return {{"schema_version", schema_version},
          {"kind", "criterion_report"},
          {"sequence", r.sequence},
          {"solution", r.solution},
          {"overall", to_string(r.overall)},
          {"moment_checks", checks},
          {"c1", c1},
          {"c2",
           {{"verdict", to_string(r.c2.verdict)},
            {"integral_estimate", number(r.c2.integral_estimate)},
            {"growth_exponent", number(r.c2.growth_exponent)},
            {"fitted_exponent", number(r.c2.fitted_exponent)},
            {"exact_exponent", r.c2.exact_exponent},
            {"note", r.c2.note}}},
          {"c3",
           {{"verdict", to_string(r.c3.verdict)},
            {"convexity_margin", number(r.c3.convexity_margin)},
            {"y_prime", number(r.c3.y_prime)},
            {"note", r.c3.note}}}};
}

inline CriterionReport criterion_report_from_json(const json &j) {
  if (j.at("schema_version").get<int>() != schema_version)
    throw ParseError("unsupported schema_version");
  CriterionReport r;
  r.sequence = j.at("sequence").get<std::string>();
  r.solution = j.at("solution").get<std::string>();
  r.overall = read_enum(j.at("overall"), {Overall::Unique, Overall::NonUnique, Overall::Undecided});
  for (const auto &m : j.at("moment_checks"))
    r.moment_checks.push_back(moment_check_from_json(m));

  const auto &c1 = j.at("c1");
  r.c1.verdict = read_enum(c1.at("verdict"), {C1Verdict::Divergent, C1Verdict::Convergent, C1Verdict::Undecided});
  r.c1.fitted_decay_exponent = read_number(c1.at("fitted_decay_exponent"));
  for (const auto &t : c1.at("terms"))
    r.c1.terms.emplace_back(t.at(0).get<int>(), t.at(1).get<double>());
  if (!c1.at("limit_n_an").is_null())
    r.c1.limit_n_an = c1.at("limit_n_an").get<double>();
  r.c1.note = c1.at("note").get<std::string>();

  const auto &c2 = j.at("c2");
  r.c2.verdict = read_enum(c2.at("verdict"), {C2Verdict::Finite, C2Verdict::Infinite, C2Verdict::Undecided});
  r.c2.integral_estimate = read_number(c2.at("integral_estimate"));
  r.c2.growth_exponent = read_number(c2.at("growth_exponent"));
  r.c2.fitted_exponent = read_number(c2.at("fitted_exponent"));
  r.c2.exact_exponent = c2.at("exact_exponent").get<bool>();
  r.c2.note = c2.at("note").get<std::string>();

  const auto &c3 = j.at("c3");
  r.c3.verdict = read_enum(c3.at("verdict"), {C3Verdict::NonUnique, C3Verdict::Inconclusive});
  r.c3.convexity_margin = read_number(c3.at("convexity_margin"));
  r.c3.y_prime = read_number(c3.at("y_prime"));
  r.c3.note = c3.at("note").get<std::string>();
  return r;
}

inline json to_json(const GammaBound &b, int r, int k) {
  return {{"schema_version", schema_version},
          {"kind", "gamma_bound"},
          {"r", r},
          {"k", k},
          {"gamma_max", b.gamma_max},
          {"sup_ratio", b.sup_ratio},
          {"argsup_x", b.argsup_x},
          {"x_star", b.x_star},
          {"tail_envelope", b.tail_envelope},
          {"origin_limit", b.origin_limit},
          {"grid_points", b.grid_points},
          {"mc_points", b.mc_points},
          {"mc_min_factor", b.mc_min_factor}};
}

inline std::string to_string(Representation r) {
  switch (r) {
  case Representation::ClosedForm: return "closed_form";
  case Representation::MellinBarnes: return "mellin_barnes";
  case Representation::Convolution: return "convolution";
  }
  return "?";
}

} // namespace stieltjes::io
