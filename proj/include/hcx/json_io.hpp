#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hcx/convex_solver.hpp"
#include "hcx/correspondence.hpp"
#include "hcx/law_suite.hpp"
#include "hcx/quadratic_hidden.hpp"

namespace hcx {

inline constexpr const char* kSchemaVersion = "hcx-1";

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* key) {
  if (!j.is_object()) throw std::invalid_argument("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string("missing field: ") + key);
  return *it;
}

inline double as_double(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw std::invalid_argument(std::string(what) + ": expected a number");
  return j.get<double>();
}

inline std::size_t as_size(const nlohmann::json& j, const char* what) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0)
    return static_cast<std::size_t>(j.get<long long>());
  throw std::invalid_argument(std::string(what) + ": expected a nonnegative integer");
}

inline std::vector<double> as_double_vector(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(as_double(e, what));
  return out;
}

}  // namespace detail

// ---- finite correspondences ----

inline nlohmann::json correspondence_to_json(const Correspondence& r) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [w, y] : r.pairs()) pairs.push_back({w, y});
  return {{"w_size", r.source().size()},
          {"y_size", r.target().size()},
          {"pairs", std::move(pairs)}};
}

inline Correspondence correspondence_from_json(const nlohmann::json& j) {
  const std::size_t w_size = detail::as_size(detail::require_field(j, "w_size"), "w_size");
  const std::size_t y_size = detail::as_size(detail::require_field(j, "y_size"), "y_size");
  const auto& pairs = detail::require_field(j, "pairs");
  if (!pairs.is_array()) throw std::invalid_argument("pairs: expected an array");
  std::vector<std::pair<std::size_t, std::size_t>> list;
  list.reserve(pairs.size());
  for (const auto& e : pairs) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("pairs: expected two-element arrays");
    list.emplace_back(detail::as_size(e[0], "pairs"), detail::as_size(e[1], "pairs"));
  }
  return Correspondence::from_pairs(FiniteSet(w_size), FiniteSet(y_size), list);
}

// ---- convex set descriptors ----

inline nlohmann::json set_to_json(const ConvexSetDescriptor& c) {
  nlohmann::json j{{"kind", c.kind()}};
  if (const auto* box = std::get_if<BoxSet>(&c.data())) {
    j["lower"] = box->lower;
    j["upper"] = box->upper;
  } else if (const auto* band = std::get_if<BandSet>(&c.data())) {
    j["s"] = band->s;
    j["l"] = band->l;
    j["u"] = band->u;
  } else if (const auto* half = std::get_if<HalfspacesSet>(&c.data())) {
    j["dimension"] = c.dim();
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : half->rows) rows.push_back({{"a", row.a}, {"c", row.c}});
    j["rows"] = std::move(rows);
  } else {
    const auto& ball = std::get<BallSet>(c.data());
    j["center"] = ball.center;
    j["radius"] = ball.radius;
  }
  return j;
}

inline ConvexSetDescriptor set_from_json(const nlohmann::json& j) {
  const auto& kind = detail::require_field(j, "kind");
  if (!kind.is_string()) throw std::invalid_argument("kind: expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "box")
    return ConvexSetDescriptor::box(
        detail::as_double_vector(detail::require_field(j, "lower"), "lower"),
        detail::as_double_vector(detail::require_field(j, "upper"), "upper"));
  if (k == "band")
    return ConvexSetDescriptor::band(detail::as_double_vector(detail::require_field(j, "s"), "s"),
                                     detail::as_double(detail::require_field(j, "l"), "l"),
                                     detail::as_double(detail::require_field(j, "u"), "u"));
  if (k == "halfspaces") {
    const std::size_t dim = detail::as_size(detail::require_field(j, "dimension"), "dimension");
    const auto& rows = detail::require_field(j, "rows");
    if (!rows.is_array()) throw std::invalid_argument("rows: expected an array");
    std::vector<HalfspaceRow> out;
    out.reserve(rows.size());
    for (const auto& e : rows)
      out.push_back({detail::as_double_vector(detail::require_field(e, "a"), "a"),
                     detail::as_double(detail::require_field(e, "c"), "c")});
    return ConvexSetDescriptor::halfspaces(dim, std::move(out));
  }
  if (k == "ball")
    return ConvexSetDescriptor::ball(
        detail::as_double_vector(detail::require_field(j, "center"), "center"),
        detail::as_double(detail::require_field(j, "radius"), "radius"));
  throw std::invalid_argument("kind: expected box, band, halfspaces or ball");
}

// ---- problem files ----

struct ProblemFile {
  QuadraticProblem problem;
  std::optional<std::size_t> oracle_resolution;
  std::optional<std::vector<double>> oracle_bound;
};

inline ProblemFile problem_from_json(const nlohmann::json& j) {
  const std::size_t dim = detail::as_size(detail::require_field(j, "dimension"), "dimension");
  if (dim == 0) throw std::invalid_argument("dimension: must be positive");
  const auto upper = detail::as_double_vector(detail::require_field(j, "m_upper"), "m_upper");
  const auto b = detail::as_double_vector(detail::require_field(j, "b"), "b");
  auto set = set_from_json(detail::require_field(j, "set"));
  if (b.size() != dim) throw std::invalid_argument("b: size differs from dimension");
  if (set.dim() != dim) throw std::invalid_argument("set: dimension differs from problem dimension");
  SymMatrix m = SymMatrix::from_upper(dim, upper);
  ProblemFile out{QuadraticProblem(std::move(m), b, std::move(set)), std::nullopt, std::nullopt};
  if (j.contains("oracle")) {
    const auto& o = j.at("oracle");
    if (!o.is_object()) throw std::invalid_argument("oracle: expected an object");
    if (o.contains("resolution"))
      out.oracle_resolution = detail::as_size(o.at("resolution"), "oracle.resolution");
    if (o.contains("bound")) {
      out.oracle_bound = detail::as_double_vector(o.at("bound"), "oracle.bound");
      if (out.oracle_bound->size() != dim)
        throw std::invalid_argument("oracle.bound: size differs from dimension");
    }
  }
  return out;
}

inline nlohmann::json problem_to_json(const ProblemFile& f) {
  nlohmann::json j{{"dimension", f.problem.m.dim()},
                   {"m_upper", f.problem.m.upper()},
                   {"b", f.problem.b},
                   {"set", set_to_json(f.problem.set)}};
  if (f.oracle_resolution || f.oracle_bound) {
    nlohmann::json o = nlohmann::json::object();
    if (f.oracle_resolution) o["resolution"] = *f.oracle_resolution;
    if (f.oracle_bound) o["bound"] = *f.oracle_bound;
    j["oracle"] = std::move(o);
  }
  return j;
}

// ---- reports ----

inline nlohmann::json sign_to_json(const SignPattern& s) { return nlohmann::json(s.eps); }

inline nlohmann::json certificate_to_json(const ConvexityCertificate& c) {
  nlohmann::json j;
  switch (c.verdict) {
    case ConvexityCertificate::Verdict::convex: j["verdict"] = "convex"; break;
    case ConvexityCertificate::Verdict::violation_found: j["verdict"] = "violation_found"; break;
    default: j["verdict"] = "inconclusive"; break;
  }
  j["samples_used"] = c.samples_used;
  if (c.sign) j["sign"] = sign_to_json(*c.sign);
  if (c.witness) {
    j["witness"] = {{"y1", c.witness->y1},
                    {"y2", c.witness->y2},
                    {"midpoint", c.witness->midpoint},
                    {"value1", c.witness->value1},
                    {"value2", c.witness->value2},
                    {"value_mid", c.witness->value_mid}};
  }
  return j;
}

inline nlohmann::json detect_report_to_json(const HiddenConvexityReport& r) {
  nlohmann::json j{{"signable", r.signable},
                   {"certificate", certificate_to_json(r.certificate)},
                   {"surrogate",
                    {{"diagonal", r.surrogate_diagonal},
                     {"cross", r.surrogate_cross},
                     {"linear", r.surrogate_linear}}}};
  if (r.sign) j["sign"] = sign_to_json(*r.sign);
  return j;
}

inline nlohmann::json solve_report_to_json(const SolveReport& r) {
  nlohmann::json j{{"status", r.status == SolveStatus::signable ? "signable" : "not_signable"},
                   {"iterations", r.iterations},
                   {"converged", r.converged}};
  if (r.status == SolveStatus::signable) {
    j["sign"] = sign_to_json(*r.sign);
    j["y_star"] = r.y_star;
    j["surrogate_value"] = r.surrogate_value;
    j["x_star"] = r.x_star;
    j["q_at_x_star"] = r.q_at_x_star;
    j["feasibility_residual"] = r.feasibility_residual;
  }
  return j;
}

inline nlohmann::json oracle_report_to_json(const GridOracleResult& r) {
  return {{"value", r.value},
          {"y", r.y},
          {"feasible_points", r.feasible_points},
          {"total_points", r.total_points}};
}

inline nlohmann::json law_report_to_json(const LawReport& r) {
  return {{"law", r.law},
          {"cases", r.cases},
          {"failures", r.failures},
          {"passed", r.passed()}};
}

inline nlohmann::json law_reports_to_json(const std::vector<LawReport>& reports) {
  nlohmann::json items = nlohmann::json::array();
  bool all = true;
  std::size_t cases = 0;
  for (const auto& r : reports) {
    all = all && r.passed();
    cases += r.cases;
    items.push_back(law_report_to_json(r));
  }
  return {{"all_passed", all}, {"total_cases", cases}, {"laws", std::move(items)}};
}

// ---- run envelope ----

/// FNV-1a, 64-bit, over raw bytes; rendered as "fnv1a64:" + 16 hex digits.
inline std::string fnv1a64_digest(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out = "fnv1a64:";
  for (int shift = 60; shift >= 0; shift -= 4) out.push_back(hex[(h >> shift) & 0xF]);
  return out;
}

inline nlohmann::json make_run_report(const std::string& command, const std::string& input_digest,
                                      std::uint64_t seed, double wall_time_seconds,
                                      nlohmann::json result) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"input_digest", input_digest},
          {"seed", seed},
          {"wall_time_seconds", wall_time_seconds},
          {"result", std::move(result)}};
}

}  // namespace hcx
