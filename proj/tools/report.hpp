#pragma once

// Machine-readable reports for the command-line tool. Numbers travel as
// strings so rationals survive exactly.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "nilforms/nilforms.hpp"

namespace nilforms::cli {

struct WeilEntry {
  std::vector<int> monomial;
  std::string value;

  friend bool operator==(const WeilEntry&, const WeilEntry&) = default;
};

struct StokesReport {
  std::string command = "stokes";
  int dim = 0;
  int degree = 0;
  std::string backend;
  std::uint64_t seed = 0;
  std::string form;
  std::string d_form;
  std::vector<std::string> base;
  std::vector<std::vector<std::string>> tangents;
  std::vector<WeilEntry> lhs;
  std::vector<WeilEntry> rhs;
  std::string top_residual;
  std::string lower_order_max;
  std::string tolerance;
  bool pass = false;

  friend bool operator==(const StokesReport&, const StokesReport&) = default;
};

inline void to_json(nlohmann::ordered_json& j, const WeilEntry& e) {
  j = nlohmann::ordered_json{{"monomial", e.monomial}, {"value", e.value}};
}
inline void from_json(const nlohmann::ordered_json& j, WeilEntry& e) {
  j.at("monomial").get_to(e.monomial);
  j.at("value").get_to(e.value);
}

inline void to_json(nlohmann::ordered_json& j, const StokesReport& r) {
  j = nlohmann::ordered_json{{"command", r.command},
                             {"dim", r.dim},
                             {"degree", r.degree},
                             {"backend", r.backend},
                             {"seed", r.seed},
                             {"form", r.form},
                             {"d_form", r.d_form},
                             {"base", r.base},
                             {"tangents", r.tangents},
                             {"lhs", r.lhs},
                             {"rhs", r.rhs},
                             {"top_residual", r.top_residual},
                             {"lower_order_max", r.lower_order_max},
                             {"tolerance", r.tolerance},
                             {"pass", r.pass}};
}

inline void from_json(const nlohmann::ordered_json& j, StokesReport& r) {
  j.at("command").get_to(r.command);
  j.at("dim").get_to(r.dim);
  j.at("degree").get_to(r.degree);
  j.at("backend").get_to(r.backend);
  j.at("seed").get_to(r.seed);
  j.at("form").get_to(r.form);
  j.at("d_form").get_to(r.d_form);
  j.at("base").get_to(r.base);
  j.at("tangents").get_to(r.tangents);
  j.at("lhs").get_to(r.lhs);
  j.at("rhs").get_to(r.rhs);
  j.at("top_residual").get_to(r.top_residual);
  j.at("lower_order_max").get_to(r.lower_order_max);
  j.at("tolerance").get_to(r.tolerance);
  j.at("pass").get_to(r.pass);
}

/// Weil element as a table, monomials in the element's canonical order.
template <Scalar S>
std::vector<WeilEntry> weil_table(const Weil<S>& w) {
  std::vector<WeilEntry> out;
  for (const auto& [mono, c] : w.terms()) out.push_back({mono.generators(), ScalarTraits<S>::to_string(c)});
  return out;
}

template <Scalar S>
std::vector<std::string> vector_strings(const Vector<S>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(ScalarTraits<S>::to_string(x));
  return out;
}

template <Scalar S>
StokesReport make_stokes_report(const VerificationReport<S>& r, const DifferentialForm& w, const DifferentialForm& dw,
                                const Vector<S>& x, const std::vector<Vector<S>>& tangents, std::uint64_t seed) {
  StokesReport out;
  out.dim = r.dim;
  out.degree = r.degree;
  out.backend = std::string(backend_name(ScalarTraits<S>::backend));
  out.seed = seed;
  out.form = to_string(w);
  out.d_form = to_string(dw);
  out.base = vector_strings(x);
  for (const auto& t : tangents) out.tangents.push_back(vector_strings(t));
  out.lhs = weil_table(r.lhs);
  out.rhs = weil_table(r.rhs);
  out.top_residual = ScalarTraits<S>::to_string(r.top_residual);
  out.lower_order_max = ScalarTraits<S>::to_string(r.lower_order_max);
  out.tolerance = ScalarTraits<double>::to_string(r.tolerance);
  out.pass = r.pass;
  return out;
}

inline nlohmann::ordered_json sweep_json(const SweepSummary& s) {
  using nlohmann::ordered_json;
  auto num = [](double v) { return ScalarTraits<double>::to_string(v); };
  ordered_json per_degree = ordered_json::array();
  for (const auto& d : s.degrees)
    per_degree.push_back(ordered_json{{"degree", d.degree},
                                      {"trials", d.trials},
                                      {"stokes_failures", d.stokes_failures},
                                      {"extraction_failures", d.extraction_failures},
                                      {"alternating_failures", d.alternating_failures},
                                      {"dd_checked", d.dd_checked},
                                      {"dd_failures", d.dd_failures},
                                      {"max_top_residual", num(d.max_top_residual)},
                                      {"max_lower_order", num(d.max_lower_order)},
                                      {"max_extraction_error", num(d.max_extraction_error)},
                                      {"max_dd", num(d.max_dd)}});
  ordered_json failures = ordered_json::array();
  for (const auto& f : s.failures)
    failures.push_back(ordered_json{{"degree", f.degree}, {"trial", f.trial}, {"check", f.check}, {"form", f.form}, {"detail", f.detail}});
  return ordered_json{{"command", "check"},
                      {"dim", s.config.dim},
                      {"degrees", s.config.degrees},
                      {"backend", backend_name(s.config.backend)},
                      {"pool", s.config.pool == FieldPool::polynomial ? "polynomial" : "transcendental"},
                      {"seed", s.config.seed},
                      {"trials", s.config.trials},
                      {"per_degree", per_degree},
                      {"failures", failures},
                      {"pass", s.passed()}};
}

}  // namespace nilforms::cli
