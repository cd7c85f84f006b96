#pragma once

// Command-line front end. Exit codes: 0 pass, 1 verification failure,
// 2 usage or parse error. Reports go to `out`, diagnostics to `err`.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nilforms/nilforms.hpp"
#include "report.hpp"

namespace nilforms::cli {

inline constexpr int exit_pass = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_usage = 2;

struct UsageError : Error {
  using Error::Error;
};

namespace detail {

// Options whose values are expressions and may start with '-'.
inline bool takes_expression(std::string_view opt) {
  return opt == "--form" || opt == "--rhs-form" || opt == "--f" || opt == "--fx" || opt == "--fy" || opt == "--fz" ||
         opt == "--at" || opt == "--base" || opt == "--tangents";
}

/// Joins `--fx -y` into `--fx=-y` so the value is not mistaken for a flag.
inline std::vector<std::string> glue_expression_values(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (takes_expression(args[i]) && i + 1 < args.size()) {
      out.push_back(args[i] + "=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(args[i]);
    }
  }
  return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

template <Scalar S>
Vector<S> parse_vector(std::string_view text, int dim, const char* what) {
  Vector<S> v;
  for (const auto& part : split(text, ',')) {
    try {
      v.push_back(parse_scalar_value<S>(part));
    } catch (const Error& e) {
      throw UsageError(std::string(what) + ": " + e.what());
    }
  }
  if (static_cast<int>(v.size()) != dim)
    throw UsageError(std::string(what) + " needs " + std::to_string(dim) + " coordinates, got " + std::to_string(v.size()));
  return v;
}

/// "a1,a2,a3;b1,b2,b3" -> vectors. Empty text means no vectors.
template <Scalar S>
std::vector<Vector<S>> parse_vectors(std::string_view text, int dim, const char* what) {
  std::vector<Vector<S>> out;
  if (text.empty()) return out;
  for (const auto& part : split(text, ';')) out.push_back(parse_vector<S>(part, dim, what));
  return out;
}

/// "0..4" or "0,1,2".
inline std::vector<int> parse_degrees(std::string_view text) {
  std::vector<int> out;
  auto to_int = [](const std::string& s) {
    try {
      std::size_t used = 0;
      int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("malformed degree '" + s + "'");
    }
  };
  auto dots = text.find("..");
  if (dots != std::string_view::npos) {
    int lo = to_int(std::string(text.substr(0, dots))), hi = to_int(std::string(text.substr(dots + 2)));
    if (hi < lo) throw UsageError("empty degree range '" + std::string(text) + "'");
    for (int k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  for (const auto& part : split(text, ',')) out.push_back(to_int(part));
  return out;
}

template <class Fn>
int with_backend(Backend b, Fn&& fn) {
  if (b == Backend::rational) return fn(Rational{});
  return fn(double{});
}

inline ParsedForm parse_form_reporting(const std::string& text, int dim, std::ostream& err) {
  ParsedForm p = parse_form(text, dim);
  for (const auto& w : p.warnings) err << "warning: " << w << "\n";
  return p;
}

template <Scalar S>
void print_table(std::ostream& out, const char* label, const Weil<S>& w) {
  out << label << ":\n";
  if (w.is_zero()) out << "  (zero)\n";
  for (const auto& [mono, c] : w.terms()) out << "  " << mono.to_string() << ": " << ScalarTraits<S>::to_string(c) << "\n";
}

}  // namespace detail

struct Options {
  int dim = 3;
  std::string backend = "rational";
  double tol = 1e-9;
  std::uint64_t seed = 42;
  bool json = false;

  // d / eval / stokes
  std::string form;
  std::string rhs_form;
  bool allow_top = false;
  std::string at;
  std::string base;
  std::string tangents;
  std::optional<int> random_degree;

  // vcalc
  std::string vcalc_op;
  std::string f, fx, fy, fz;

  // check
  std::string degrees = "0..2";
  int trials = 50;
  std::string pool;
};

inline int cmd_d(const Options& o, std::ostream& out, std::ostream& err) {
  ParsedForm p = detail::parse_form_reporting(o.form, o.dim, err);
  DifferentialForm dw = d_formula(p.form, o.allow_top);
  if (o.json) {
    nlohmann::ordered_json j{{"command", "d"}, {"dim", o.dim}, {"degree", p.form.degree()}, {"form", to_string(p.form)},
                             {"d_form", to_string(dw)}};
    out << j.dump(2) << "\n";
  } else {
    out << to_string(dw) << "\n";
  }
  return exit_pass;
}

template <Scalar S>
int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
  ParsedForm p = detail::parse_form_reporting(o.form, o.dim, err);
  if (o.at.empty()) throw UsageError("eval needs --at");
  Vector<S> x = detail::parse_vector<S>(o.at, o.dim, "--at");
  auto tangents = detail::parse_vectors<S>(o.tangents, o.dim, "--tangents");
  if (static_cast<int>(tangents.size()) != p.form.degree())
    throw UsageError("a " + std::to_string(p.form.degree()) + "-form needs " + std::to_string(p.form.degree()) + " tangent vectors");
  S value = eval_form<S, S>(p.form, x, tangents);
  if (o.json) {
    nlohmann::ordered_json j{{"command", "eval"},
                             {"dim", o.dim},
                             {"degree", p.form.degree()},
                             {"backend", backend_name(ScalarTraits<S>::backend)},
                             {"form", to_string(p.form)},
                             {"at", vector_strings(x)},
                             {"value", ScalarTraits<S>::to_string(value)}};
    out << j.dump(2) << "\n";
  } else {
    out << ScalarTraits<S>::to_string(value) << "\n";
  }
  return exit_pass;
}

template <Scalar S>
int cmd_stokes(const Options& o, std::ostream& out, std::ostream& err) {
  DifferentialForm w(o.dim, 0);
  Vector<S> x;
  std::vector<Vector<S>> tangents;
  if (o.random_degree) {
    if (!o.form.empty()) throw UsageError("--form and --random-degree are exclusive");
    const int k = *o.random_degree;
    if (k < 0 || k >= o.dim) throw UsageError("--random-degree must be in 0.." + std::to_string(o.dim - 1));
    Rng rng = split_rng(o.seed, o.dim, k);
    w = random_form(o.dim, k, rng, ScalarTraits<S>::exact ? FieldPool::polynomial : FieldPool::transcendental);
    x = o.base.empty() ? random_point<S>(o.dim, rng) : detail::parse_vector<S>(o.base, o.dim, "--base");
    tangents = o.tangents.empty() ? random_tangents<S>(o.dim, k + 1, rng) : detail::parse_vectors<S>(o.tangents, o.dim, "--tangents");
  } else {
    if (o.form.empty()) throw UsageError("stokes needs --form or --random-degree");
    w = detail::parse_form_reporting(o.form, o.dim, err).form;
    x = o.base.empty() ? Vector<S>(o.dim, S(0)) : detail::parse_vector<S>(o.base, o.dim, "--base");
    if (o.tangents.empty()) {
      for (int i = 1; i <= w.degree() + 1 && i <= o.dim; ++i) tangents.push_back(basis_vector<S>(i, o.dim));
    } else {
      tangents = detail::parse_vectors<S>(o.tangents, o.dim, "--tangents");
    }
  }
  if (w.degree() >= o.dim) throw UsageError("Stokes check needs a form of degree below the dimension");
  if (static_cast<int>(tangents.size()) != w.degree() + 1)
    throw UsageError("a " + std::to_string(w.degree()) + "-form is checked on " + std::to_string(w.degree() + 1) + " tangents, got " +
                     std::to_string(tangents.size()));
  DifferentialForm dw = o.rhs_form.empty() ? d_formula(w) : detail::parse_form_reporting(o.rhs_form, o.dim, err).form;
  if (dw.degree() != w.degree() + 1) throw UsageError("--rhs-form must have degree " + std::to_string(w.degree() + 1));

  auto r = verify_against<S>(w, dw, x, tangents, Tolerance{o.tol, 1e-12});
  StokesReport rep = make_stokes_report(r, w, dw, x, tangents, o.seed);
  if (o.json) {
    nlohmann::ordered_json j = rep;
    out << j.dump(2) << "\n";
  } else {
    out << "stokes: dim=" << rep.dim << " degree=" << rep.degree << " backend=" << rep.backend << "\n";
    out << "form: " << rep.form << "\n";
    out << (o.rhs_form.empty() ? "d(form): " : "d(form) [override]: ") << rep.d_form << "\n";
    out << "base: (";
    for (std::size_t i = 0; i < rep.base.size(); ++i) out << (i ? ", " : "") << rep.base[i];
    out << ")\n";
    for (std::size_t t = 0; t < rep.tangents.size(); ++t) {
      out << "a" << t + 1 << ": (";
      for (std::size_t i = 0; i < rep.tangents[t].size(); ++i) out << (i ? ", " : "") << rep.tangents[t][i];
      out << ")\n";
    }
    detail::print_table(out, "boundary integral", r.lhs);
    detail::print_table(out, "integral of d(form)", r.rhs);
    out << "top_residual: " << rep.top_residual << "\n";
    out << "lower_order_max: " << rep.lower_order_max << "\n";
    out << "result: " << (rep.pass ? "PASS" : "FAIL") << "\n";
  }
  return rep.pass ? exit_pass : exit_fail;
}

inline int cmd_vcalc(const Options& o, std::ostream& out) {
  if (o.dim != 3) throw UsageError("vcalc works on R^3 only");
  auto field = [](const std::string& text, const char* name) {
    if (text.empty()) throw UsageError(std::string("vcalc needs ") + name);
    return parse_scalar(text, 3);
  };
  std::string result;
  if (o.vcalc_op == "grad") {
    result = to_string(grad(field(o.f, "--f")));
  } else {
    VectorField3 F{{field(o.fx, "--fx"), field(o.fy, "--fy"), field(o.fz, "--fz")}};
    if (o.vcalc_op == "curl") result = to_string(curl(F));
    else if (o.vcalc_op == "div") result = to_string(div(F));
    else throw UsageError("unknown vcalc operation '" + o.vcalc_op + "' (grad, curl or div)");
  }
  if (o.json) {
    nlohmann::ordered_json j{{"command", "vcalc"}, {"op", o.vcalc_op}, {"result", result}};
    out << j.dump(2) << "\n";
  } else {
    out << result << "\n";
  }
  return exit_pass;
}

inline int cmd_check(const Options& o, std::ostream& out) {
  SweepConfig cfg;
  cfg.dim = o.dim;
  cfg.degrees = detail::parse_degrees(o.degrees);
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.backend = parse_backend(o.backend);
  cfg.tol = Tolerance{o.tol, 1e-12};
  if (o.pool.empty()) cfg.pool = cfg.backend == Backend::rational ? FieldPool::polynomial : FieldPool::transcendental;
  else if (o.pool == "polynomial") cfg.pool = FieldPool::polynomial;
  else if (o.pool == "transcendental") cfg.pool = FieldPool::transcendental;
  else throw UsageError("unknown pool '" + o.pool + "' (polynomial or transcendental)");
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  SweepSummary s = sweep(cfg);
  if (o.json) {
    out << sweep_json(s).dump(2) << "\n";
  } else {
    out << "check: dim=" << cfg.dim << " backend=" << backend_name(cfg.backend)
        << " pool=" << (cfg.pool == FieldPool::polynomial ? "polynomial" : "transcendental") << " seed=" << cfg.seed
        << " trials=" << cfg.trials << "\n";
    for (const auto& d : s.degrees) {
      out << "  k=" << d.degree << ": stokes " << d.trials - d.stokes_failures << "/" << d.trials << ", extraction "
          << d.trials - d.extraction_failures << "/" << d.trials << ", alternating " << d.trials - d.alternating_failures << "/"
          << d.trials << ", dd " << d.dd_checked - d.dd_failures << "/" << d.dd_checked
          << ", max top residual " << ScalarTraits<double>::to_string(d.max_top_residual) << ", max lower-order "
          << ScalarTraits<double>::to_string(d.max_lower_order) << "\n";
    }
    for (const auto& f : s.failures)
      out << "  FAIL k=" << f.degree << " trial=" << f.trial << " [" << f.check << "] " << f.form << ": " << f.detail << "\n";
    out << "result: " << (s.passed() ? "PASS" : "FAIL") << "\n";
  }
  return s.passed() ? exit_pass : exit_fail;
}

/// Runs one command line (args excludes the program name).
inline int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Differential forms over nilpotent infinitesimals", "nilforms"};
  app.require_subcommand(1);

  auto common = [&o](CLI::App* sub, bool with_backend) {
    sub->add_option("--dim", o.dim, "ambient dimension n")->check(CLI::Range(1, 16));
    if (with_backend) {
      sub->add_option("--backend", o.backend, "float or rational")->check(CLI::IsMember({"float", "rational"}));
      sub->add_option("--tol", o.tol, "relative tolerance on the float backend")->check(CLI::PositiveNumber);
      sub->add_option("--seed", o.seed, "random seed");
    }
    sub->add_flag("--json", o.json, "machine-readable output");
  };

  auto* d = app.add_subcommand("d", "exterior derivative by the closed formula");
  common(d, false);
  d->add_option("--form", o.form, "form expression, e.g. \"-y*dx + x*dy\"")->required();
  d->add_flag("--allow-top", o.allow_top, "d of a top-degree form prints 0 instead of failing");

  auto* ev = app.add_subcommand("eval", "evaluate a form at a point on tangent vectors");
  common(ev, true);
  ev->add_option("--form", o.form, "form expression")->required();
  ev->add_option("--at", o.at, "point, comma separated")->required();
  ev->add_option("--tangents", o.tangents, "tangent vectors, ';' separated");

  auto* st = app.add_subcommand("stokes", "check the infinitesimal Stokes identity on one microcube");
  common(st, true);
  st->add_option("--form", o.form, "form expression");
  st->add_option("--base", o.base, "base point (default: origin)");
  st->add_option("--tangents", o.tangents, "k+1 tangent vectors, ';' separated (default: e1..e(k+1))");
  st->add_option("--rhs-form", o.rhs_form, "use this (k+1)-form instead of d(form)");
  st->add_option("--random-degree", o.random_degree, "draw a random form of this degree from --seed");

  auto* vc = app.add_subcommand("vcalc", "grad, curl and div through forms on R^3");
  common(vc, false);
  vc->add_option("op", o.vcalc_op, "grad | curl | div")->required()->check(CLI::IsMember({"grad", "curl", "div"}));
  vc->add_option("--f", o.f, "scalar field (grad)");
  vc->add_option("--fx", o.fx, "x component (curl, div)");
  vc->add_option("--fy", o.fy, "y component (curl, div)");
  vc->add_option("--fz", o.fz, "z component (curl, div)");

  auto* ck = app.add_subcommand("check", "randomized sweep over every identity");
  common(ck, true);
  ck->add_option("--degrees", o.degrees, "degrees, e.g. 0..2 or 0,1,2");
  ck->add_option("--trials", o.trials, "trials per degree");
  ck->add_option("--pool", o.pool, "polynomial or transcendental (default by backend)");

  std::vector<std::string> args = detail::glue_expression_values(raw_args);
  std::vector<std::string> argv_store{"nilforms"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_pass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_pass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }

  try {
    if (*d) return cmd_d(o, out, err);
    if (*vc) return cmd_vcalc(o, out);
    if (*ck) return cmd_check(o, out);
    const Backend b = parse_backend(o.backend);
    if (*ev) return detail::with_backend(b, [&](auto tag) { return cmd_eval<decltype(tag)>(o, out, err); });
    if (*st) return detail::with_backend(b, [&](auto tag) { return cmd_stokes<decltype(tag)>(o, out, err); });
  } catch (const VerificationError& e) {
    err << "verification error: " << e.what() << "\n";
    return exit_fail;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace nilforms::cli
