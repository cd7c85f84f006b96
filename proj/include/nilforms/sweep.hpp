#pragma once

// Batch driver: random forms and microcubes through every identity the
// engine claims (Stokes on microcubes, extraction equivalence, skewness of the
// boundary functional, d o d = 0). Deterministic for a given seed; each trial
// draws from its own stream.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "nilforms/extraction.hpp"
#include "nilforms/forms.hpp"
#include "nilforms/random.hpp"
#include "nilforms/stokes.hpp"

namespace nilforms {

struct SweepConfig {
  int dim = 3;
  std::vector<int> degrees{0, 1, 2};
  int trials = 50;
  std::uint64_t seed = 42;
  Backend backend = Backend::rational;
  FieldPool pool = FieldPool::polynomial;
  Tolerance tol;
  int alternating_probes = 5;

  void validate() const {
    if (trials < 1) throw Error("trials must be at least 1");
    if (dim < 1 || dim > 6) throw Error("dimension must be in 1..6");
    if (degrees.empty()) throw Error("no degrees to check");
    for (int k : degrees)
      if (k < 0 || k + 1 > dim)
        throw Error("degree " + std::to_string(k) + " needs k >= 0 and k + 1 <= dim (" + std::to_string(dim) + ")");
    if (alternating_probes < 1) throw Error("alternating probes must be at least 1");
    if (backend == Backend::rational && pool == FieldPool::transcendental)
      throw Error("the transcendental field pool needs the float backend");
  }
};

struct DegreeSummary {
  int degree = 0;
  int trials = 0;
  int stokes_failures = 0;
  int extraction_failures = 0;
  int alternating_failures = 0;
  int dd_checked = 0;
  int dd_failures = 0;
  double max_top_residual = 0;
  double max_lower_order = 0;
  double max_extraction_error = 0;
  double max_dd = 0;

  int failures() const { return stokes_failures + extraction_failures + alternating_failures + dd_failures; }
};

struct SweepFailure {
  int degree = 0;
  int trial = 0;
  std::string check;  // stokes | extraction | alternating | dd | error
  std::string form;
  std::string detail;
};

struct SweepSummary {
  SweepConfig config;
  std::vector<DegreeSummary> degrees;
  std::vector<SweepFailure> failures;  // the first few, with details

  bool passed() const {
    return std::all_of(degrees.begin(), degrees.end(), [](const DegreeSummary& d) { return d.failures() == 0; });
  }
};

namespace detail {

inline constexpr std::size_t max_recorded_failures = 20;

template <Scalar S>
bool within(double err, double scale, const Tolerance& tol) {
  if constexpr (ScalarTraits<S>::exact) return err == 0.0;
  else return err <= std::max(tol.rel_tol * scale, tol.abs_floor);
}

template <Scalar S>
void run_trial(const SweepConfig& cfg, int k, int trial, DegreeSummary& sum, std::vector<SweepFailure>& failures) {
  const int n = cfg.dim;
  Rng rng = split_rng(cfg.seed, n, k, trial);
  const DifferentialForm w = random_form(n, k, rng, cfg.pool);
  const Vector<S> x = random_point<S>(n, rng);
  const auto tangents = random_tangents<S>(n, k + 1, rng);
  auto record = [&](const std::string& check, const std::string& detail) {
    if (failures.size() < max_recorded_failures) failures.push_back({k, trial, check, to_string(w), detail});
  };

  try {
    // Stokes on a random microcube.
    auto report = verify<S>(w, x, tangents, cfg.tol);
    sum.max_top_residual = std::max(sum.max_top_residual, ScalarTraits<S>::magnitude(report.top_residual));
    sum.max_lower_order = std::max(sum.max_lower_order, ScalarTraits<S>::magnitude(report.lower_order_max));
    if (!report.pass) {
      ++sum.stokes_failures;
      record("stokes", "lhs = " + report.lhs.to_string() + "; rhs = " + report.rhs.to_string());
    }

    // Extraction from boundary integrals versus the closed formula.
    const DifferentialForm dw = d_formula(w);
    auto extracted = d_extracted<S>(w, x, cfg.tol.rel_tol);
    auto formula = pointwise<S>(dw, x);
    double err = 0, scale = 0;
    for (std::size_t i = 0; i < extracted.coefficients().size(); ++i) {
      err = std::max(err, ScalarTraits<S>::magnitude(S(extracted.coefficients()[i] - formula.coefficients()[i])));
      scale = std::max(scale, ScalarTraits<S>::magnitude(formula.coefficients()[i]));
    }
    sum.max_extraction_error = std::max(sum.max_extraction_error, err);
    if (!within<S>(err, scale, cfg.tol)) {
      ++sum.extraction_failures;
      record("extraction", "extracted " + extracted.to_string() + " vs formula " + formula.to_string());
    }

    // The boundary functional is skew and multilinear.
    auto alt = check_alternating<S>(boundary_functional<S>(w, x, cfg.tol.rel_tol), n, k + 1, cfg.alternating_probes,
                                    cfg.seed ^ (static_cast<std::uint64_t>(trial) << 20 | static_cast<std::uint64_t>(k)),
                                    cfg.tol.rel_tol);
    if (!alt.passed()) {
      ++sum.alternating_failures;
      record("alternating", "additivity " + std::to_string(alt.additivity) + ", homogeneity " + std::to_string(alt.homogeneity) +
                                ", skew " + std::to_string(alt.skew));
    }

    // d o d = 0 at the same point.
    if (k + 2 <= n) {
      ++sum.dd_checked;
      const DifferentialForm ddw = d_formula(dw);
      double worst = 0, dd_scale = 1;
      for (const auto& [idx, f] : ddw.terms()) worst = std::max(worst, ScalarTraits<S>::magnitude(eval_field<S>(f, x)));
      if constexpr (!ScalarTraits<S>::exact) {
        for (const auto& [idx, f] : w.terms())
          for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
              dd_scale = std::max(dd_scale, std::fabs(eval_field<S>(diff_symbolic(diff_symbolic(f, i), j), x)));
      }
      sum.max_dd = std::max(sum.max_dd, worst);
      if (!within<S>(worst, dd_scale, cfg.tol)) {
        ++sum.dd_failures;
        record("dd", "d(d(omega)) = " + to_string(ddw) + " evaluates to " + std::to_string(worst));
      }
    }
  } catch (const Error& e) {
    ++sum.stokes_failures;
    record("error", e.what());
  }
}

template <Scalar S>
SweepSummary run_sweep(const SweepConfig& cfg) {
  SweepSummary out;
  out.config = cfg;
  for (int k : cfg.degrees) {
    DegreeSummary sum;
    sum.degree = k;
    sum.trials = cfg.trials;
    for (int t = 0; t < cfg.trials; ++t) run_trial<S>(cfg, k, t, sum, out.failures);
    out.degrees.push_back(sum);
  }
  return out;
}

}  // namespace detail

inline SweepSummary sweep(const SweepConfig& cfg) {
  cfg.validate();
  if (cfg.backend == Backend::rational) return detail::run_sweep<Rational>(cfg);
  return detail::run_sweep<double>(cfg);
}

}  // namespace nilforms
