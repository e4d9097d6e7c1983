#pragma once

// Quantitative cross-checks of the numerical solvers against the exact
// solutions, collected into a JSON-serializable report.

#include <span>
#include <string>
#include <vector>

#include "loewner/core.hpp"
#include "loewner/trace_engine.hpp"

namespace loewner {

struct CheckResult {
  std::string name;
  double metric = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string details;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool overall = true;

  void add(CheckResult r);
};

/// {"checks":[{"name","metric","tolerance","passed","details"}],"overall":bool}
std::string report_to_json(const ValidationReport& report, int indent = 2);

struct TraceDeviation {
  double max_dev;
  double mean_dev;
};

/// Deviation of `a` from `b`, with `b` linearly interpolated onto the sample
/// times of `a` that fall inside b's time range. Throws DisjointRanges if no
/// sample of `a` does.
TraceDeviation compare_traces(const Trace& a, const Trace& b);

/// Direction angle of the total least squares line through the first sample,
/// oriented toward the later samples. Needs at least 10 samples.
double fit_line_angle(const Trace& tr);

struct CircleFit {
  ComplexPoint center;
  double radius;
  double max_residual;  // max | |z - center| - radius |
};

/// Algebraic (Kasa) circle fit. Throws Degenerate for collinear samples.
CircleFit fit_circle(const Trace& tr);

/// Least squares B in z(t) - z(0) = B sqrt(t).
ComplexPoint fit_sqrt_coefficient(const Trace& tr);

/// Registered check names in run order.
const std::vector<std::string>& check_names();

/// Runs the named checks ("all" expands to the whole registry) in registry
/// order. Throws UnknownCheck for names outside the registry.
ValidationReport run_suite(std::span<const std::string> names, const SolverConfig& cfg);

}  // namespace loewner
