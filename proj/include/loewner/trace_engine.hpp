#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "loewner/core.hpp"

namespace loewner {

enum class TraceSource { BackwardEuler, ExactSlit, ExactFormula };

std::string to_string(TraceSource s);

struct TraceSample {
  double t;
  ComplexPoint z;
  /// Set when some backward step moved g by more than 100 sqrt(dt): the root
  /// continuation is suspect there (glancing approach to the real axis).
  bool flagged = false;
};

/// Sampled trace z_c(t) of one driver, ordered by strictly increasing t.
struct Trace {
  std::vector<TraceSample> samples;
  TraceSource source = TraceSource::BackwardEuler;
  /// Exact family name when source == ExactFormula.
  std::string exact_family;
  Driver driver = Driver::constant(0.0);
  /// For measure drivers: index of the atom the trace grows from.
  std::optional<std::size_t> atom;

  /// "plus"/"minus" for the two-point measure, "atom<j>" for other measures,
  /// empty for single traces.
  std::string branch_label() const;
};

/// Chooses between the two roots of a backward step. UpperHalfPlane keeps the
/// root with the larger imaginary part; ContinuityWithPrevious keeps the root
/// nearer `previous`. Ties go to the larger imaginary part, then the larger
/// real part.
ComplexPoint select_root(std::pair<ComplexPoint, ComplexPoint> candidates, ComplexPoint previous,
                         RootPolicy policy);

/// Backward integration of the first-order scheme g_t = g_{t-h} + 2h / (g_{t-h} - xi(t-h))
/// from g_t = xi(t) down to time 0, one independent pass per requested time.
/// Each pass uses N = ceil(t / cfg.dt) equal steps. Pointwise drivers only.
Trace trace_backward_euler(const Driver& d, std::span<const double> times, const SolverConfig& cfg);

/// Backward composition of exact constant-forcing slit maps: each step applies
/// w -> xi(t-h) + sqrt((w - xi(t-h))^2 - 4h). Exact for piecewise-constant
/// forcing. Pointwise drivers only.
Trace trace_exact_slit(const Driver& d, std::span<const double> times, const SolverConfig& cfg);

/// Traces of a measure driver, one per atom. Each sample starts at g = xi_j at
/// time t and steps back through the implicit relation
/// g_t = g_{t-h} + h sum_k 2 p_k / (g_{t-h} - xi_k), solved by Newton's method.
std::vector<Trace> trace_measure(const Driver& d, std::span<const double> times,
                                 const SolverConfig& cfg);

enum class TraceMethod { Euler, Slit };

/// Dispatch helper: pointwise drivers go to the chosen scheme and yield one
/// trace, measure drivers go to trace_measure.
std::vector<Trace> compute_traces(const Driver& d, std::span<const double> times,
                                  const SolverConfig& cfg, TraceMethod method);

/// Largest time a trace of `d` may be requested at under `cfg`.
double trace_time_limit(const Driver& d, const SolverConfig& cfg);

}  // namespace loewner
