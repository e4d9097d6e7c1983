#include "loewner/trace_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "loewner/parallel.hpp"

namespace loewner {

std::string to_string(TraceSource s) {
  switch (s) {
    case TraceSource::BackwardEuler: return "BackwardEuler";
    case TraceSource::ExactSlit: return "ExactSlit";
    case TraceSource::ExactFormula: return "ExactFormula";
  }
  return "Unknown";
}

std::string Trace::branch_label() const {
  if (!atom) return {};
  if (std::holds_alternative<family::TwoPoint>(driver.family())) return *atom == 0 ? "minus" : "plus";
  return "atom" + std::to_string(*atom);
}

ComplexPoint select_root(std::pair<ComplexPoint, ComplexPoint> candidates, ComplexPoint previous,
                         RootPolicy policy) {
  const auto [a, b] = candidates;
  auto tie_break = [](ComplexPoint x, ComplexPoint y) {
    if (x.imag() != y.imag()) return x.imag() > y.imag() ? x : y;
    return x.real() >= y.real() ? x : y;
  };
  if (policy == RootPolicy::UpperHalfPlane) return tie_break(a, b);
  const double da = std::abs(a - previous);
  const double db = std::abs(b - previous);
  if (da == db) return tie_break(a, b);
  return da < db ? a : b;
}

double trace_time_limit(const Driver& d, const SolverConfig& cfg) {
  if (!d.is_pointwise()) return kInf;
  const double tmax = d.t_max();
  if (d.has_terminal_singularity()) return tmax * (1.0 - cfg.endpoint_cutoff);
  return tmax;
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void check_times(const Driver& d, std::span<const double> times, const SolverConfig& cfg) {
  cfg.check();
  const double lo = d.is_pointwise() ? d.t_min() : 0.0;
  const double hi = trace_time_limit(d, cfg);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (!std::isfinite(t) || t < lo || t > hi * (1.0 + 1e-12))
      throw LoewnerError(ErrorCode::OutOfDomain,
                         "trace time " + fmt(t) + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
    if (i > 0 && !(t > times[i - 1]))
      throw LoewnerError(ErrorCode::InvalidArgument, "trace times must be strictly increasing");
  }
  if (d.is_pointwise() && lo > 0.0)
    throw LoewnerError(ErrorCode::OutOfDomain, "driver must be defined from t = 0");
}

void require_pointwise(const Driver& d) {
  if (!d.is_pointwise())
    throw LoewnerError(ErrorCode::NotPointwise,
                       d.family_name() + " driver has no pointwise value; use trace_measure");
}

// Steps back over [0, t]; `step(w, xi_left, h, first)` returns g at the left
// end of a step given g at its right end.
template <class Step>
TraceSample backward_pass(const Driver& d, double t, const SolverConfig& cfg, Step&& step) {
  ComplexPoint w = driver_eval(d, t);
  if (t == 0.0) return {t, w, false};
  const auto n = static_cast<long>(std::ceil(t / cfg.dt - 1e-9));
  const double h = t / static_cast<double>(n);
  const double jump_limit = 100.0 * std::sqrt(cfg.dt);
  bool flagged = false;
  for (long k = n; k >= 1; --k) {
    const double xi_left = driver_eval(d, static_cast<double>(k - 1) * h);
    const ComplexPoint next = step(w, xi_left, h, k == n);
    if (std::abs(next - w) > jump_limit) flagged = true;
    w = next;
  }
  return {t, w, flagged};
}

RootPolicy policy_for(bool first, const SolverConfig& cfg) {
  return first ? RootPolicy::UpperHalfPlane : cfg.root_policy;
}

template <class Sampler>
Trace run_pointwise(const Driver& d, std::span<const double> times, const SolverConfig& cfg,
                    TraceSource source, Sampler&& sampler) {
  require_pointwise(d);
  check_times(d, times, cfg);
  Trace tr;
  tr.source = source;
  tr.driver = d;
  tr.samples.resize(times.size());
  detail::parallel_for(times.size(), [&](std::size_t i) { tr.samples[i] = sampler(times[i]); });
  return tr;
}

}  // namespace

Trace trace_backward_euler(const Driver& d, std::span<const double> times, const SolverConfig& cfg) {
  auto step = [&cfg](ComplexPoint w, double xi, double h, bool first) {
    // With u = g_{t-h} - xi and v = g_t - xi the scheme reads u^2 - v u + 2h = 0.
    const ComplexPoint v = w - xi;
    const ComplexPoint disc = std::sqrt(v * v - 8.0 * h);
    // Stable pair: the large root from the sum with matching sign, the small one
    // from the product u1 u2 = 2h.
    const ComplexPoint big = 0.5 * (std::real(std::conj(v) * disc) >= 0.0 ? v + disc : v - disc);
    const ComplexPoint small = big == 0.0 ? ComplexPoint(0.0) : 2.0 * h / big;
    const ComplexPoint u = select_root({big, small}, v, policy_for(first, cfg));
    return xi + u;
  };
  return run_pointwise(d, times, cfg, TraceSource::BackwardEuler,
                       [&](double t) { return backward_pass(d, t, cfg, step); });
}

Trace trace_exact_slit(const Driver& d, std::span<const double> times, const SolverConfig& cfg) {
  auto step = [&cfg](ComplexPoint w, double xi, double h, bool first) {
    const ComplexPoint v = w - xi;
    const ComplexPoint s = std::sqrt(v * v - 4.0 * h);
    return xi + select_root({s, -s}, v, policy_for(first, cfg));
  };
  return run_pointwise(d, times, cfg, TraceSource::ExactSlit,
                       [&](double t) { return backward_pass(d, t, cfg, step); });
}

std::vector<Trace> trace_measure(const Driver& d, std::span<const double> times,
                                 const SolverConfig& cfg) {
  const auto atoms = d.atoms();
  check_times(d, times, cfg);

  auto force = [&atoms](ComplexPoint g) {
    ComplexPoint f = 0.0, df = 0.0;
    for (const auto& a : atoms) {
      const ComplexPoint r = 1.0 / (g - a.point);
      f += 2.0 * a.weight * r;
      df -= 2.0 * a.weight * r * r;
    }
    return std::pair{f, df};
  };

  const double jump_limit = 100.0 * std::sqrt(cfg.dt);
  auto sample = [&](std::size_t j, double t) -> TraceSample {
    ComplexPoint w = atoms[j].point;
    if (t == 0.0) return {t, w, false};
    const auto n = static_cast<long>(std::ceil(t / cfg.dt - 1e-9));
    const double h = t / static_cast<double>(n);
    bool flagged = false;
    for (long k = n; k >= 1; --k) {
      // Solve x + h F(x) = w for the left-end value x.
      ComplexPoint x;
      if (k == n) {
        // Dominant balance near the atom: (x - xi_j)^2 = -2 p_j h.
        x = atoms[j].point + ComplexPoint(0.0, std::sqrt(2.0 * atoms[j].weight * h));
      } else {
        x = w - h * force(w).first;
      }
      bool converged = false;
      for (int it = 0; it < cfg.newton_max_iter; ++it) {
        const auto [f, df] = force(x);
        const ComplexPoint delta = (x + h * f - w) / (1.0 + h * df);
        x -= delta;
        if (std::abs(delta) <= cfg.newton_tol * std::max(1.0, std::abs(x))) {
          converged = true;
          break;
        }
      }
      if (!converged || !std::isfinite(x.real()) || !std::isfinite(x.imag()))
        throw LoewnerError(ErrorCode::NewtonFailure,
                           "implicit backward step did not converge at t=" + fmt(t));
      if (std::abs(x - w) > jump_limit) flagged = true;
      w = x;
    }
    return {t, w, flagged};
  };

  std::vector<Trace> out(atoms.size());
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    out[j].source = TraceSource::BackwardEuler;
    out[j].driver = d;
    out[j].atom = j;
    out[j].samples.resize(times.size());
  }
  detail::parallel_for(atoms.size() * times.size(), [&](std::size_t idx) {
    const std::size_t j = idx / times.size();
    const std::size_t i = idx % times.size();
    out[j].samples[i] = sample(j, times[i]);
  });
  return out;
}

std::vector<Trace> compute_traces(const Driver& d, std::span<const double> times,
                                  const SolverConfig& cfg, TraceMethod method) {
  if (d.is_measure()) return trace_measure(d, times, cfg);
  if (method == TraceMethod::Euler) return {trace_backward_euler(d, times, cfg)};
  return {trace_exact_slit(d, times, cfg)};
}

}  // namespace loewner
