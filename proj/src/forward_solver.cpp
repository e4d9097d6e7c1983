#include "loewner/forward_solver.hpp"

#include <algorithm>
#include <cmath>

#include "loewner/parallel.hpp"

namespace loewner {
namespace {

// Consecutive steps allowed at the dt_min floor before giving up.
constexpr long kMaxFloorSteps = 100000;

// Right-hand side of the (measure) Loewner flow, multiplied by `sign`.
class Flow {
 public:
  Flow(const Driver& d, double sign) : driver_(d), sign_(sign) {
    if (d.is_measure()) atoms_ = d.atoms();
  }

  ComplexPoint rhs(double t, ComplexPoint g) const {
    if (atoms_.empty()) return sign_ * 2.0 / (g - driver_eval(driver_, t));
    ComplexPoint sum = 0.0;
    for (const auto& a : atoms_) sum += 2.0 * a.weight / (g - a.point);
    return sign_ * sum;
  }

  // Offset from the nearest singular point, and that point's weight and drift.
  struct Nearest {
    ComplexPoint offset;
    double weight;
    double drift;
  };

  Nearest nearest(double t, ComplexPoint g, double probe) const {
    if (atoms_.empty()) {
      const double xi = driver_eval(driver_, t);
      double drift = 0.0;
      if (probe > 0.0) drift = (driver_eval(driver_, t + probe) - xi) / probe;
      return {g - xi, 1.0, drift};
    }
    Nearest best{g - atoms_.front().point, atoms_.front().weight, 0.0};
    for (const auto& a : atoms_) {
      if (a.weight > 0.0 && std::abs(g - a.point) < std::abs(best.offset)) {
        best = {g - a.point, a.weight, 0.0};
      }
    }
    return best;
  }

  double sign() const { return sign_; }

 private:
  const Driver& driver_;
  std::vector<Atom> atoms_;
  double sign_;
};

bool finite(ComplexPoint z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

EvolveOutcome integrate(ComplexPoint z, const Driver& d, double t_end, const SolverConfig& cfg,
                        double sign) {
  cfg.check();
  if (!finite(z)) throw LoewnerError(ErrorCode::InvalidArgument, "initial point must be finite");
  if (!std::isfinite(t_end) || t_end < 0.0)
    throw LoewnerError(ErrorCode::OutOfDomain, "end time must be nonnegative");
  if (d.is_pointwise()) {
    driver_eval(d, 0.0);
    driver_eval(d, t_end);
  }
  const Flow flow(d, sign);

  ComplexPoint u = 0.0;  // displacement g - z keeps far-field differences accurate
  double t = 0.0;
  long floor_steps = 0;
  const double t_eps = 1e-15 * std::max(1.0, t_end);

  while (t_end - t > t_eps) {
    const ComplexPoint g = z + u;
    const double remaining = t_end - t;
    const auto near = flow.nearest(t, g, std::min(cfg.dt, remaining));
    const double dist = std::abs(near.offset);
    if (dist < cfg.swallow_threshold) return SwallowedAt{t};

    double h = std::min(cfg.dt, remaining);
    while (dist < 10.0 * std::sqrt(h) && h * 0.5 >= cfg.dt_min) h *= 0.5;

    if (dist < 10.0 * std::sqrt(h)) {
      // Pinned at the floor: d|v|^2/dt = sign 4p cos(2 arg v) - 2 Re(v) xi'.
      const double arg = std::arg(near.offset);
      const double closing =
          sign * 4.0 * near.weight * std::cos(2.0 * arg) - 2.0 * near.offset.real() * near.drift;
      if (closing < 0.0) return SwallowedAt{std::min(t_end, t + dist * dist / -closing)};
      if (++floor_steps > kMaxFloorSteps)
        throw LoewnerError(ErrorCode::StepUnderflow,
                           "step pinned at dt_min without reaching the swallow threshold");
    } else {
      floor_steps = 0;
    }

    for (;;) {
      const ComplexPoint k1 = flow.rhs(t, z + u);
      const ComplexPoint k2 = flow.rhs(t + 0.5 * h, z + u + 0.5 * h * k1);
      const ComplexPoint k3 = flow.rhs(t + 0.5 * h, z + u + 0.5 * h * k2);
      const ComplexPoint k4 = flow.rhs(t + h, z + u + h * k3);
      const ComplexPoint next = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (finite(next)) {
        u = next;
        break;
      }
      if (h * 0.5 < cfg.dt_min) return SwallowedAt{t};
      h *= 0.5;
    }
    t += h;
  }

  const ComplexPoint g = z + u;
  if (std::abs(flow.nearest(t_end, g, 0.0).offset) < cfg.swallow_threshold) return SwallowedAt{t_end};
  return Survived{g};
}

}  // namespace

EvolveOutcome evolve_point(ComplexPoint z, const Driver& d, double t_end, const SolverConfig& cfg) {
  return integrate(z, d, t_end, cfg, 1.0);
}

EvolveOutcome evolve_point_negative_time(ComplexPoint w, const Driver& d, double s_end,
                                         const SolverConfig& cfg) {
  return integrate(w, d, s_end, cfg, -1.0);
}

std::vector<GridEntry> evolve_grid(std::span<const ComplexPoint> zs, const Driver& d, double t_end,
                                   const SolverConfig& cfg) {
  std::vector<GridEntry> out(zs.size());
  detail::parallel_for(zs.size(), [&](std::size_t i) {
    try {
      out[i].outcome = evolve_point(zs[i], d, t_end, cfg);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

double estimate_capacity(const Driver& d, double t, const SolverConfig& cfg) {
  cfg.check();
  const double R = cfg.far_field_radius;
  const double angles[] = {kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0};
  double est[3];
  for (int k = 0; k < 3; ++k) {
    const ComplexPoint z = std::polar(R, angles[k]);
    const auto out = evolve_point(z, d, t, cfg);
    const auto* s = std::get_if<Survived>(&out);
    if (s == nullptr)
      throw LoewnerError(ErrorCode::Degenerate, "far-field point was swallowed; increase R");
    est[k] = ((s->g - z) * z).real();
  }
  const double mean = (est[0] + est[1] + est[2]) / 3.0;
  const double spread = std::max({est[0], est[1], est[2]}) - std::min({est[0], est[1], est[2]});
  if (spread > 0.1 * std::abs(mean) && spread > 1e-9)
    throw LoewnerError(ErrorCode::Degenerate,
                       "far-field capacity estimates disagree by more than 10%; increase R");
  return mean;
}

}  // namespace loewner
