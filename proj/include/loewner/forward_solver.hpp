#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "loewner/core.hpp"

namespace loewner {

struct Survived {
  ComplexPoint g;
};

struct SwallowedAt {
  double t_swallow;
};

using EvolveOutcome = std::variant<Survived, SwallowedAt>;

/// g_{t_end}(z) for the Loewner flow dg/dt = sum_j 2 p_j / (g - xi_j(t)), g_0 = z
/// (a single unit atom at xi(t) for pointwise drivers).
///
/// Integration is classical RK4 on the displacement g - z with step halving
/// while |g - xi| < 10 sqrt(h). A point is swallowed once |g - xi| drops below
/// cfg.swallow_threshold, or once the step is pinned at cfg.dt_min while the
/// point still closes in on the singularity (the remaining time to contact is
/// then below |g - xi|^2 / 4, which is under the time resolution).
///
/// Points in the lower half-plane are accepted and evolve as the mirror images
/// of their conjugates.
EvolveOutcome evolve_point(ComplexPoint z, const Driver& d, double t_end, const SolverConfig& cfg);

/// Flow run on the negative time axis: h(0) = w, dh/ds = -sum_j 2 p_j / (h - xi_j(s))
/// for s in [0, s_end], i.e. g_{-s_end}(w) when the driver stores xi(-s) as a
/// function of s >= 0 (the Kufarev convention). This is also the inverse map
/// f_T = g_T^{-1} of the forward flow whose driver is t -> xi(T - t).
EvolveOutcome evolve_point_negative_time(ComplexPoint w, const Driver& d, double s_end,
                                         const SolverConfig& cfg);

struct GridEntry {
  std::optional<EvolveOutcome> outcome;
  std::string error;  // set when outcome is empty
};

/// evolve_point on every entry; failures are recorded per entry.
std::vector<GridEntry> evolve_grid(std::span<const ComplexPoint> zs, const Driver& d, double t_end,
                                   const SolverConfig& cfg);

/// Half-plane capacity at time t from the far-field expansion g = z + c/z + ...,
/// averaging Re[(g(z) - z) z] over z = R e^{i pi/4}, R i, R e^{3 i pi/4}.
/// Throws Degenerate when the three estimates spread by more than 10%.
double estimate_capacity(const Driver& d, double t, const SolverConfig& cfg);

}  // namespace loewner
