#pragma once

// Closed-form maps, implicit trace relations, parametric traces and asymptotic
// expansions for the exactly solvable driving functions. This layer is the
// reference that numerical traces are validated against.

#include <span>
#include <utility>
#include <vector>

#include "loewner/core.hpp"
#include "loewner/trace_engine.hpp"

namespace loewner::exact {

// ---------------------------------------------------------------- constant ---

/// g_t(z) = A + sqrt((z - A)^2 + 4t), the map removing the vertical slit
/// [A, A + 2i sqrt(t)]. The root is taken in the upper half-plane; on the real
/// axis it follows the side of the slit (so A - 0 maps to A - 2 sqrt(t)).
/// Lower half-plane points are handled by reflection. Throws PointOnSlit on the
/// open slit.
ComplexPoint constant_map(ComplexPoint z, double A, double t);

/// f_t(w) = A + sqrt((w - A)^2 - 4t), inverse of constant_map for Im w >= 0.
ComplexPoint constant_inverse(ComplexPoint w, double A, double t);

/// A + 2i sqrt(t).
ComplexPoint constant_trace_point(double A, double t);

// ------------------------------------------------------------------ linear ---

struct ParametricSample {
  double phi;
  double t;
  ComplexPoint z;
  double r;  // modulus variable, 0 when the family has none
};

/// F(h) = h + 2 ln(2 - h), principal branch. Throws PoleAt2 at h = 2.
ComplexPoint linear_F(ComplexPoint h);

/// Trace for xi(t) = t in terms of phi in (0, pi):
///   z = 2 - 2 phi cot(phi) + 2 i phi,  r = 2 phi / sin(phi),
///   t = 2 ln r - r cos(phi) - 2 ln 2 + 2.
ParametricSample linear_trace(double phi);

/// The same trace at a given time, by inverting t(phi).
ParametricSample linear_trace_at_time(double t);

/// 2i sqrt(t) + (2/3) t, valid for t << 1.
ComplexPoint linear_asymptote_small(double t);

/// t - 2 ln((t - 2)/2) + 2 pi i; rejects t <= 2.
ComplexPoint linear_asymptote_large(double t);

// ------------------------------------------------------------- square root ---

enum class SqrtRegime { Up, DownSpiral, DownCritical, DownIntersect };

struct SqrtRoots {
  ComplexPoint y_plus;
  ComplexPoint y_minus;
  SqrtRegime regime;
};

/// y = sqrt(kappa) +- sqrt(kappa + 4) for xi = 2 sqrt(kappa t).
SqrtRoots sqrt_roots_up(double kappa);

/// y = sqrt(kappa) +- sqrt(kappa - 4) for xi = 2 sqrt(kappa (1 - t)); complex
/// conjugate pair (y_plus in the upper half-plane) when kappa < 4.
SqrtRoots sqrt_roots_down(double kappa);

/// Angle of the straight trace for xi = 2 sqrt(kappa t):
/// theta = (pi/2)(1 - sqrt(kappa)/sqrt(kappa + 4)).
double sqrt_up_angle(double kappa);

/// Coefficient B of the trace z_c(t) = B sqrt(t).
ComplexPoint sqrt_up_coefficient(double kappa);

/// H(G) = [2 y+ ln(G - y-) - 2 y- ln(G - y+)] / (y+ - y-), with each logarithm
/// shifted by 2 pi i times the matching winding number
/// (winding.first for ln(G - y-), winding.second for ln(G - y+)).
ComplexPoint sqrt_H(ComplexPoint G, const SqrtRoots& roots, std::pair<int, int> winding = {0, 0});

/// Real and imaginary parts of H for the spiral regime (kappa < 4) written out
/// with principal arguments; an independent coding of sqrt_H.
ComplexPoint sqrt_H_spiral_parts(ComplexPoint z, double kappa);

/// H(z_c(t)) - ln(1 - t) - H(2 sqrt(kappa)) for xi = 2 sqrt(kappa (1 - t)),
/// which vanishes up to branch terms along the trace. `winding` as in sqrt_H.
ComplexPoint sqrt_down_residual(ComplexPoint z, double t, double kappa,
                                std::pair<int, int> winding = {0, 0});

struct SpiralAsymptote {
  double log_radius;  // ln |z_c - y+|
  double angle;       // Arg(z_c - y+), unwrapped
};

/// Constants A(kappa), B(kappa) of the spiral asymptote, using Arg(y+) in (0, pi).
std::pair<double, double> spiral_constants(double kappa);

/// ln|z_c - y+| ~ [A + (4 - kappa) ln(1 - t)] / 4 and
/// Arg(z_c - y+) ~ [B - sqrt(kappa (4 - kappa)) ln(1 - t)] / 4, for 0 < kappa < 4
/// and t near 1.
SpiralAsymptote spiral_asymptote(double kappa, double t);

/// Angle at which the trace for kappa >= 4 meets the real axis:
/// pi (sqrt(kappa) - sqrt(kappa - 4)) / (sqrt(kappa) + sqrt(kappa - 4)).
double intersection_angle(double kappa);

/// kappa = 4 trace: z = 2 + sin(2 phi)/phi + 2i sin^2(phi)/phi for phi in (0, pi),
/// with t = 1 - (r^2/4) exp(4 cos(phi)/r - 2), r = 2 sin(phi)/phi.
ParametricSample critical_trace(double phi);

ParametricSample critical_trace_at_time(double t);

// --------------------------------------------------------------------- arc ---

/// f_s(z) = sqrt(a^2 - 4z/(z+1)^2), a = 1/cos(s/2), root in the upper half-plane.
ComplexPoint arc_f(ComplexPoint z, double s);

/// psi_s(z) = (1/a^2)(a + f_s)/(a - f_s), taking H minus the arc {e^{iu}: u <= s} onto H.
ComplexPoint arc_psi(ComplexPoint z, double s);

/// Normalized map g_t for the growing unit arc, t in [0, 1/2]. The square root is
/// continued from t = 0 (where it equals z - 1). At t = 1/2 the hull is the
/// closed unit half-disk and g = z + 1/z.
ComplexPoint arc_g(ComplexPoint z, double t);

/// t(s) = (1 - cos^4(s/2)) / 2.
double arc_time(double s);

/// s(t) = 2 arccos((1 - 2t)^{1/4}).
double arc_time_inverse(double t);

/// Point e^{i s(t)} of the arc trace.
ComplexPoint arc_trace_point(double t);

/// Forward map at time T of the driver t -> 3 sqrt(2(T - t)): the half-disk map
/// z -> z + 2T / (z - 2 sqrt(2T)), obtained from arc_g at t = 1/2 by rescaling
/// and translation.
ComplexPoint kufarev_forward_map(ComplexPoint z, double T);

/// max over the grid of |g_{-T}(g_T(z)) - z|, where g_{-T} is integrated
/// numerically from the Kufarev driver xi(-s) = 3 sqrt(2s) and g_T is the exact
/// half-disk map. T in (0, 1/2].
double kufarev_check(double T, std::span<const ComplexPoint> grid, const SolverConfig& cfg);

/// g_{-T}(x + i eps) for real x: points tracing the boundary of the removed
/// half-disk of radius sqrt(2T) centered at 2 sqrt(2T) when 0 < x < 4 sqrt(2T).
std::vector<ComplexPoint> kufarev_boundary(double T, std::span<const double> xs, double eps,
                                           const SolverConfig& cfg);

// --------------------------------------------------------------- two-point ---

struct TwoPointSample {
  double phi;
  double t;
  ComplexPoint z_plus;
  ComplexPoint z_minus;
};

/// z+ = sqrt(2 phi / sin(2 phi)) (cos phi + i sin phi), z- = -conj(z+),
/// t = (1 - 2 phi cot(2 phi) + ln(2 phi / sin(2 phi))) / 4, phi in (0, pi/2).
TwoPointSample two_point_trace(double phi);

TwoPointSample two_point_trace_at_time(double t);

/// +-1 + i sqrt(2t) -+ t/3.
std::pair<ComplexPoint, ComplexPoint> two_point_asymptote_small(double t);

/// i sqrt((4t - 1) - ln(4t - 1)) +- pi / (2 sqrt(4t - 1)); rejects t <= 1/4.
std::pair<ComplexPoint, ComplexPoint> two_point_asymptote_large(double t);

/// Residual of g^2/2 - ln g = 2t + z^2/2 - ln z with g = +1 at z = z+.
ComplexPoint two_point_residual(ComplexPoint z_plus, double t);

// ------------------------------------------------------------ exact traces ---

Trace exact_constant_trace(double A, std::span<const double> times);
Trace exact_linear_trace(std::span<const double> phis);
Trace exact_sqrt_up_trace(double kappa, std::span<const double> times);
/// Spiral asymptote z = y+ + exp(log_radius + i angle), kappa in (0, 4).
Trace exact_spiral_trace(double kappa, std::span<const double> times);
Trace exact_critical_trace(std::span<const double> phis);
Trace exact_arc_trace(std::span<const double> times);
/// Two traces: minus branch first, then plus.
std::vector<Trace> exact_two_point_traces(std::span<const double> phis);

}  // namespace loewner::exact
