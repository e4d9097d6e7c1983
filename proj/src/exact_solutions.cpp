#include "loewner/exact_solutions.hpp"

#include <cmath>
#include <sstream>

#include "loewner/forward_solver.hpp"

namespace loewner::exact {
namespace {

const ComplexPoint kI{0.0, 1.0};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

[[noreturn]] void out_of_domain(const std::string& what) {
  throw LoewnerError(ErrorCode::OutOfDomain, what);
}

// Root of radicand in the upper half-plane; on the real line the sign follows
// `side` so that the two edges of a slit stay apart.
ComplexPoint upper_root(ComplexPoint radicand, double side) {
  ComplexPoint s = std::sqrt(radicand);
  if (s.imag() < 0.0) return -s;
  if (s.imag() == 0.0 && std::signbit(side) != std::signbit(s.real())) return -s;
  return s;
}

// Solves f(x) = target for increasing f on (lo, hi) by bisection to full
// precision.
template <class F>
double invert_increasing(F&& f, double lo, double hi, double target) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void require_kappa(double kappa) {
  if (!std::isfinite(kappa) || kappa < 0.0)
    throw LoewnerError(ErrorCode::InvalidArgument, "kappa must be nonnegative");
}

}  // namespace

// ---------------------------------------------------------------- constant ---

ComplexPoint constant_map(ComplexPoint z, double A, double t) {
  if (!(t >= 0.0)) out_of_domain("constant_map needs t >= 0");
  if (z.imag() < 0.0) return std::conj(constant_map(std::conj(z), A, t));
  const ComplexPoint v = z - A;
  if (v.real() == 0.0 && v.imag() > 0.0 && v.imag() < 2.0 * std::sqrt(t))
    throw LoewnerError(ErrorCode::PointOnSlit, "point lies on the open slit");
  return A + upper_root(v * v + 4.0 * t, v.real());
}

ComplexPoint constant_inverse(ComplexPoint w, double A, double t) {
  if (!(t >= 0.0)) out_of_domain("constant_inverse needs t >= 0");
  if (w.imag() < 0.0) out_of_domain("constant_inverse needs Im w >= 0");
  const ComplexPoint v = w - A;
  return A + upper_root(v * v - 4.0 * t, v.real());
}

ComplexPoint constant_trace_point(double A, double t) {
  if (!(t >= 0.0)) out_of_domain("trace time must be nonnegative");
  return {A, 2.0 * std::sqrt(t)};
}

// ------------------------------------------------------------------ linear ---

ComplexPoint linear_F(ComplexPoint h) {
  if (h == ComplexPoint(2.0, 0.0)) throw LoewnerError(ErrorCode::PoleAt2, "F has a pole at h = 2");
  return h + 2.0 * std::log(2.0 - h);
}

ParametricSample linear_trace(double phi) {
  if (!(phi > 0.0 && phi < kPi)) out_of_domain("linear trace parameter must lie in (0, pi)");
  // 2 - z = r e^{-i phi}; the imaginary part of F(z) = 2 ln 2 + t fixes
  // r = 2 phi / sin(phi), the real part then gives t.
  const double r = 2.0 * phi / std::sin(phi);
  const double t = 2.0 * std::log(phi / std::sin(phi)) + 2.0 - 2.0 * phi / std::tan(phi);
  const ComplexPoint z{2.0 - 2.0 * phi / std::tan(phi), 2.0 * phi};
  return {phi, t, z, r};
}

ParametricSample linear_trace_at_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) out_of_domain("time must be nonnegative");
  if (t == 0.0) return {0.0, 0.0, ComplexPoint(0.0), 2.0};
  const double phi = invert_increasing([](double p) { return linear_trace(p).t; }, 0.0, kPi, t);
  return linear_trace(phi);
}

ComplexPoint linear_asymptote_small(double t) {
  if (!(t > 0.0)) out_of_domain("small-time expansion needs t > 0");
  return {2.0 * t / 3.0, 2.0 * std::sqrt(t)};
}

ComplexPoint linear_asymptote_large(double t) {
  if (!(t > 2.0)) out_of_domain("large-time expansion needs t > 2");
  return {t - 2.0 * std::log((t - 2.0) / 2.0), 2.0 * kPi};
}

// ------------------------------------------------------------- square root ---

SqrtRoots sqrt_roots_up(double kappa) {
  require_kappa(kappa);
  const double a = std::sqrt(kappa), b = std::sqrt(kappa + 4.0);
  return {a + b, a - b, SqrtRegime::Up};
}

SqrtRoots sqrt_roots_down(double kappa) {
  require_kappa(kappa);
  const double a = std::sqrt(kappa);
  if (kappa < 4.0) {
    const double b = std::sqrt(4.0 - kappa);
    return {{a, b}, {a, -b}, SqrtRegime::DownSpiral};
  }
  if (kappa == 4.0) return {2.0, 2.0, SqrtRegime::DownCritical};
  const double b = std::sqrt(kappa - 4.0);
  return {a + b, a - b, SqrtRegime::DownIntersect};
}

double sqrt_up_angle(double kappa) {
  require_kappa(kappa);
  return 0.5 * kPi * (1.0 - std::sqrt(kappa) / std::sqrt(kappa + 4.0));
}

ComplexPoint sqrt_up_coefficient(double kappa) {
  require_kappa(kappa);
  // The product form is 1^0 at kappa = 0; the limit is 2i.
  if (kappa == 0.0) return {0.0, 2.0};
  const double a = std::sqrt(kappa), b = std::sqrt(kappa + 4.0);
  const double modulus = 2.0 * std::pow((b + a) / (b - a), 0.5 * a / b);
  return std::polar(modulus, sqrt_up_angle(kappa));
}

ComplexPoint sqrt_H(ComplexPoint G, const SqrtRoots& roots, std::pair<int, int> winding) {
  const ComplexPoint yp = roots.y_plus, ym = roots.y_minus;
  if (yp == ym)
    throw LoewnerError(ErrorCode::Degenerate, "H is undefined for the double root; use the critical relation");
  if (G == yp || G == ym) out_of_domain("H has logarithmic singularities at y+ and y-");
  const ComplexPoint two_pi_i{0.0, 2.0 * kPi};
  const ComplexPoint log_m = std::log(G - ym) + two_pi_i * static_cast<double>(winding.first);
  const ComplexPoint log_p = std::log(G - yp) + two_pi_i * static_cast<double>(winding.second);
  return (2.0 * yp * log_m - 2.0 * ym * log_p) / (yp - ym);
}

ComplexPoint sqrt_H_spiral_parts(ComplexPoint z, double kappa) {
  if (!(kappa >= 0.0 && kappa < 4.0)) out_of_domain("spiral regime needs 0 <= kappa < 4");
  const auto roots = sqrt_roots_down(kappa);
  const double q = std::sqrt(kappa) / std::sqrt(4.0 - kappa);
  const double arg_m = std::arg(z - roots.y_minus), arg_p = std::arg(z - roots.y_plus);
  const double ln_m = std::log(std::abs(z - roots.y_minus)), ln_p = std::log(std::abs(z - roots.y_plus));
  const double re = q * arg_m + ln_m - q * arg_p + ln_p;
  const double im = arg_m - q * ln_m + arg_p + q * ln_p;
  return {re, im};
}

ComplexPoint sqrt_down_residual(ComplexPoint z, double t, double kappa, std::pair<int, int> winding) {
  if (!(t >= 0.0 && t < 1.0)) out_of_domain("residual needs t in [0, 1)");
  const auto roots = sqrt_roots_down(kappa);
  const double G0 = 2.0 * std::sqrt(kappa);
  if (roots.regime == SqrtRegime::DownCritical) {
    // 2 ln(G - 2) + 4/(G - 2) = -ln(1 - t) + 2 ln(z - 2) + 4/(z - 2) at G = 4.
    const ComplexPoint two_pi_i{0.0, 2.0 * kPi};
    const ComplexPoint lhs = 2.0 * (std::log(z - 2.0) + two_pi_i * static_cast<double>(winding.second)) +
                             4.0 / (z - 2.0);
    return lhs - std::log1p(-t) - (2.0 * std::log(2.0) + 2.0);
  }
  return sqrt_H(z, roots, winding) - std::log1p(-t) - sqrt_H(G0, roots);
}

std::pair<double, double> spiral_constants(double kappa) {
  if (!(kappa > 0.0 && kappa < 4.0)) out_of_domain("spiral constants need 0 < kappa < 4");
  const double arg_y = std::arg(sqrt_roots_down(kappa).y_plus);
  const double s = std::sqrt(kappa) * std::sqrt(4.0 - kappa);
  const double A = std::log(16.0) + (kappa - 2.0) * std::log(4.0 - kappa) + (2.0 * arg_y - kPi) * s;
  const double B = s * std::log(4.0 - kappa) + (kPi - 2.0 * arg_y) * kappa - 2.0 * kPi;
  return {A, B};
}

SpiralAsymptote spiral_asymptote(double kappa, double t) {
  if (!(t >= 0.0 && t < 1.0)) out_of_domain("spiral asymptote needs t in [0, 1)");
  const auto [A, B] = spiral_constants(kappa);
  const double L = std::log1p(-t);
  const double s = std::sqrt(kappa) * std::sqrt(4.0 - kappa);
  return {(A + (4.0 - kappa) * L) / 4.0, (B - s * L) / 4.0};
}

double intersection_angle(double kappa) {
  if (!std::isfinite(kappa) || kappa < 4.0) out_of_domain("intersection angle needs kappa >= 4");
  const double a = std::sqrt(kappa), b = std::sqrt(kappa - 4.0);
  return kPi * (a - b) / (a + b);
}

ParametricSample critical_trace(double phi) {
  if (!(phi > 0.0 && phi < kPi)) out_of_domain("critical trace parameter must lie in (0, pi)");
  // z - 2 = r e^{i phi}. The imaginary part of the kappa = 4 relation with G = 4
  // gives r = 2 sin(phi)/phi; the real part gives
  // -ln(1 - t) = 2 ln 2 + 2 - 2 ln r - 4 cos(phi)/r.
  const double r = 2.0 * std::sin(phi) / phi;
  const double t = -std::expm1(2.0 * std::log(0.5 * r) + 4.0 * std::cos(phi) / r - 2.0);
  const ComplexPoint z{2.0 + std::sin(2.0 * phi) / phi, 2.0 * std::sin(phi) * std::sin(phi) / phi};
  return {phi, t, z, r};
}

ParametricSample critical_trace_at_time(double t) {
  if (!(t >= 0.0 && t < 1.0)) out_of_domain("critical trace time must lie in [0, 1)");
  if (t == 0.0) return {0.0, 0.0, ComplexPoint(4.0), 2.0};
  const double phi = invert_increasing([](double p) { return critical_trace(p).t; }, 0.0, kPi, t);
  return critical_trace(phi);
}

// --------------------------------------------------------------------- arc ---

ComplexPoint arc_f(ComplexPoint z, double s) {
  if (!(s >= 0.0 && s < kPi)) out_of_domain("arc parameter must lie in [0, pi)");
  if (z == ComplexPoint(-1.0, 0.0)) out_of_domain("arc maps are singular at z = -1");
  const double R = std::tan(0.5 * s);
  // (z-1)/(z+1) sends the arc {e^{iu}: u <= s} to the segment [0, iR].
  const ComplexPoint zeta = (z - 1.0) / (z + 1.0);
  if (std::abs(zeta.real()) <= 1e-15 * std::max(1.0, std::abs(zeta)) && zeta.imag() > 0.0 &&
      zeta.imag() < R)
    throw LoewnerError(ErrorCode::PointOnSlit, "point lies on the arc");
  return upper_root(zeta * zeta + R * R, zeta.real());
}

ComplexPoint arc_psi(ComplexPoint z, double s) {
  const double a = 1.0 / std::cos(0.5 * s);
  const ComplexPoint f = arc_f(z, s);
  return (a + f) / ((a - f) * (a * a));
}

ComplexPoint arc_g(ComplexPoint z, double t) {
  if (!(t >= 0.0 && t <= 0.5)) out_of_domain("arc map time must lie in [0, 1/2]");
  if (z == ComplexPoint(0.0)) out_of_domain("arc map is singular at z = 0");
  if (t == 0.0) return z;
  const double u = std::sqrt(1.0 - 2.0 * t);
  // Continue sqrt((z+1)^2 - 4 z v) from v = 1, where it equals z - 1, down to v = u.
  constexpr int kSteps = 256;
  ComplexPoint S = z - 1.0;
  const ComplexPoint zp1sq = (z + 1.0) * (z + 1.0);
  for (int k = 1; k <= kSteps; ++k) {
    const double v = 1.0 + (u - 1.0) * static_cast<double>(k) / kSteps;
    const ComplexPoint root = std::sqrt(zp1sq - 4.0 * z * v);
    S = std::abs(root - S) <= std::abs(root + S) ? root : -root;
  }
  return (2.0 * (z - 1.0) * (z - 1.0) + 4.0 * z * u + 2.0 * (z + 1.0) * S) / (4.0 * z);
}

double arc_time(double s) {
  if (!(s >= 0.0 && s <= kPi)) out_of_domain("arc parameter must lie in [0, pi]");
  // 1 - cos^4 = sin^2 (1 + cos^2), free of cancellation near s = 0.
  const double c = std::cos(0.5 * s), sn = std::sin(0.5 * s);
  return 0.5 * sn * sn * (1.0 + c * c);
}

double arc_time_inverse(double t) {
  if (!(t >= 0.0 && t <= 0.5)) out_of_domain("arc time must lie in [0, 1/2]");
  // s/2 = arccos(v), v = (1 - 2t)^{1/4}; use 1 - v^2 = 2t / (1 + sqrt(1 - 2t)).
  const double w = std::sqrt(1.0 - 2.0 * t);
  const double v = std::sqrt(w);
  const double one_minus_v2 = 2.0 * t / (1.0 + w);
  return 2.0 * std::atan2(std::sqrt(one_minus_v2), v);
}

ComplexPoint arc_trace_point(double t) { return std::polar(1.0, arc_time_inverse(t)); }

ComplexPoint kufarev_forward_map(ComplexPoint z, double T) {
  if (!(T > 0.0 && T <= 0.5)) out_of_domain("Kufarev time must lie in (0, 1/2]");
  // The driver 3 sqrt(2(T - t)) is the arc driver shifted by 2 and rescaled by
  // alpha = 1/sqrt(2T), so g_T(z) = (arc_g(alpha z - 2, 1/2) + 2) / alpha.
  const double alpha = 1.0 / std::sqrt(2.0 * T);
  return (arc_g(alpha * z - 2.0, 0.5) + 2.0) / alpha;
}

double kufarev_check(double T, std::span<const ComplexPoint> grid, const SolverConfig& cfg) {
  if (!(T > 0.0 && T <= 0.5)) out_of_domain("Kufarev time must lie in (0, 1/2]");
  const Driver kufarev = Driver::kufarev();
  double worst = 0.0;
  for (const ComplexPoint z : grid) {
    const ComplexPoint w = kufarev_forward_map(z, T);
    const auto out = evolve_point_negative_time(w, kufarev, T, cfg);
    const auto* s = std::get_if<Survived>(&out);
    if (s == nullptr)
      throw LoewnerError(ErrorCode::Degenerate, "grid point reached the driver singularity");
    worst = std::max(worst, std::abs(s->g - z));
  }
  return worst;
}

std::vector<ComplexPoint> kufarev_boundary(double T, std::span<const double> xs, double eps,
                                           const SolverConfig& cfg) {
  if (!(T > 0.0 && T <= 0.5)) out_of_domain("Kufarev time must lie in (0, 1/2]");
  if (!(eps > 0.0)) throw LoewnerError(ErrorCode::InvalidArgument, "eps must be positive");
  const Driver kufarev = Driver::kufarev();
  std::vector<ComplexPoint> out;
  out.reserve(xs.size());
  for (const double x : xs) {
    const auto res = evolve_point_negative_time({x, eps}, kufarev, T, cfg);
    const auto* s = std::get_if<Survived>(&res);
    if (s == nullptr)
      throw LoewnerError(ErrorCode::Degenerate, "boundary point reached the driver singularity at x=" + fmt(x));
    out.push_back(s->g);
  }
  return out;
}

// --------------------------------------------------------------- two-point ---

TwoPointSample two_point_trace(double phi) {
  if (!(phi > 0.0 && phi < 0.5 * kPi)) out_of_domain("two-point parameter must lie in (0, pi/2)");
  // z = r e^{i phi} in z^2 - 2 ln z = 1 - 4t: the imaginary part gives
  // r^2 = 2 phi / sin(2 phi), the real part t = (1 - r^2 cos(2 phi) + 2 ln r) / 4.
  const double r2 = 2.0 * phi / std::sin(2.0 * phi);
  const double t = 0.25 * (1.0 - 2.0 * phi / std::tan(2.0 * phi) + std::log(r2));
  const ComplexPoint zp = std::sqrt(r2) * ComplexPoint(std::cos(phi), std::sin(phi));
  return {phi, t, zp, -std::conj(zp)};
}

TwoPointSample two_point_trace_at_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) out_of_domain("time must be nonnegative");
  if (t == 0.0) return {0.0, 0.0, ComplexPoint(1.0), ComplexPoint(-1.0)};
  const double phi =
      invert_increasing([](double p) { return two_point_trace(p).t; }, 0.0, 0.5 * kPi, t);
  return two_point_trace(phi);
}

std::pair<ComplexPoint, ComplexPoint> two_point_asymptote_small(double t) {
  if (!(t >= 0.0)) out_of_domain("time must be nonnegative");
  const double y = std::sqrt(2.0 * t);
  return {{1.0 - t / 3.0, y}, {-1.0 + t / 3.0, y}};
}

std::pair<ComplexPoint, ComplexPoint> two_point_asymptote_large(double t) {
  if (!(t > 0.25)) out_of_domain("large-time expansion needs t > 1/4");
  const double m = 4.0 * t - 1.0;
  const double y = std::sqrt(m - std::log(m));
  const double x = kPi / (2.0 * std::sqrt(m));
  return {{x, y}, {-x, y}};
}

ComplexPoint two_point_residual(ComplexPoint z_plus, double t) {
  return 2.0 * t + 0.5 * z_plus * z_plus - std::log(z_plus) - 0.5;
}

// ------------------------------------------------------------ exact traces ---

namespace {

Trace exact(const std::string& family, Driver d) {
  Trace tr;
  tr.source = TraceSource::ExactFormula;
  tr.exact_family = family;
  tr.driver = std::move(d);
  return tr;
}

}  // namespace

Trace exact_constant_trace(double A, std::span<const double> times) {
  Trace tr = exact("constant", Driver::constant(A));
  for (const double t : times) tr.samples.push_back({t, constant_trace_point(A, t)});
  return tr;
}

Trace exact_linear_trace(std::span<const double> phis) {
  Trace tr = exact("linear", Driver::linear());
  for (const double p : phis) {
    const auto s = linear_trace(p);
    tr.samples.push_back({s.t, s.z});
  }
  return tr;
}

Trace exact_sqrt_up_trace(double kappa, std::span<const double> times) {
  Trace tr = exact("sqrt-up", Driver::sqrt_up(kappa));
  const ComplexPoint B = sqrt_up_coefficient(kappa);
  for (const double t : times) {
    if (!(t >= 0.0)) out_of_domain("trace time must be nonnegative");
    tr.samples.push_back({t, B * std::sqrt(t)});
  }
  return tr;
}

Trace exact_spiral_trace(double kappa, std::span<const double> times) {
  Trace tr = exact("sqrt-down-spiral", Driver::sqrt_down(kappa));
  const ComplexPoint yp = sqrt_roots_down(kappa).y_plus;
  for (const double t : times) {
    const auto a = spiral_asymptote(kappa, t);
    tr.samples.push_back({t, yp + std::exp(ComplexPoint(a.log_radius, a.angle))});
  }
  return tr;
}

Trace exact_critical_trace(std::span<const double> phis) {
  Trace tr = exact("sqrt-down-critical", Driver::sqrt_down(4.0));
  for (const double p : phis) {
    const auto s = critical_trace(p);
    tr.samples.push_back({s.t, s.z});
  }
  return tr;
}

Trace exact_arc_trace(std::span<const double> times) {
  Trace tr = exact("arc", Driver::arc());
  for (const double t : times) tr.samples.push_back({t, arc_trace_point(t)});
  return tr;
}

std::vector<Trace> exact_two_point_traces(std::span<const double> phis) {
  std::vector<Trace> out(2, exact("two-point", Driver::two_point()));
  out[0].atom = 0;
  out[1].atom = 1;
  for (const double p : phis) {
    const auto s = two_point_trace(p);
    out[0].samples.push_back({s.t, s.z_minus});
    out[1].samples.push_back({s.t, s.z_plus});
  }
  return out;
}

}  // namespace loewner::exact
