#include "loewner/validate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"
#include "loewner/exact_solutions.hpp"
#include "loewner/forward_solver.hpp"

namespace loewner {

void ValidationReport::add(CheckResult r) {
  overall = overall && r.passed;
  checks.push_back(std::move(r));
}

std::string report_to_json(const ValidationReport& report, int indent) {
  nlohmann::ordered_json j;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"metric", c.metric},
                           {"tolerance", c.tolerance},
                           {"passed", c.passed},
                           {"details", c.details}});
  }
  j["overall"] = report.overall;
  return j.dump(indent);
}

TraceDeviation compare_traces(const Trace& a, const Trace& b) {
  const auto& bs = b.samples;
  if (a.samples.empty() || bs.empty())
    throw LoewnerError(ErrorCode::DisjointRanges, "cannot compare empty traces");
  const double lo = bs.front().t, hi = bs.back().t;
  double worst = 0.0, sum = 0.0;
  std::size_t count = 0;
  for (const auto& s : a.samples) {
    if (s.t < lo || s.t > hi) continue;
    auto it = std::lower_bound(bs.begin(), bs.end(), s.t,
                               [](const TraceSample& x, double t) { return x.t < t; });
    ComplexPoint zb;
    if (it->t == s.t || it == bs.begin()) {
      zb = it->z;
    } else {
      const auto& p = *(it - 1);
      const double w = (s.t - p.t) / (it->t - p.t);
      zb = p.z + w * (it->z - p.z);
    }
    const double dev = std::abs(s.z - zb);
    worst = std::max(worst, dev);
    sum += dev;
    ++count;
  }
  if (count == 0) throw LoewnerError(ErrorCode::DisjointRanges, "traces have disjoint time ranges");
  return {worst, sum / static_cast<double>(count)};
}

namespace {

void require_samples(const Trace& tr, std::size_t n) {
  if (tr.samples.size() < n)
    throw LoewnerError(ErrorCode::InvalidArgument,
                       "fit needs at least " + std::to_string(n) + " samples");
}

}  // namespace

double fit_line_angle(const Trace& tr) {
  require_samples(tr, 10);
  const ComplexPoint z0 = tr.samples.front().z;
  // The principal axis of the scatter about z0 has angle arg(sum (z - z0)^2) / 2.
  ComplexPoint moment = 0.0, mean = 0.0;
  for (const auto& s : tr.samples) {
    moment += (s.z - z0) * (s.z - z0);
    mean += s.z - z0;
  }
  if (std::abs(mean) == 0.0) throw LoewnerError(ErrorCode::Degenerate, "all samples coincide");
  double angle = 0.5 * std::arg(moment);
  if (std::real(mean * std::polar(1.0, -angle)) < 0.0) angle += kPi;
  if (angle > kPi) angle -= 2.0 * kPi;
  return angle;
}

CircleFit fit_circle(const Trace& tr) {
  require_samples(tr, 10);
  const std::size_t n = tr.samples.size();
  // Centering improves the conditioning of the normal equations.
  ComplexPoint c0 = 0.0;
  for (const auto& s : tr.samples) c0 += s.z;
  c0 /= static_cast<double>(n);
  double scale = 0.0;
  for (const auto& s : tr.samples) scale = std::max(scale, std::abs(s.z - c0));
  if (scale == 0.0) throw LoewnerError(ErrorCode::Degenerate, "all samples coincide");

  // x^2 + y^2 + D x + E y + F = 0 in units of `scale`.
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexPoint p = (tr.samples[i].z - c0) / scale;
    A(static_cast<Eigen::Index>(i), 0) = p.real();
    A(static_cast<Eigen::Index>(i), 1) = p.imag();
    A(static_cast<Eigen::Index>(i), 2) = 1.0;
    rhs(static_cast<Eigen::Index>(i)) = -std::norm(p);
  }
  const Eigen::MatrixXd normal = A.transpose() * A;
  const Eigen::Vector3d b = A.transpose() * rhs;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(normal, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(2) <= 1e-12 * sv(0)) throw LoewnerError(ErrorCode::Degenerate, "samples are collinear");
  const Eigen::VectorXd x = svd.solve(b);

  const ComplexPoint center_u(-0.5 * x(0), -0.5 * x(1));
  const double r2 = std::norm(center_u) - x(2);
  if (!(r2 > 0.0)) throw LoewnerError(ErrorCode::Degenerate, "no real circle fits the samples");
  CircleFit fit{c0 + scale * center_u, scale * std::sqrt(r2), 0.0};
  for (const auto& s : tr.samples)
    fit.max_residual = std::max(fit.max_residual, std::abs(std::abs(s.z - fit.center) - fit.radius));
  return fit;
}

ComplexPoint fit_sqrt_coefficient(const Trace& tr) {
  require_samples(tr, 2);
  const auto& first = tr.samples.front();
  ComplexPoint num = 0.0;
  double den = 0.0;
  for (const auto& s : tr.samples) {
    const double dt = s.t - first.t;
    num += (s.z - first.z) * std::sqrt(dt);
    den += dt;
  }
  if (den <= 0.0) throw LoewnerError(ErrorCode::Degenerate, "samples span no time");
  return num / den;
}

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

CheckResult verdict(std::string name, double metric, double tol, std::string details) {
  const bool ok = std::isfinite(metric) && metric < tol;
  return {std::move(name), metric, tol, ok, std::move(details)};
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

Trace exact_samples(const std::vector<double>& times, const std::function<ComplexPoint(double)>& f) {
  Trace tr;
  tr.source = TraceSource::ExactFormula;
  for (double t : times) tr.samples.push_back({t, f(t), false});
  return tr;
}

double max_deviation(const Trace& a, const Trace& b) { return compare_traces(a, b).max_dev; }

// Each check receives the configuration and the step it should use.
using CheckFn = std::function<std::vector<CheckResult>(const SolverConfig&)>;

SolverConfig with_dt(SolverConfig cfg, double dt) {
  cfg.dt = dt;
  return cfg;
}

// ------------------------------------------------------------------ checks ---

std::vector<CheckResult> check_constant(const SolverConfig& base) {
  const SolverConfig cfg = with_dt(base, std::min(base.dt, 1e-5));
  const auto times = linspace(0.0, 1.0, 200);
  const Driver d = Driver::constant(0.0);
  const Trace ref = exact::exact_constant_trace(0.0, times);
  const double euler = max_deviation(trace_backward_euler(d, times, cfg), ref);
  const double slit = max_deviation(trace_exact_slit(d, times, cfg), ref);
  const std::string dt = "dt=" + num(cfg.dt) + ", 200 samples on [0, 1] vs 2i sqrt(t)";
  return {verdict("constant_trace", euler, 5e-3, "backward euler, " + dt),
          verdict("constant_trace_slit", slit, 1e-9, "exact slit, " + dt)};
}

std::vector<CheckResult> check_capacity(const SolverConfig& base) {
  SolverConfig cfg = with_dt(base, std::min(base.dt, 1e-5));
  cfg.far_field_radius = 1e4;
  const std::pair<const char*, Driver> drivers[] = {{"constant", Driver::constant(0.0)},
                                                    {"linear", Driver::linear()},
                                                    {"sqrt-up(1)", Driver::sqrt_up(1.0)},
                                                    {"arc", Driver::arc()}};
  double worst = 0.0;
  std::string where;
  for (const auto& [name, d] : drivers) {
    for (double t : {0.1, 0.25, 0.4}) {
      const double err = std::abs(estimate_capacity(d, t, cfg) - 2.0 * t);
      if (err >= worst) {
        worst = err;
        where = std::string(name) + " at t=" + num(t);
      }
    }
  }
  return {verdict("capacity", worst, 1e-3,
                  "max |c - 2t| over 4 drivers x 3 times, R=1e4, dt=" + num(cfg.dt) +
                      "; worst " + where)};
}

std::vector<CheckResult> check_sqrt_up(const SolverConfig& cfg) {
  const auto times = linspace(0.0, 1.0, 101);
  double worst_angle = 0.0, worst_mod = 0.0;
  for (double kappa : {0.5, 1.0, 4.0, 9.0}) {
    const Trace tr = trace_exact_slit(Driver::sqrt_up(kappa), times, cfg);
    worst_angle = std::max(worst_angle, std::abs(fit_line_angle(tr) - exact::sqrt_up_angle(kappa)));
    const double B = std::abs(exact::sqrt_up_coefficient(kappa));
    worst_mod = std::max(worst_mod, std::abs(std::abs(fit_sqrt_coefficient(tr)) - B) / B);
  }
  const std::string d = "kappa in {0.5, 1, 4, 9}, 101 samples on [0, 1], dt=" + num(cfg.dt);
  return {verdict("sqrt_up_angle", worst_angle, 1e-2, "max |fitted angle - theta|, " + d),
          verdict("sqrt_up_modulus", worst_mod, 1e-2, "max relative error of fitted |B|, " + d)};
}

// Slopes in (log-radius, unwrapped angle) about y+ versus ln(1 - t).
std::vector<CheckResult> check_spiral(const SolverConfig& base) {
  const SolverConfig cfg = with_dt(base, std::min(base.dt, 1e-6));
  const double kappa = 2.0;
  const ComplexPoint yp = exact::sqrt_roots_down(kappa).y_plus;
  std::vector<double> times;
  for (double L : linspace(std::log(0.1), std::log(1e-4), 41)) times.push_back(-std::expm1(L));
  const Trace tr = trace_exact_slit(Driver::sqrt_down(kappa), times, cfg);

  const std::size_t n = times.size();
  std::vector<double> L(n), lr(n), ang(n);
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexPoint w = tr.samples[i].z - yp;
    L[i] = std::log1p(-times[i]);
    lr[i] = std::log(std::abs(w));
    const double a = std::arg(w);
    ang[i] = i == 0 ? a : ang[i - 1] + std::remainder(a - prev, 2.0 * kPi);
    prev = a;
  }
  double mL = 0.0, mr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mL += L[i];
    mr += lr[i];
  }
  mL /= static_cast<double>(n);
  mr /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (L[i] - mL) * (lr[i] - mr);
    sxx += (L[i] - mL) * (L[i] - mL);
  }
  const double slope = sxy / sxx;
  const double expected_slope = (4.0 - kappa) / 4.0;

  const double s = std::sqrt(kappa) * std::sqrt(4.0 - kappa);
  const double dL = L.back() - L.front();
  const double winding = ang.back() - ang.front();
  const double expected_winding = -s / 4.0 * dL;

  // Intercepts at the last sample; the angle constant is only defined mod 2 pi
  // in Arg, hence mod 8 pi after the factor 4.
  const auto [A, B] = exact::spiral_constants(kappa);
  const double A_hat = 4.0 * lr.back() - (4.0 - kappa) * L.back();
  const double B_hat = 4.0 * ang.back() + s * L.back();
  const double intercept_err =
      std::max(std::abs(A_hat - A), std::abs(std::remainder(B_hat - B, 8.0 * kPi)));

  const std::string win = "kappa=2, t in [0.9, 0.9999], 41 samples, dt=" + num(cfg.dt);
  return {
      verdict("spiral_slope", std::abs(slope - expected_slope), 0.02,
              "regression slope " + num(slope) + " vs " + num(expected_slope) + ", " + win),
      verdict("spiral_winding", std::abs(winding - expected_winding), 0.05,
              "unwrapped angle increment " + num(winding) + " vs " + num(expected_winding) + ", " + win),
      verdict("spiral_intercepts", intercept_err, 0.1,
              "A " + num(A_hat) + " vs " + num(A) + ", B " + num(B_hat) + " vs " + num(B) +
                  " at t=0.9999")};
}

// arg(z - y-) is linear in d = |z - y-| near the landing point; the intercept of
// a quadratic fit in d over the last decades is the terminal tangent angle.
double terminal_angle(const Trace& tr, ComplexPoint landing, double t_from) {
  std::vector<double> d, a;
  for (const auto& s : tr.samples) {
    if (s.t < t_from) continue;
    d.push_back(std::abs(s.z - landing));
    a.push_back(std::arg(s.z - landing));
  }
  Eigen::MatrixXd X(static_cast<Eigen::Index>(d.size()), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    X(r, 0) = 1.0;
    X(r, 1) = d[i];
    X(r, 2) = d[i] * d[i];
    y(r) = a[i];
  }
  return X.colPivHouseholderQr().solve(y)(0);
}

std::vector<CheckResult> check_intersection(const SolverConfig& cfg) {
  std::vector<double> times;
  for (double k : linspace(1.0, 4.0, 31)) times.push_back(1.0 - std::pow(10.0, -k));
  double worst = 0.0;
  std::string details;
  for (double kappa : {4.5, 6.0, 10.0}) {
    const Trace tr = trace_exact_slit(Driver::sqrt_down(kappa), times, cfg);
    const double phi = exact::intersection_angle(kappa);
    const double est = terminal_angle(tr, exact::sqrt_roots_down(kappa).y_minus, 0.99);
    worst = std::max(worst, std::abs(est - phi));
    details += "kappa=" + num(kappa) + ": " + num(est) + " vs " + num(phi) + "; ";
  }
  const double perpendicular = std::abs(exact::intersection_angle(4.5) - kPi / 2.0);
  worst = std::max(worst, perpendicular);
  details += "phi(9/2) - pi/2 = " + num(perpendicular) + "; dt=" + num(cfg.dt);
  return {verdict("intersection_angle", worst, 3e-2, details)};
}

std::vector<CheckResult> check_circle(const SolverConfig& cfg) {
  const Trace tr = trace_exact_slit(Driver::sqrt_down(4.5), linspace(0.01, 0.99, 99), cfg);
  const CircleFit fit = fit_circle(tr);
  const std::string d = "kappa=9/2, t in [0.01, 0.99], dt=" + num(cfg.dt) + ", max residual " +
                        num(fit.max_residual);
  return {verdict("circle_radius", std::abs(fit.radius - std::sqrt(2.0)), 5e-3,
                  "radius " + num(fit.radius) + " vs sqrt(2), " + d),
          verdict("circle_center", std::abs(fit.center - ComplexPoint(2.0 * std::sqrt(2.0))), 5e-3,
                  "center " + num(fit.center.real()) + "+" + num(fit.center.imag()) +
                      "i vs 2 sqrt(2), " + d)};
}

std::vector<CheckResult> check_critical(const SolverConfig& cfg) {
  const auto times = linspace(0.0, 0.99, 100);
  const Trace tr = trace_exact_slit(Driver::sqrt_down(4.0), times, cfg);
  const Trace ref = exact_samples(times, [](double t) {
    return t == 0.0 ? ComplexPoint(4.0) : exact::critical_trace_at_time(t).z;
  });
  return {verdict("critical_curve", max_deviation(tr, ref), 5e-3,
                  "kappa=4 vs parametric curve, 100 samples on [0, 0.99], dt=" + num(cfg.dt))};
}

// Long horizons run at ten times the configured step.
std::vector<CheckResult> check_linear(const SolverConfig& base) {
  const SolverConfig cfg = with_dt(base, 10.0 * base.dt);
  auto times = linspace(0.0, 1.0, 21);
  for (double t : linspace(2.5, 100.0, 40)) times.push_back(t);
  const Trace tr = trace_exact_slit(Driver::linear(), times, cfg);
  const Trace ref = exact_samples(times, [](double t) {
    return t == 0.0 ? ComplexPoint(0.0) : exact::linear_trace_at_time(t).z;
  });
  const double large = std::abs(exact::linear_asymptote_large(100.0) - exact::linear_trace_at_time(100.0).z);
  return {verdict("linear_trace", max_deviation(tr, ref), 1e-2,
                  "xi=t vs parametric trace, 61 samples on [0, 100], dt=" + num(cfg.dt)),
          verdict("linear_large_t", large, 0.05,
                  "|t - 2 ln((t-2)/2) + 2 pi i - z_c(t)| at t=100 from the parametric trace")};
}

std::vector<CheckResult> check_arc(const SolverConfig&) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.2, 3.0), ut(0.02, 0.48);
  double worst = 0.0;
  int used = 0;
  while (used < 100) {
    const ComplexPoint z(ux(rng), uy(rng));
    const double t = ut(rng);
    if (std::abs(std::abs(z) - 1.0) < 0.05) continue;
    const double h = 1e-5;
    const ComplexPoint g = exact::arc_g(z, t);
    const ComplexPoint dg = (exact::arc_g(z, t + h) - exact::arc_g(z, t - h)) / (2.0 * h);
    const double xi = 3.0 * std::sqrt(1.0 - 2.0 * t) - 2.0;
    worst = std::max(worst, std::abs(dg - 2.0 / (g - xi)));
    ++used;
  }
  double roundtrip = 0.0;
  for (double t : linspace(0.0, 0.5, 1001))
    roundtrip = std::max(roundtrip, std::abs(exact::arc_time(exact::arc_time_inverse(t)) - t));
  return {verdict("arc_loewner_residual", worst, 1e-5,
                  "central difference (h=1e-5) of g_t vs 2/(g_t - xi) at 100 seeded points"),
          verdict("arc_time_roundtrip", roundtrip, 1e-12,
                  "max |t(s(t)) - t| on 1001 times in [0, 1/2]")};
}

std::vector<CheckResult> check_kufarev(const SolverConfig& base) {
  const SolverConfig cfg = with_dt(base, std::min(base.dt, 1e-6));
  std::vector<ComplexPoint> grid;
  for (int i = 0; i < 20; ++i) grid.emplace_back(-4.0 + 8.0 * i / 19.0, 3.0 + i % 4);
  const double inverse = exact::kufarev_check(0.5, grid, cfg);
  const auto xs = linspace(0.2, 3.8, 37);
  Trace boundary;
  for (const ComplexPoint w : exact::kufarev_boundary(0.5, xs, 1e-8, cfg))
    boundary.samples.push_back({0.0, w, false});
  const CircleFit fit = fit_circle(boundary);
  const std::string d = "T=1/2, dt=" + num(cfg.dt);
  return {verdict("kufarev_inverse", inverse, 1e-4, "max |g_-T(g_T(z)) - z| on 20 points, " + d),
          verdict("kufarev_radius", std::abs(fit.radius - 1.0), 1e-3,
                  "fitted radius " + num(fit.radius) + " of g_-T(x + 1e-8 i), x in [0.2, 3.8], " + d),
          verdict("kufarev_center", std::abs(fit.center - ComplexPoint(2.0)), 1e-3,
                  "fitted center " + num(fit.center.real()) + "+" + num(fit.center.imag()) + "i, " + d)};
}

std::vector<CheckResult> check_two_point(const SolverConfig& base) {
  const SolverConfig cfg = with_dt(base, 10.0 * base.dt);
  auto times = linspace(0.0, 1.0, 21);
  for (double t : linspace(1.5, 10.0, 18)) times.push_back(t);
  const auto traces = trace_measure(Driver::two_point(), times, cfg);
  const Trace ref_minus = exact_samples(times, [](double t) {
    return t == 0.0 ? ComplexPoint(-1.0) : exact::two_point_trace_at_time(t).z_minus;
  });
  const Trace ref_plus = exact_samples(times, [](double t) {
    return t == 0.0 ? ComplexPoint(1.0) : exact::two_point_trace_at_time(t).z_plus;
  });
  const double dev = std::max(max_deviation(traces[0], ref_minus), max_deviation(traces[1], ref_plus));
  double sym = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i)
    sym = std::max(sym, std::abs(traces[1].samples[i].z + std::conj(traces[0].samples[i].z)));

  double small = 0.0;
  for (double t : linspace(1e-4, 1e-2, 50)) {
    const auto e = exact::two_point_trace_at_time(t);
    const auto [p, m] = exact::two_point_asymptote_small(t);
    small = std::max({small, std::abs(p - e.z_plus), std::abs(m - e.z_minus)});
  }
  double large = 0.0;
  for (double t : linspace(100.0, 1000.0, 50)) {
    const auto e = exact::two_point_trace_at_time(t);
    const auto [p, m] = exact::two_point_asymptote_large(t);
    large = std::max({large, std::abs(p - e.z_plus), std::abs(m - e.z_minus)});
  }
  const std::string d = "39 samples on [0, 10], dt=" + num(cfg.dt);
  return {verdict("two_point_trace", dev, 1e-2, "both branches vs parametric traces, " + d),
          verdict("two_point_symmetry", sym, 1e-6, "max |z+ + conj(z-)|, " + d),
          verdict("two_point_small_t", small, 1e-3, "small-t expansion vs parametric, t in [1e-4, 1e-2]"),
          verdict("two_point_large_t", large, 1e-3, "large-t expansion vs parametric, t in [100, 1000]")};
}

// Equivariance of the exact slit scheme; tolerance twice its constant-driver bound.
std::vector<CheckResult> check_symmetry(const SolverConfig& cfg) {
  const double tol = 2e-9;
  const auto times = linspace(0.0, 1.0, 50);
  const Driver d = Driver::sqrt_up(1.0);
  const Trace base = trace_exact_slit(d, times, cfg);

  const double c = 0.75;
  Trace shifted = trace_exact_slit(transform_shift(d, c), times, cfg);
  for (auto& s : shifted.samples) s.z -= c;

  Trace reflected = trace_exact_slit(reflect(d), times, cfg);
  for (auto& s : reflected.samples) s.z = -std::conj(s.z);

  // xi_a(t) = xi(a^2 t) / a traces z(a^2 t) / a; the step shrinks by a^2 too.
  const double a = 2.0;
  std::vector<double> scaled_times;
  for (double t : times) scaled_times.push_back(t / (a * a));
  Trace scaled = trace_exact_slit(transform_scale(d, a), scaled_times, with_dt(cfg, cfg.dt / (a * a)));
  for (std::size_t i = 0; i < scaled.samples.size(); ++i) {
    scaled.samples[i].t = times[i];
    scaled.samples[i].z *= a;
  }
  const std::string det = "sqrt-up(1), 50 samples on [0, 1], dt=" + num(cfg.dt);
  return {verdict("symmetry_shift", max_deviation(shifted, base), tol, "shift by 0.75, " + det),
          verdict("symmetry_reflect", max_deviation(reflected, base), tol, "xi -> -xi, " + det),
          verdict("symmetry_scale", max_deviation(scaled, base), tol, "scale factor 2, " + det)};
}

struct Entry {
  std::vector<std::string> names;
  CheckFn run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {{"constant_trace", "constant_trace_slit"}, check_constant},
      {{"capacity"}, check_capacity},
      {{"sqrt_up_angle", "sqrt_up_modulus"}, check_sqrt_up},
      {{"spiral_slope", "spiral_winding", "spiral_intercepts"}, check_spiral},
      {{"intersection_angle"}, check_intersection},
      {{"circle_radius", "circle_center"}, check_circle},
      {{"critical_curve"}, check_critical},
      {{"linear_trace", "linear_large_t"}, check_linear},
      {{"arc_loewner_residual", "arc_time_roundtrip"}, check_arc},
      {{"kufarev_inverse", "kufarev_radius", "kufarev_center"}, check_kufarev},
      {{"two_point_trace", "two_point_symmetry", "two_point_small_t", "two_point_large_t"},
       check_two_point},
      {{"symmetry_shift", "symmetry_reflect", "symmetry_scale"}, check_symmetry},
  };
  return entries;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.insert(out.end(), e.names.begin(), e.names.end());
    return out;
  }();
  return names;
}

ValidationReport run_suite(std::span<const std::string> names, const SolverConfig& cfg) {
  cfg.check();
  const auto& all = check_names();
  std::vector<bool> wanted(all.size(), false);
  for (const auto& n : names) {
    if (n == "all") {
      std::fill(wanted.begin(), wanted.end(), true);
      continue;
    }
    const auto it = std::find(all.begin(), all.end(), n);
    if (it == all.end()) {
      std::string known;
      for (const auto& k : all) known += (known.empty() ? "" : ", ") + k;
      throw LoewnerError(ErrorCode::UnknownCheck, "unknown check '" + n + "'; known checks: " + known);
    }
    wanted[static_cast<std::size_t>(it - all.begin())] = true;
  }

  ValidationReport report;
  std::size_t offset = 0;
  for (const auto& entry : registry()) {
    const std::size_t count = entry.names.size();
    const bool any = std::any_of(wanted.begin() + static_cast<long>(offset),
                                 wanted.begin() + static_cast<long>(offset + count),
                                 [](bool b) { return b; });
    if (any) {
      std::vector<CheckResult> results;
      try {
        results = entry.run(cfg);
      } catch (const std::exception& e) {
        for (const auto& n : entry.names)
          results.push_back({n, std::numeric_limits<double>::max(), 0.0, false,
                             std::string("check raised: ") + e.what()});
      }
      for (std::size_t k = 0; k < count; ++k) {
        if (!wanted[offset + k]) continue;
        CheckResult r = results[k];
        if (!std::isfinite(r.metric)) {
          r.metric = std::numeric_limits<double>::max();
          r.passed = false;
        }
        report.add(std::move(r));
      }
    }
    offset += count;
  }
  return report;
}

}  // namespace loewner
