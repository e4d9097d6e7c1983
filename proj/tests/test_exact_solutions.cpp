#include "doctest.h"

#include <cmath>
#include <random>

#include "loewner/exact_solutions.hpp"
#include "loewner/trace_engine.hpp"

using namespace loewner;
using namespace loewner::exact;

namespace {

const ComplexPoint I(0.0, 1.0);

ErrorCode code_of(auto f) {
  try {
    f();
  } catch (const LoewnerError& e) {
    return e.code();
  }
  FAIL("expected a LoewnerError");
  return ErrorCode::InvalidArgument;
}

std::vector<double> open_grid(double end, int n) {
  std::vector<double> v;
  for (int i = 1; i <= n; ++i) v.push_back(end * i / (n + 1));
  return v;
}

}  // namespace

TEST_SUITE("constant") {
  TEST_CASE("slit map special points") {
    CHECK(std::abs(constant_map(constant_trace_point(0.5, 0.3), 0.5, 0.3) - 0.5) < 1e-7);
    CHECK(constant_map(I, 0.0, 0.0) == I);
    const double t = 0.49;
    CHECK(constant_map({0.5 + 1e-14, 0.0}, 0.5, t).real() == doctest::Approx(0.5 + 2.0 * std::sqrt(t)));
    CHECK(constant_map({0.5 - 1e-14, 0.0}, 0.5, t).real() == doctest::Approx(0.5 - 2.0 * std::sqrt(t)));
    CHECK(std::abs(constant_map({1.0, 1.0}, 0.0, 1.0) - std::sqrt(ComplexPoint(4.0, 2.0))) < 1e-15);
    CHECK(code_of([] { constant_map({0.0, 0.5}, 0.0, 1.0); }) == ErrorCode::PointOnSlit);
  }

  TEST_CASE("inverse map round trip") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> x(-3.0, 3.0), y(0.01, 3.0);
    for (int k = 0; k < 100; ++k) {
      const ComplexPoint w(x(rng), y(rng));
      CHECK(std::abs(constant_map(constant_inverse(w, 0.25, 0.8), 0.25, 0.8) - w) < 1e-12);
    }
    CHECK(std::abs(constant_inverse(ComplexPoint(0.25), 0.25, 0.8) - constant_trace_point(0.25, 0.8)) < 1e-15);
    CHECK(constant_inverse(ComplexPoint(1.0, 2.0), 0.0, 0.0) == ComplexPoint(1.0, 2.0));
  }

  TEST_CASE("exact trace carries its family") {
    const std::vector<double> ts = {0.0, 0.25, 1.0};
    const Trace tr = exact_constant_trace(1.0, ts);
    CHECK(tr.source == TraceSource::ExactFormula);
    CHECK(tr.exact_family == "constant");
    CHECK(tr.samples[2].z == ComplexPoint(1.0, 2.0));
  }
}

TEST_SUITE("linear") {
  TEST_CASE("F values") {
    CHECK(linear_F(0.0) == ComplexPoint(2.0 * std::log(2.0)));
    CHECK(std::abs(linear_F(1.0) - 1.0) < 1e-15);
    CHECK(code_of([] { linear_F(2.0); }) == ErrorCode::PoleAt2);
  }

  TEST_CASE("parametric trace closes the implicit relation") {
    for (double phi : open_grid(kPi, 200)) {
      const auto s = linear_trace(phi);
      CHECK(std::abs(linear_F(s.z) - 2.0 * std::log(2.0) - s.t) < 1e-10 * std::max(1.0, s.t));
    }
  }

  TEST_CASE("parametric trace values") {
    const auto mid = linear_trace(kPi / 2.0);
    CHECK(std::abs(mid.z - ComplexPoint(2.0, kPi)) < 1e-15);
    CHECK(mid.r == doctest::Approx(kPi));
    CHECK(mid.t == doctest::Approx(2.0 * std::log(kPi / 2.0) + 2.0));
    const auto early = linear_trace(1e-6);
    CHECK(std::abs(early.z) < 1e-5);
    CHECK(early.t < 1e-10);
    double previous = -1.0;
    for (double phi : open_grid(kPi, 1000)) {
      const double t = linear_trace(phi).t;
      CHECK(t > previous);
      previous = t;
    }
    CHECK(code_of([] { linear_trace(0.0); }) == ErrorCode::OutOfDomain);
    CHECK(code_of([] { linear_trace(kPi); }) == ErrorCode::OutOfDomain);
  }

  TEST_CASE("trace at a given time") {
    for (double t : {1e-3, 0.5, 3.0, 40.0}) CHECK(linear_trace_at_time(t).t == doctest::Approx(t).epsilon(1e-12));
    CHECK(linear_trace_at_time(0.0).z == ComplexPoint(0.0));
  }

  TEST_CASE("asymptotic forms") {
    const ComplexPoint s = linear_asymptote_small(1e-6);
    CHECK(s.imag() == doctest::Approx(2e-3));
    CHECK(s.real() == doctest::Approx(6.666666666666667e-7));
    CHECK(std::abs(linear_asymptote_small(1e-4) - linear_trace_at_time(1e-4).z) < 1e-4);
    const ComplexPoint l = linear_asymptote_large(100.0);
    CHECK(l.real() == doctest::Approx(100.0 - 2.0 * std::log(49.0)));
    CHECK(l.imag() == doctest::Approx(2.0 * kPi));
    // The remainder decays like 4 ln(t)/t.
    double previous = INFINITY;
    for (double t : {100.0, 1000.0, 10000.0}) {
      const double err = std::abs(linear_asymptote_large(t) - linear_trace_at_time(t).z);
      CHECK(err < previous);
      CHECK(err * t / std::log(t) == doctest::Approx(4.0).epsilon(0.15));
      previous = err;
    }
    CHECK(code_of([] { linear_asymptote_large(2.0); }) == ErrorCode::OutOfDomain);
  }
}

TEST_SUITE("square root") {
  TEST_CASE("root pairs") {
    for (double k : {0.0, 0.5, 2.0, 7.0}) {
      const auto up = sqrt_roots_up(k);
      CHECK(up.regime == SqrtRegime::Up);
      CHECK(std::abs(up.y_plus * up.y_minus + 4.0) < 1e-12);
      CHECK(std::abs(up.y_plus + up.y_minus - 2.0 * std::sqrt(k)) < 1e-12);
      CHECK(up.y_plus.real() > 0.0);
      CHECK(up.y_minus.real() < 0.0);
    }
    for (double k : {0.5, 2.0, 4.0, 4.5, 10.0}) {
      const auto dn = sqrt_roots_down(k);
      CHECK(std::abs(dn.y_plus * dn.y_minus - 4.0) < 1e-12);
      CHECK(std::abs(dn.y_plus + dn.y_minus - 2.0 * std::sqrt(k)) < 1e-12);
    }
    CHECK(sqrt_roots_down(2.0).regime == SqrtRegime::DownSpiral);
    CHECK(sqrt_roots_down(2.0).y_plus.imag() > 0.0);
    CHECK(sqrt_roots_down(4.0).regime == SqrtRegime::DownCritical);
    CHECK(sqrt_roots_down(6.0).regime == SqrtRegime::DownIntersect);
    CHECK(code_of([] { sqrt_roots_up(-1.0); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("ray angle and coefficient") {
    CHECK(sqrt_up_angle(0.0) == doctest::Approx(kPi / 2.0));
    CHECK(sqrt_up_angle(12.0) == doctest::Approx(0.5 * kPi * (1.0 - std::sqrt(3.0) / 2.0)));
    CHECK(sqrt_up_coefficient(0.0) == ComplexPoint(0.0, 2.0));
    for (double k : {0.1, 1.0, 4.0, 10.0, 100.0})
      CHECK(std::abs(std::arg(sqrt_up_coefficient(k)) - sqrt_up_angle(k)) < 1e-12);
    // Frozen: |B| for kappa = 1 is 2 ((sqrt5 + 1)/(sqrt5 - 1))^{1/(2 sqrt5)}.
    CHECK(std::abs(sqrt_up_coefficient(1.0)) == doctest::Approx(2.480230876091).epsilon(1e-11));
    for (double k : {0.5, 1.0, 9.0})
      CHECK(std::abs(sqrt_up_coefficient(k) - std::exp(0.5 * sqrt_H(2.0 * std::sqrt(k), sqrt_roots_up(k)))) < 1e-12);
    CHECK(code_of([] { sqrt_up_angle(-0.1); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("exact ray trace") {
    const std::vector<double> ts = {0.0, 0.25, 1.0};
    const Trace tr = exact_sqrt_up_trace(1.0, ts);
    CHECK(tr.samples[0].z == ComplexPoint(0.0));
    CHECK(std::abs(tr.samples[2].z - sqrt_up_coefficient(1.0)) < 1e-15);
    CHECK(std::abs(tr.samples[1].z - 0.5 * sqrt_up_coefficient(1.0)) < 1e-15);
  }

  TEST_CASE("H reduces to ln(G^2 - 4) at kappa = 0") {
    const ComplexPoint G(0.0, 3.0);
    CHECK(std::abs(sqrt_H(G, sqrt_roots_up(0.0)) - std::log(G * G - 4.0)) < 1e-14);
    CHECK(code_of([] { sqrt_H(ComplexPoint(2.0), sqrt_roots_up(0.0)); }) == ErrorCode::OutOfDomain);
    CHECK(code_of([] { sqrt_H(ComplexPoint(1.0), sqrt_roots_down(4.0)); }) == ErrorCode::Degenerate);
  }

  TEST_CASE("H winding numbers shift by multiples of 2 pi i") {
    const auto roots = sqrt_roots_up(1.0);
    const ComplexPoint G(0.3, 1.1);
    const ComplexPoint d = sqrt_H(G, roots, {1, 0}) - sqrt_H(G, roots);
    const ComplexPoint expected = 2.0 * roots.y_plus * ComplexPoint(0.0, 2.0 * kPi) / (roots.y_plus - roots.y_minus);
    CHECK(std::abs(d - expected) < 1e-13);
  }

  TEST_CASE("spiral real and imaginary parts agree with H") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> x(-3.0, 3.0), y(0.05, 3.0);
    const double kappa = 2.0;
    const auto roots = sqrt_roots_down(kappa);
    for (int k = 0; k < 10; ++k) {
      const ComplexPoint z(x(rng), y(rng));
      CHECK(std::abs(sqrt_H(z, roots) - sqrt_H_spiral_parts(z, kappa)) < 1e-12);
    }
  }

  TEST_CASE("numerical spiral samples satisfy the implicit relation") {
    SolverConfig cfg;
    cfg.dt = 1e-5;
    const std::vector<double> ts = {0.1, 0.3, 0.5, 0.7, 0.9};
    for (double kappa : {1.0, 2.0, 3.0, 6.0}) {
      const Trace tr = trace_exact_slit(Driver::sqrt_down(kappa), ts, cfg);
      for (const auto& s : tr.samples) {
        CAPTURE(kappa);
        CAPTURE(s.t);
        CHECK(std::abs(sqrt_down_residual(s.z, s.t, kappa)) < 1e-4);
      }
    }
  }

  TEST_CASE("spiral asymptote") {
    const auto [A, B] = spiral_constants(2.0);
    CHECK(A == doctest::Approx(std::log(16.0) - kPi));
    CHECK(B == doctest::Approx(2.0 * std::log(2.0) - kPi));
    for (double kappa : {0.5, 2.0, 3.5}) {
      const auto a = spiral_asymptote(kappa, 1.0 - 1e-3);
      const auto b = spiral_asymptote(kappa, 1.0 - 1e-6);
      const double dL = std::log(1e-6) - std::log(1e-3);
      CHECK((b.log_radius - a.log_radius) / dL == doctest::Approx((4.0 - kappa) / 4.0));
      CHECK(b.angle - a.angle ==
            doctest::Approx(std::sqrt(kappa) * std::sqrt(4.0 - kappa) / 4.0 * std::log(1e3)));
    }
    CHECK(code_of([] { spiral_constants(4.0); }) == ErrorCode::OutOfDomain);
  }

  TEST_CASE("numerical spiral radius approaches the asymptote") {
    SolverConfig cfg;
    cfg.dt = 1e-7;
    const Trace tr = trace_exact_slit(Driver::sqrt_down(2.0), std::vector<double>{0.999}, cfg);
    const double lr = std::log(std::abs(tr.samples[0].z - sqrt_roots_down(2.0).y_plus));
    CHECK(std::abs(lr - spiral_asymptote(2.0, 0.999).log_radius) < 0.05);
  }

  TEST_CASE("exact spiral trace sits on the asymptote") {
    const std::vector<double> ts = {0.99, 0.999};
    const Trace tr = exact_spiral_trace(2.0, ts);
    const auto a = spiral_asymptote(2.0, 0.999);
    CHECK(std::log(std::abs(tr.samples[1].z - sqrt_roots_down(2.0).y_plus)) == doctest::Approx(a.log_radius));
  }

  TEST_CASE("intersection angle") {
    CHECK(intersection_angle(4.0) == doctest::Approx(kPi));
    CHECK(intersection_angle(4.5) == doctest::Approx(kPi / 2.0));
    CHECK(intersection_angle(400.0) < 0.01);
    CHECK(intersection_angle(400.0) > 0.0);
    CHECK(code_of([] { intersection_angle(3.9); }) == ErrorCode::OutOfDomain);
  }

  TEST_CASE("critical curve") {
    const auto start = critical_trace(1e-7);
    CHECK(std::abs(start.z - 4.0) < 1e-6);
    CHECK(start.t < 1e-6);
    CHECK(std::abs(critical_trace(kPi / 2.0).z - ComplexPoint(2.0, 4.0 / kPi)) < 1e-15);
    const auto end = critical_trace(kPi - 1e-6);
    CHECK(std::abs(end.z - 2.0) < 1e-5);
    CHECK(end.t > 0.999);
    double previous = -1.0;
    for (double phi : open_grid(kPi, 1000)) {
      const auto s = critical_trace(phi);
      CHECK((s.t > previous || s.t > 1.0 - 1e-15));  // 1 - t underflows near phi = pi
      previous = s.t;
      if (s.t < 0.999) CHECK(std::abs(sqrt_down_residual(s.z, s.t, 4.0)) < 1e-10);
    }
    CHECK(critical_trace_at_time(0.5).t == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(code_of([] { critical_trace(kPi); }) == ErrorCode::OutOfDomain);
  }
}

TEST_SUITE("arc") {
  TEST_CASE("psi at s = 0 is the identity") {
    for (ComplexPoint z : {ComplexPoint(0.3, 0.4), ComplexPoint(-2.0, 1.0), ComplexPoint(5.0, 0.1)})
      CHECK(std::abs(arc_psi(z, 0.0) - z) < 1e-12);
  }

  TEST_CASE("psi sends the arc tip to 1/a^2") {
    const double s = 1.2;
    const double a = 1.0 / std::cos(s / 2.0);
    const ComplexPoint tip = std::polar(1.0, s);
    CHECK(std::abs(arc_psi(tip * (1.0 + 1e-8), s) - 1.0 / (a * a)) < 1e-3);
    CHECK(std::abs(arc_f(tip * (1.0 + 1e-10), s)) < 1e-4);
  }

  TEST_CASE("psi far field") {
    const double s = 1.0, R = 1e4;
    const double a2 = 1.0 / std::pow(std::cos(s / 2.0), 2);
    const ComplexPoint z(0.0, R);
    const ComplexPoint expansion = z + (2.0 - 2.0 / a2) + (1.0 - 1.0 / (a2 * a2)) / z;
    CHECK(std::abs(arc_psi(z, s) - expansion) < 10.0 / (R * R));
  }

  TEST_CASE("arc errors") {
    CHECK(code_of([] { arc_f(std::polar(1.0, 0.5), 1.0); }) == ErrorCode::PointOnSlit);
    CHECK(code_of([] { arc_f(ComplexPoint(-1.0), 1.0); }) == ErrorCode::OutOfDomain);
    CHECK(code_of([] { arc_f(ComplexPoint(0.0, 2.0), kPi); }) == ErrorCode::OutOfDomain);
    CHECK(code_of([] { arc_g(ComplexPoint(0.0, 2.0), 0.6); }) == ErrorCode::OutOfDomain);
    CHECK(code_of([] { arc_time(4.0); }) == ErrorCode::OutOfDomain);
    CHECK(code_of([] { arc_time_inverse(0.7); }) == ErrorCode::OutOfDomain);
  }

  TEST_CASE("normalized arc map") {
    for (ComplexPoint z : {ComplexPoint(0.0, 2.0), ComplexPoint(-3.0, 0.5)}) CHECK(arc_g(z, 0.0) == z);
    const ComplexPoint z(0.0, 2.0);
    const double t = 0.2, h = 1e-6;
    const ComplexPoint dg = (arc_g(z, t + h) - arc_g(z, t - h)) / (2.0 * h);
    const double xi = 3.0 * std::sqrt(1.0 - 2.0 * t) - 2.0;
    CHECK(std::abs(dg - 2.0 / (arc_g(z, t) - xi)) < 1e-5);
    const ComplexPoint far(0.0, 1e4);
    CHECK(((arc_g(far, 0.3) - far) * far).real() == doctest::Approx(0.6).epsilon(1e-6));
    for (ComplexPoint w : {ComplexPoint(0.5, 2.0), ComplexPoint(-2.0, 0.1)})
      CHECK(std::abs(arc_g(w, 0.5) - (w + 1.0 / w)) < 1e-12);
  }

  TEST_CASE("arc map sends the trace tip to the driver") {
    for (double t : {0.05, 0.2, 0.4}) {
      const ComplexPoint tip = arc_trace_point(t);
      const double xi = 3.0 * std::sqrt(1.0 - 2.0 * t) - 2.0;
      CHECK(std::abs(arc_g(tip * (1.0 + 1e-12), t) - xi) < 1e-4);
    }
  }

  TEST_CASE("arc time reparameterization") {
    CHECK(arc_time(0.0) == 0.0);
    CHECK(arc_time(kPi) == doctest::Approx(0.5));
    CHECK(arc_time_inverse(0.5) == doctest::Approx(kPi));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> s(0.0, 3.0), t(0.0, 0.5);
    for (int k = 0; k < 100; ++k) {
      const double x = s(rng);
      CHECK(std::abs(arc_time_inverse(arc_time(x)) - x) < 1e-12);
      const double y = t(rng);
      CHECK(std::abs(arc_time(arc_time_inverse(y)) - y) < 1e-15);
    }
    const Trace tr = exact_arc_trace(std::vector<double>{0.0, 0.25, 0.5});
    CHECK(std::abs(tr.samples[0].z - 1.0) < 1e-15);
    CHECK(std::abs(tr.samples[2].z + 1.0) < 1e-12);
    for (const auto& smp : tr.samples) CHECK(std::abs(std::abs(smp.z) - 1.0) < 1e-15);
  }
}

TEST_SUITE("kufarev") {
  TEST_CASE("forward map is the half-disk map") {
    for (double T : {0.1, 0.5}) {
      for (ComplexPoint z : {ComplexPoint(0.0, 3.0), ComplexPoint(-1.0, 0.5), ComplexPoint(4.0, 1.0)}) {
        const ComplexPoint expected = z + 2.0 * T / (z - 2.0 * std::sqrt(2.0 * T));
        CHECK(std::abs(kufarev_forward_map(z, T) - expected) < 1e-12);
      }
    }
    CHECK(code_of([] { kufarev_forward_map(ComplexPoint(0.0, 1.0), 0.0); }) == ErrorCode::OutOfDomain);
  }

  TEST_CASE("negative-time flow inverts the forward map") {
    SolverConfig cfg;
    cfg.dt = 1e-5;
    std::vector<ComplexPoint> grid;
    for (int i = 0; i < 6; ++i) grid.emplace_back(-3.0 + 1.2 * i, 3.0 + i % 2);
    CHECK(kufarev_check(1e-6, grid, cfg) < 1e-9);
    CHECK(kufarev_check(0.5, grid, cfg) < 1e-4);
  }

  TEST_CASE("boundary image is a half circle") {
    SolverConfig cfg;
    cfg.dt = 1e-5;
    const std::vector<double> xs = {0.4, 1.0, 2.0, 3.0, 3.6};
    for (const ComplexPoint w : kufarev_boundary(0.5, xs, 1e-8, cfg)) {
      CHECK(std::abs(std::abs(w - 2.0) - 1.0) < 1e-3);
      CHECK(w.imag() > 0.0);
    }
  }
}

TEST_SUITE("two-point") {
  TEST_CASE("parametric traces") {
    const auto early = two_point_trace(1e-6);
    CHECK(std::abs(early.z_plus - 1.0) < 1e-5);
    CHECK(early.t < 1e-9);
    double previous = -1.0;
    for (double phi : open_grid(kPi / 2.0, 1000)) {
      const auto s = two_point_trace(phi);
      CHECK(s.t > previous);
      previous = s.t;
      CHECK(s.z_minus == -std::conj(s.z_plus));
      CHECK(std::abs(two_point_residual(s.z_plus, s.t)) < 1e-10 * std::max(1.0, s.t));
    }
    CHECK(code_of([] { two_point_trace(kPi / 2.0); }) == ErrorCode::OutOfDomain);
    CHECK(two_point_trace_at_time(2.0).t == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("expansions") {
    const auto [p, m] = two_point_asymptote_small(0.01);
    CHECK(std::abs(p - ComplexPoint(1.0 - 0.01 / 3.0, std::sqrt(0.02))) < 1e-15);
    CHECK(std::abs(m - ComplexPoint(-1.0 + 0.01 / 3.0, std::sqrt(0.02))) < 1e-15);
    const auto e = two_point_trace_at_time(1e-3);
    CHECK(std::abs(p - two_point_trace_at_time(0.01).z_plus) < 1e-3);
    CHECK(std::abs(two_point_asymptote_small(1e-3).first - e.z_plus) < 1e-5);
    const auto big = two_point_trace_at_time(500.0);
    CHECK(std::abs(two_point_asymptote_large(500.0).first - big.z_plus) < 1e-3);
    CHECK(std::abs(two_point_asymptote_large(500.0).second - big.z_minus) < 1e-3);
    CHECK(code_of([] { two_point_asymptote_large(0.25); }) == ErrorCode::OutOfDomain);
  }

  TEST_CASE("exact double trace order") {
    const auto traces = exact_two_point_traces(open_grid(kPi / 2.0, 10));
    REQUIRE(traces.size() == 2);
    CHECK(traces[0].branch_label() == "minus");
    CHECK(traces[1].branch_label() == "plus");
    CHECK(traces[0].samples[3].z == -std::conj(traces[1].samples[3].z));
  }
}
