// Acceptance run: one PASS/FAIL line per numbered criterion, exit status 1 if
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "loewner/validate.hpp"

using namespace loewner;

namespace {

struct Criterion {
  int number;
  std::string title;
  std::vector<std::string> checks;
  std::vector<std::string> informational;
  double time_limit;  // seconds, 0 for none
};

bool csv_linear_figure(std::string& details) {
  const std::string cmd =
      std::string(LOEWNER_CLI_PATH) + " trace --driver linear --t-max 100 --samples 400 --dt 1e-4";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    details = "cannot launch the command line tool";
    return false;
  }
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  std::istringstream in(out);
  std::string header, line, last;
  std::getline(in, header);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  details = "csv rows=" + std::to_string(rows) + " last=" + last;
  return status == 0 && header == "t,re,im" && rows == 400 && last.rfind("100,", 0) == 0;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "constant forcing", {"constant_trace", "constant_trace_slit"}, {}, 5.0},
      {2, "capacity normalization", {"capacity"}, {}, 10.0},
      {3, "sqrt-up ray", {"sqrt_up_angle", "sqrt_up_modulus"}, {}, 20.0},
      {4, "spiral regime", {"spiral_slope", "spiral_winding"}, {"spiral_intercepts"}, 30.0},
      {5, "intersection regime", {"intersection_angle"}, {}, 0.0},
      {6, "kappa = 9/2 circle", {"circle_radius", "circle_center"}, {}, 0.0},
      {7, "critical curve", {"critical_curve"}, {}, 0.0},
      {8, "linear forcing", {"linear_trace", "linear_large_t"}, {}, 0.0},
      {9, "arc map", {"arc_loewner_residual", "arc_time_roundtrip"}, {}, 0.0},
      {10, "kufarev inverse", {"kufarev_inverse", "kufarev_radius", "kufarev_center"}, {}, 0.0},
      {11,
       "two-point forcing",
       {"two_point_trace", "two_point_symmetry", "two_point_small_t", "two_point_large_t"},
       {},
       0.0},
      {12, "symmetry suite", {"symmetry_shift", "symmetry_reflect", "symmetry_scale"}, {}, 0.0},
  };

  SolverConfig cfg;
  cfg.dt = 1e-5;
  int failures = 0;
  for (const Criterion& c : criteria) {
    std::vector<std::string> names = c.checks;
    names.insert(names.end(), c.informational.begin(), c.informational.end());
    const auto start = std::chrono::steady_clock::now();
    const ValidationReport report = run_suite(names, cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool ok = true;
    std::string metrics;
    for (const CheckResult& r : report.checks) {
      bool counted = false;
      for (const auto& n : c.checks) counted = counted || n == r.name;
      if (counted) ok = ok && r.passed;
      char buf[256];
      std::snprintf(buf, sizeof buf, " %s%s=%.3e/%.1e%s", counted ? "" : "(info)", r.name.c_str(), r.metric,
                    r.tolerance, r.passed ? "" : "!");
      metrics += buf;
    }
    if (c.time_limit > 0.0 && seconds >= c.time_limit) ok = false;
    std::string extra;
    if (c.number == 8) ok = csv_linear_figure(extra) && ok;

    char limit[32] = "";
    if (c.time_limit > 0.0) std::snprintf(limit, sizeof limit, " limit=%.0fs", c.time_limit);
    std::printf("criterion %d %s %s:%s runtime=%.2fs%s%s%s\n", c.number, ok ? "PASS" : "FAIL", c.title.c_str(),
                metrics.c_str(), seconds, limit, extra.empty() ? "" : " ", extra.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
    for (const CheckResult& r : report.checks)
      if (!r.passed) std::printf("  %s: %s\n", r.name.c_str(), r.details.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
