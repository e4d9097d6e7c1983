// loewner: trace, exact, validate and forward subcommands.

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "loewner/core.hpp"
#include "loewner/exact_solutions.hpp"
#include "loewner/forward_solver.hpp"
#include "loewner/trace_engine.hpp"
#include "loewner/validate.hpp"

namespace {

using namespace loewner;

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

// Raised for bad flag values found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string fmt_short(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t end = std::min(s.find(',', pos), s.size());
    const std::string item = s.substr(pos, end - pos);
    double v = 0.0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || r.ec != std::errc() || r.ptr != item.data() + item.size())
      throw UsageError(std::string("cannot parse ") + what + " '" + s + "'");
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

// Two columns (t, value) separated by commas or whitespace; '#' starts a comment
// and a non-numeric first line is taken as a header.
Driver read_sampled_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open sampled driver file '" + path + "'");
  std::vector<double> ts, xs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    double t = 0.0, x = 0.0;
    if (!(ls >> t)) {
      if (line.find_first_not_of(' ') == std::string::npos || ts.empty()) continue;
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected two numbers");
    }
    if (!(ls >> x)) throw UsageError(path + ":" + std::to_string(lineno) + ": expected two numbers");
    ts.push_back(t);
    xs.push_back(x);
  }
  return Driver::sampled(std::move(ts), std::move(xs));
}

void write_atomically(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move output into '" + path + "': " + ec.message());
  }
}

std::string render(const std::vector<Trace>& traces, const std::string& format) {
  const bool branches = traces.size() > 1 || (traces.size() == 1 && traces[0].atom);
  if (format == "json") {
    auto one = [&](const Trace& tr) {
      nlohmann::ordered_json j;
      j["driver"] = driver_to_json(tr.driver);
      j["source"] = to_string(tr.source);
      if (!tr.exact_family.empty()) j["family"] = tr.exact_family;
      if (branches) j["branch"] = tr.branch_label();
      auto samples = nlohmann::ordered_json::array();
      for (const auto& s : tr.samples) samples.push_back({s.t, s.z.real(), s.z.imag()});
      j["samples"] = std::move(samples);
      return j;
    };
    nlohmann::ordered_json out;
    if (traces.size() == 1) {
      out = one(traces[0]);
    } else {
      out = nlohmann::ordered_json::array();
      for (const auto& tr : traces) out.push_back(one(tr));
    }
    return out.dump(2) + "\n";
  }
  std::string csv = branches ? "t,re,im,branch\n" : "t,re,im\n";
  for (const auto& tr : traces) {
    const std::string label = tr.branch_label();
    for (const auto& s : tr.samples) {
      csv += fmt(s.t) + "," + fmt(s.z.real()) + "," + fmt(s.z.imag());
      if (branches) csv += "," + label;
      csv += "\n";
    }
  }
  return csv;
}

void translate_to_origin(std::vector<Trace>& traces) {
  for (auto& tr : traces) {
    if (tr.samples.empty()) continue;
    const ComplexPoint z0 = tr.samples.front().z;
    for (auto& s : tr.samples) s.z -= z0;
  }
}

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> v;
  if (n == 1) return {b};
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

// Flags shared by the subcommands that take a driver.
struct DriverFlags {
  std::vector<std::string> choice;
  double A = 0.0;
  double kappa = 1.0;
  std::string points, weights;

  void attach(CLI::App* app) {
    app->add_option("--driver", choice,
                    "constant|linear|sqrt-up|sqrt-down|arc|kufarev|two-point|measure|sampled-file PATH")
        ->required()
        ->expected(1, 2);
    app->add_option("--A", A, "constant driver value");
    app->add_option("--kappa", kappa, "square-root driver strength");
    app->add_option("--points", points, "measure atom positions, comma separated");
    app->add_option("--weights", weights, "measure atom weights, comma separated");
  }

  Driver build() const {
    const std::string& name = choice.front();
    const bool needs_path = name == "sampled-file";
    if (needs_path != (choice.size() == 2))
      throw UsageError(needs_path ? "--driver sampled-file needs a PATH"
                                  : "--driver " + name + " takes no argument");
    try {
      if (name == "constant") return Driver::constant(A);
      if (name == "linear") return Driver::linear();
      if (name == "sqrt-up") return Driver::sqrt_up(kappa);
      if (name == "sqrt-down") return Driver::sqrt_down(kappa);
      if (name == "arc") return Driver::arc();
      if (name == "kufarev") return Driver::kufarev();
      if (name == "two-point") return Driver::two_point();
      if (name == "measure") {
        if (points.empty() || weights.empty())
          throw UsageError("--driver measure needs --points and --weights");
        return Driver::measure(parse_list(points, "--points"), parse_list(weights, "--weights"));
      }
      if (name == "sampled-file") return read_sampled_file(choice[1]);
    } catch (const LoewnerError& e) {
      throw UsageError(e.what());
    }
    throw UsageError("unknown driver '" + name + "'");
  }
};

struct TraceCmd {
  DriverFlags driver;
  double t_max = std::nan("");
  int samples = 400;
  double dt = 1e-5;
  std::string method = "slit";
  std::string out;
  std::string format = "csv";
  bool translate = false;
};

struct ExactCmd {
  std::string family;
  double A = 0.0;
  double kappa = 1.0;
  double t_max = std::nan("");
  int samples = 400;
  std::string out;
  std::string format = "csv";
  bool translate = false;
};

struct ValidateCmd {
  std::string suite = "all";
  double dt = 1e-5;
  std::string report;
};

struct ForwardCmd {
  DriverFlags driver;
  std::string z;
  double t = 0.0;
  double dt = 1e-5;
};

int run_trace(const TraceCmd& c) {
  const Driver d = c.driver.build();
  SolverConfig cfg;
  cfg.dt = c.dt;
  try {
    cfg.check();
  } catch (const LoewnerError& e) {
    throw UsageError(e.what());
  }
  double t_max = c.t_max;
  if (std::isnan(t_max)) {
    t_max = trace_time_limit(d, cfg);
    if (!std::isfinite(t_max)) t_max = 1.0;
  }
  if (!(t_max > 0.0)) throw UsageError("--t-max must be positive");
  std::vector<Trace> traces = compute_traces(d, grid(0.0, t_max, c.samples), cfg,
                                             c.method == "euler" ? TraceMethod::Euler : TraceMethod::Slit);
  if (c.translate) translate_to_origin(traces);
  write_atomically(c.out, render(traces, c.format));
  return 0;
}

int run_exact(const ExactCmd& c) {
  using namespace loewner::exact;
  const int n = c.samples;
  auto times = [&](double def, double lo = 0.0) {
    const double hi = std::isnan(c.t_max) ? def : c.t_max;
    if (!(hi > lo)) throw UsageError("--t-max out of range for this family");
    return grid(lo, hi, n);
  };
  // Open grid on (0, end) for the parametric families.
  auto phis = [&](double end) {
    std::vector<double> v;
    for (int i = 1; i <= n; ++i) v.push_back(end * i / (n + 1));
    return v;
  };
  std::vector<Trace> traces;
  const std::string& f = c.family;
  if (f == "constant") {
    traces.push_back(exact_constant_trace(c.A, times(1.0)));
  } else if (f == "linear") {
    traces.push_back(std::isnan(c.t_max) ? exact_linear_trace(phis(kPi)) : [&] {
      Trace tr;
      tr.source = TraceSource::ExactFormula;
      tr.exact_family = "linear";
      tr.driver = Driver::linear();
      for (double t : times(1.0))
        tr.samples.push_back({t, t == 0.0 ? ComplexPoint(0.0) : linear_trace_at_time(t).z, false});
      return tr;
    }());
  } else if (f == "sqrt-up") {
    traces.push_back(exact_sqrt_up_trace(c.kappa, times(1.0)));
  } else if (f == "sqrt-down-spiral") {
    // Log-spaced in 1 - t from 0.9 to t_max, where the asymptote holds.
    const double hi = std::isnan(c.t_max) ? 0.9999 : c.t_max;
    if (!(hi > 0.9 && hi < 1.0)) throw UsageError("--t-max must lie in (0.9, 1) for the spiral asymptote");
    std::vector<double> ts;
    for (double L : grid(std::log(0.1), std::log1p(-hi), n)) ts.push_back(-std::expm1(L));
    traces.push_back(exact_spiral_trace(c.kappa, ts));
  } else if (f == "sqrt-down-critical" || f == "critical") {
    traces.push_back(exact_critical_trace(phis(kPi)));
  } else if (f == "arc") {
    traces.push_back(exact_arc_trace(times(0.5)));
  } else if (f == "two-point") {
    traces = exact_two_point_traces(phis(kPi / 2.0));
  } else {
    throw UsageError("unknown family '" + f + "'");
  }
  if (c.translate) translate_to_origin(traces);
  write_atomically(c.out, render(traces, c.format));
  return 0;
}

int run_validate(const ValidateCmd& c) {
  SolverConfig cfg;
  cfg.dt = c.dt;
  std::vector<std::string> names;
  std::stringstream ss(c.suite);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) names.push_back(item);
  ValidationReport report;
  try {
    cfg.check();
    report = run_suite(names, cfg);
  } catch (const LoewnerError& e) {
    if (e.code() == ErrorCode::UnknownCheck || e.code() == ErrorCode::InvalidArgument)
      throw UsageError(e.what());
    throw;
  }
  for (const auto& r : report.checks)
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " metric=" << fmt_short(r.metric)
              << " tolerance=" << fmt_short(r.tolerance) << "\n";
  if (!c.report.empty()) write_atomically(c.report, report_to_json(report) + "\n");
  return report.overall ? 0 : kExitCheckFailed;
}

int run_forward(const ForwardCmd& c) {
  const Driver d = c.driver.build();
  const auto parts = parse_list(c.z, "--z");
  if (parts.size() != 2) throw UsageError("--z expects RE,IM");
  SolverConfig cfg;
  cfg.dt = c.dt;
  try {
    cfg.check();
  } catch (const LoewnerError& e) {
    throw UsageError(e.what());
  }
  const auto out = evolve_point({parts[0], parts[1]}, d, c.t, cfg);
  if (const auto* s = std::get_if<Survived>(&out)) {
    const double im = s->g.imag();
    std::cout << fmt_short(s->g.real()) << (std::signbit(im) ? "-" : "+") << fmt_short(std::abs(im))
              << "i\n";
  } else {
    char buf[64];
    std::snprintf(buf, sizeof buf, "SWALLOWED %.10f\n", std::get<SwallowedAt>(out).t_swallow);
    std::cout << buf;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical and exact traces of the chordal Loewner equation"};
  app.require_subcommand(1);

  TraceCmd trace;
  auto* tr = app.add_subcommand("trace", "compute the trace of a driving function");
  trace.driver.attach(tr);
  tr->add_option("--t-max", trace.t_max, "final time (default: largest admissible, or 1)");
  tr->add_option("--samples", trace.samples, "number of sample times")->check(CLI::PositiveNumber);
  tr->add_option("--dt", trace.dt, "backward step")->check(CLI::PositiveNumber);
  tr->add_option("--method", trace.method, "euler|slit")->check(CLI::IsMember({"euler", "slit"}));
  tr->add_option("--out", trace.out, "output file (default stdout)");
  tr->add_option("--format", trace.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  tr->add_flag("--translate-to-origin", trace.translate, "subtract the first sample");

  ExactCmd exact;
  auto* ex = app.add_subcommand("exact", "sample an exactly solvable trace");
  ex->add_option("--family", exact.family,
                 "constant|linear|sqrt-up|sqrt-down-spiral|sqrt-down-critical|arc|two-point")
      ->required();
  ex->add_option("--A", exact.A, "constant driver value");
  ex->add_option("--kappa", exact.kappa, "square-root driver strength");
  ex->add_option("--t-max", exact.t_max, "final time; parametric families use a phi grid without it");
  ex->add_option("--samples", exact.samples, "number of samples")->check(CLI::PositiveNumber);
  ex->add_option("--out", exact.out, "output file (default stdout)");
  ex->add_option("--format", exact.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  ex->add_flag("--translate-to-origin", exact.translate, "subtract the first sample");

  ValidateCmd validate;
  auto* va = app.add_subcommand("validate", "run validation checks against exact solutions");
  va->add_option("--suite", validate.suite, "all or a comma separated list of check names");
  va->add_option("--dt", validate.dt, "base step")->check(CLI::PositiveNumber);
  va->add_option("--report", validate.report, "write the JSON report here");

  ForwardCmd forward;
  auto* fw = app.add_subcommand("forward", "evolve one point under the Loewner flow");
  forward.driver.attach(fw);
  fw->add_option("--z", forward.z, "starting point RE,IM")->required();
  fw->add_option("--t", forward.t, "end time")->required();
  fw->add_option("--dt", forward.dt, "maximal step")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (tr->parsed()) return run_trace(trace);
    if (ex->parsed()) return run_exact(exact);
    if (va->parsed()) return run_validate(validate);
    return run_forward(forward);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}
