#include "loewner/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace loewner {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NotPointwise: return "NotPointwise";
    case ErrorCode::PointOnSlit: return "PointOnSlit";
    case ErrorCode::PoleAt2: return "PoleAt2";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::NewtonFailure: return "NewtonFailure";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::DisjointRanges: return "DisjointRanges";
    case ErrorCode::UnknownCheck: return "UnknownCheck";
  }
  return "Unknown";
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void invalid(const std::string& msg) {
  throw LoewnerError(ErrorCode::InvalidArgument, msg);
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) invalid(std::string(what) + " must be finite");
}

void check_kappa(double kappa) {
  require_finite(kappa, "kappa");
  if (kappa < 0.0) invalid("kappa must be nonnegative");
}

// Base-family domain in the family's own time variable u.
struct BaseDomain {
  double lo;
  double hi;
  bool hi_open;
};

BaseDomain base_domain(const Family& f) {
  return std::visit(
      overloaded{
          [](const family::SqrtDown&) { return BaseDomain{0.0, 1.0, true}; },
          [](const family::Arc&) { return BaseDomain{0.0, 0.5, true}; },
          [](const family::Sampled& s) {
            return BaseDomain{s.times.front(), s.times.back(), false};
          },
          [](const auto&) { return BaseDomain{0.0, kInf, true}; },
      },
      f);
}

double interpolate(const family::Sampled& s, double u) {
  auto it = std::upper_bound(s.times.begin(), s.times.end(), u);
  if (it == s.times.end()) return s.values.back();
  if (it == s.times.begin()) return s.values.front();
  const auto j = static_cast<std::size_t>(it - s.times.begin());
  const double t0 = s.times[j - 1], t1 = s.times[j];
  const double w = (u - t0) / (t1 - t0);
  return s.values[j - 1] + w * (s.values[j] - s.values[j - 1]);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

Driver Driver::make(Family f, Affine a) {
  // Fold the affine wrapper into families that are closed under it.
  if (auto* c = std::get_if<family::Constant>(&f)) {
    c->A = a.value_scale * c->A + a.offset;
    a = Affine{};
  } else if (auto* s = std::get_if<family::Sampled>(&f)) {
    for (auto& t : s->times) t = (t - a.time_offset) / a.time_scale;
    for (auto& v : s->values) v = a.value_scale * v + a.offset;
    a = Affine{};
  } else if (auto* up = std::get_if<family::SqrtUp>(&f)) {
    // 2 v sqrt(kappa s t) = 2 sqrt(kappa v^2 s t) for v > 0: the family is
    // invariant under the scaling symmetry.
    if (a.time_offset == 0.0 && a.offset == 0.0 && a.value_scale > 0.0) {
      double factor = a.value_scale * a.value_scale * a.time_scale;
      if (std::abs(factor - 1.0) < 1e-14) factor = 1.0;
      up->kappa *= factor;
      a = Affine{};
    }
  }
  return Driver(std::move(f), a);
}

Driver Driver::constant(double A) {
  require_finite(A, "A");
  return Driver(family::Constant{A}, {});
}

Driver Driver::linear() { return Driver(family::Linear{}, {}); }

Driver Driver::sqrt_up(double kappa) {
  check_kappa(kappa);
  return Driver(family::SqrtUp{kappa}, {});
}

Driver Driver::sqrt_down(double kappa) {
  check_kappa(kappa);
  return Driver(family::SqrtDown{kappa}, {});
}

Driver Driver::arc() { return Driver(family::Arc{}, {}); }
Driver Driver::kufarev() { return Driver(family::Kufarev{}, {}); }
Driver Driver::two_point() { return Driver(family::TwoPoint{}, {}); }

Driver Driver::measure(std::vector<double> points, std::vector<double> weights) {
  if (points.empty()) invalid("measure needs at least one atom");
  if (points.size() != weights.size()) invalid("measure points and weights differ in length");
  double total = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    require_finite(points[j], "measure point");
    require_finite(weights[j], "measure weight");
    if (weights[j] < 0.0) invalid("measure weights must be nonnegative");
    total += weights[j];
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance)
    invalid("measure weights must sum to 1 (got " + fmt(total) + ")");
  return Driver(family::Measure{std::move(points), std::move(weights)}, {});
}

Driver Driver::sampled(std::vector<double> times, std::vector<double> values) {
  if (times.size() < 2) invalid("sampled driver needs at least two samples");
  if (times.size() != values.size()) invalid("sampled times and values differ in length");
  for (std::size_t j = 0; j < times.size(); ++j) {
    require_finite(times[j], "sample time");
    require_finite(values[j], "sample value");
    if (j > 0 && !(times[j] > times[j - 1])) invalid("sample times must be strictly increasing");
  }
  return Driver(family::Sampled{std::move(times), std::move(values)}, {});
}

std::string Driver::family_name() const {
  return std::visit(overloaded{
                        [](const family::Constant&) { return "constant"; },
                        [](const family::Linear&) { return "linear"; },
                        [](const family::SqrtUp&) { return "sqrt-up"; },
                        [](const family::SqrtDown&) { return "sqrt-down"; },
                        [](const family::Arc&) { return "arc"; },
                        [](const family::Kufarev&) { return "kufarev"; },
                        [](const family::TwoPoint&) { return "two-point"; },
                        [](const family::Measure&) { return "measure"; },
                        [](const family::Sampled&) { return "sampled"; },
                    },
                    family_);
}

bool Driver::is_pointwise() const {
  return !std::holds_alternative<family::TwoPoint>(family_) &&
         !std::holds_alternative<family::Measure>(family_);
}

bool Driver::has_terminal_singularity() const {
  return std::holds_alternative<family::SqrtDown>(family_) ||
         std::holds_alternative<family::Arc>(family_);
}

double Driver::t_min() const {
  const auto dom = base_domain(family_);
  return std::max(0.0, (dom.lo - affine_.time_offset) / affine_.time_scale);
}

double Driver::t_max() const {
  const auto dom = base_domain(family_);
  if (std::isinf(dom.hi)) return kInf;
  return (dom.hi - affine_.time_offset) / affine_.time_scale;
}

std::vector<Atom> Driver::atoms() const {
  if (const auto* m = std::get_if<family::Measure>(&family_)) {
    std::vector<Atom> out;
    out.reserve(m->points.size());
    for (std::size_t j = 0; j < m->points.size(); ++j) out.push_back({m->points[j], m->weights[j]});
    return out;
  }
  if (std::holds_alternative<family::TwoPoint>(family_)) return {{-1.0, 0.5}, {1.0, 0.5}};
  throw LoewnerError(ErrorCode::NotPointwise, family_name() + " driver has no atoms");
}

double driver_eval(const Driver& d, double t) {
  if (!d.is_pointwise())
    throw LoewnerError(ErrorCode::NotPointwise,
                       d.family_name() + " driver has no pointwise value");
  const double lo = d.t_min();
  const double hi = d.t_max();
  const bool hi_open = base_domain(d.family()).hi_open;
  if (!std::isfinite(t) || t < lo || (hi_open ? t >= hi : t > hi))
    throw LoewnerError(ErrorCode::OutOfDomain,
                       "t=" + fmt(t) + " outside [" + fmt(lo) + ", " + fmt(hi) + (hi_open ? ")" : "]") +
                           " for " + d.family_name());
  const Affine& a = d.affine();
  const double u = a.time_scale * t + a.time_offset;
  const double base = std::visit(
      overloaded{
          [](const family::Constant& c) { return c.A; },
          [u](const family::Linear&) { return u; },
          [u](const family::SqrtUp& s) { return 2.0 * std::sqrt(s.kappa * std::max(u, 0.0)); },
          [u](const family::SqrtDown& s) {
            return 2.0 * std::sqrt(s.kappa * std::max(1.0 - u, 0.0));
          },
          [u](const family::Arc&) { return 3.0 * std::sqrt(std::max(1.0 - 2.0 * u, 0.0)) - 2.0; },
          [u](const family::Kufarev&) { return 3.0 * std::sqrt(2.0 * std::max(u, 0.0)); },
          [u](const family::Sampled& s) { return interpolate(s, u); },
          [](const auto&) { return 0.0; },
      },
      d.family());
  return a.value_scale * base + a.offset;
}

Driver transform_scale(const Driver& d, double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0) invalid("scale factor must be positive");
  if (std::holds_alternative<family::TwoPoint>(d.family()))
    return Driver::measure({-1.0 / alpha, 1.0 / alpha}, {0.5, 0.5});
  if (const auto* m = std::get_if<family::Measure>(&d.family())) {
    auto pts = m->points;
    for (auto& p : pts) p /= alpha;
    return Driver::measure(std::move(pts), m->weights);
  }
  Affine a = d.affine();
  a.value_scale /= alpha;
  a.offset /= alpha;
  a.time_scale *= alpha * alpha;
  return Driver::make(d.family(), a);
}

Driver transform_shift(const Driver& d, double alpha) {
  require_finite(alpha, "shift");
  if (d.is_measure()) {
    std::vector<double> pts, wts;
    for (const auto& atom : d.atoms()) {
      pts.push_back(atom.point + alpha);
      wts.push_back(atom.weight);
    }
    return Driver::measure(std::move(pts), std::move(wts));
  }
  Affine a = d.affine();
  a.offset += alpha;
  return Driver::make(d.family(), a);
}

Driver reflect(const Driver& d) {
  if (std::holds_alternative<family::TwoPoint>(d.family())) return d;
  if (const auto* m = std::get_if<family::Measure>(&d.family())) {
    auto pts = m->points;
    for (auto& p : pts) p = -p;
    return Driver::measure(std::move(pts), m->weights);
  }
  Affine a = d.affine();
  a.value_scale = -a.value_scale;
  a.offset = -a.offset;
  return Driver::make(d.family(), a);
}

Driver time_advance(const Driver& d, double s) {
  if (!std::isfinite(s) || s < 0.0) invalid("time advance must be nonnegative");
  if (d.is_measure() || s == 0.0) return d;
  Affine a = d.affine();
  a.time_offset += a.time_scale * s;
  return Driver::make(d.family(), a);
}

double holder_half_coefficient(const Driver& d, double window) {
  const auto* s = std::get_if<family::Sampled>(&d.family());
  if (s == nullptr) invalid("Hoelder coefficient is only defined for sampled drivers");
  if (!(window > 0.0)) invalid("window must be positive");
  double best = 0.0;
  const std::size_t n = s->times.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n && s->times[j] - s->times[i] <= window; ++j) {
      const double c = std::abs(s->values[j] - s->values[i]) / std::sqrt(s->times[j] - s->times[i]);
      best = std::max(best, c);
    }
  }
  return best;
}

nlohmann::json driver_to_json(const Driver& d) {
  nlohmann::json params = nlohmann::json::object();
  std::visit(overloaded{
                 [&](const family::Constant& c) { params["A"] = c.A; },
                 [&](const family::SqrtUp& s) { params["kappa"] = s.kappa; },
                 [&](const family::SqrtDown& s) { params["kappa"] = s.kappa; },
                 [&](const family::Measure& m) {
                   params["points"] = m.points;
                   params["weights"] = m.weights;
                 },
                 [&](const family::Sampled& s) {
                   params["times"] = s.times;
                   params["values"] = s.values;
                 },
                 [](const auto&) {},
             },
             d.family());
  const Affine& a = d.affine();
  if (!a.is_identity()) {
    params["value_scale"] = a.value_scale;
    params["offset"] = a.offset;
    params["time_scale"] = a.time_scale;
    params["time_offset"] = a.time_offset;
  }
  nlohmann::json j;
  j["family"] = d.family_name();
  j["params"] = params;
  const double tmax = d.is_pointwise() ? d.t_max() : kInf;
  if (std::isfinite(tmax))
    j["t_max"] = tmax;
  else
    j["t_max"] = nullptr;
  return j;
}

Driver driver_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    invalid("driver descriptor needs a string \"family\"");
  const std::string name = j["family"].get<std::string>();
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  auto num = [&](const char* key) {
    if (!params.contains(key) || !params[key].is_number())
      invalid(std::string("driver parameter \"") + key + "\" missing or not a number");
    return params[key].get<double>();
  };
  auto list = [&](const char* key) {
    if (!params.contains(key) || !params[key].is_array())
      invalid(std::string("driver parameter \"") + key + "\" missing or not an array");
    return params[key].get<std::vector<double>>();
  };

  Driver d = [&] {
    if (name == "constant") return Driver::constant(num("A"));
    if (name == "linear") return Driver::linear();
    if (name == "sqrt-up") return Driver::sqrt_up(num("kappa"));
    if (name == "sqrt-down") return Driver::sqrt_down(num("kappa"));
    if (name == "arc") return Driver::arc();
    if (name == "kufarev") return Driver::kufarev();
    if (name == "two-point") return Driver::two_point();
    if (name == "measure") return Driver::measure(list("points"), list("weights"));
    if (name == "sampled") return Driver::sampled(list("times"), list("values"));
    invalid("unknown driver family \"" + name + "\"");
  }();

  if (params.contains("value_scale")) {
    Affine a;
    a.value_scale = num("value_scale");
    a.offset = num("offset");
    a.time_scale = num("time_scale");
    a.time_offset = num("time_offset");
    if (!(a.time_scale > 0.0)) invalid("time_scale must be positive");
    if (d.is_measure()) invalid("measure drivers carry no affine transform");
    return Driver::make(d.family(), a);
  }
  return d;
}

void SolverConfig::check() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) invalid("dt must be positive");
  if (!(endpoint_cutoff > 0.0 && endpoint_cutoff < 1.0)) invalid("endpoint_cutoff must lie in (0,1)");
  if (!(newton_tol > 0.0)) invalid("newton_tol must be positive");
  if (newton_max_iter < 1) invalid("newton_max_iter must be at least 1");
  if (!(far_field_radius >= 100.0)) invalid("far_field_radius must be at least 100");
  if (!(swallow_threshold > 0.0)) invalid("swallow_threshold must be positive");
  if (!(dt_min > 0.0) || dt_min > dt) invalid("dt_min must be positive and not exceed dt");
}

}  // namespace loewner
