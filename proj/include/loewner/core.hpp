#pragma once

// Domain types shared by every part of the library: complex points, driving
// functions with their symmetry transforms, and solver configuration.

#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "loewner/error.hpp"

namespace loewner {

using ComplexPoint = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Slack allowed below the real axis for trace samples touching it.
inline constexpr double kTraceImagSlack = 1e-9;

/// Tolerance on the total mass of a discrete measure driver.
inline constexpr double kWeightSumTolerance = 1e-12;

namespace family {

struct Constant {
  double A = 0.0;
};
/// xi(t) = t
struct Linear {};
/// xi(t) = 2 sqrt(kappa t)
struct SqrtUp {
  double kappa = 0.0;
};
/// xi(t) = 2 sqrt(kappa (1 - t)), t in [0, 1)
struct SqrtDown {
  double kappa = 0.0;
};
/// xi(t) = 3 sqrt(1 - 2t) - 2, t in [0, 1/2); the trace is the unit half-circle
/// traversed from 1.
struct Arc {};
/// Negative-time driver xi(-s) = 3 sqrt(2s), stored on the positive axis s >= 0.
/// Its solution at time -T is the inverse of the forward map at time T of the
/// driver t -> 3 sqrt(2(T - t)); see exact_solutions::kufarev_check.
struct Kufarev {};
/// Time-independent measure with mass 1/2 at +1 and at -1.
struct TwoPoint {};
/// Time-independent discrete measure sum_j p_j delta(x - xi_j).
struct Measure {
  std::vector<double> points;
  std::vector<double> weights;
};
/// Tabulated forcing, linearly interpolated.
struct Sampled {
  std::vector<double> times;
  std::vector<double> values;
};

}  // namespace family

using Family = std::variant<family::Constant, family::Linear, family::SqrtUp, family::SqrtDown,
                            family::Arc, family::Kufarev, family::TwoPoint, family::Measure,
                            family::Sampled>;

/// xi(t) = value_scale * base(time_scale * t + time_offset) + offset.
/// Identity for freshly constructed drivers; produced by the symmetry
/// transforms for families that are not closed under them.
struct Affine {
  double value_scale = 1.0;
  double offset = 0.0;
  double time_scale = 1.0;
  double time_offset = 0.0;

  bool is_identity() const {
    return value_scale == 1.0 && offset == 0.0 && time_scale == 1.0 && time_offset == 0.0;
  }
  bool operator==(const Affine&) const = default;
};

/// One atom of a measure driver.
struct Atom {
  double point;
  double weight;
};

/// Immutable driving function. Construct through the named factories, which
/// enforce the family invariants.
class Driver {
 public:
  static Driver constant(double A);
  static Driver linear();
  static Driver sqrt_up(double kappa);
  static Driver sqrt_down(double kappa);
  static Driver arc();
  static Driver kufarev();
  static Driver two_point();
  static Driver measure(std::vector<double> points, std::vector<double> weights);
  static Driver sampled(std::vector<double> times, std::vector<double> values);

  const Family& family() const { return family_; }
  const Affine& affine() const { return affine_; }

  /// Name used in JSON descriptors and on the command line.
  std::string family_name() const;

  /// Drivers with a pointwise value xi(t); false for TwoPoint and Measure.
  bool is_pointwise() const;
  bool is_measure() const { return !is_pointwise(); }

  /// SqrtDown and Arc blow up (in derivative) at t_max; traces stop short of it.
  bool has_terminal_singularity() const;

  /// Start of the validity domain (0 except for tabulated data).
  double t_min() const;
  /// End of the validity domain, +inf when unbounded.
  double t_max() const;

  /// Atoms of a measure driver; a single unit atom is never produced here for
  /// pointwise drivers (NotPointwise is thrown instead).
  std::vector<Atom> atoms() const;

 private:
  Driver(Family f, Affine a) : family_(std::move(f)), affine_(a) {}

  friend Driver transform_scale(const Driver&, double);
  friend Driver transform_shift(const Driver&, double);
  friend Driver reflect(const Driver&);
  friend Driver time_advance(const Driver&, double);
  friend Driver driver_from_json(const nlohmann::json&);
  static Driver make(Family f, Affine a);

  Family family_;
  Affine affine_;
};

/// xi(t). Throws OutOfDomain outside the validity domain and NotPointwise for
/// measure drivers.
double driver_eval(const Driver& d, double t);

/// t -> xi(alpha^2 t) / alpha. Measures have their atoms divided by alpha.
Driver transform_scale(const Driver& d, double alpha);
/// t -> xi(t) + alpha; measures have every atom shifted.
Driver transform_shift(const Driver& d, double alpha);
/// t -> -xi(t).
Driver reflect(const Driver& d);
/// t -> xi(t + s), the driver seen by a map started at time s. Measures are
/// time-independent and returned unchanged.
Driver time_advance(const Driver& d, double s);

/// Largest |xi(t_j) - xi(t_i)| / sqrt(t_j - t_i) over pairs of samples with
/// 0 < t_j - t_i <= window. Diagnostic for the Hoelder-1/2 slit criterion:
/// coefficients below 4 generate simple slits. Sampled drivers only.
double holder_half_coefficient(const Driver& d, double window);

nlohmann::json driver_to_json(const Driver& d);
Driver driver_from_json(const nlohmann::json& j);

enum class RootPolicy { UpperHalfPlane, ContinuityWithPrevious };

struct SolverConfig {
  double dt = 1e-5;
  /// Finite-time-singular drivers are traced up to t_max * (1 - endpoint_cutoff).
  double endpoint_cutoff = 1e-4;
  RootPolicy root_policy = RootPolicy::ContinuityWithPrevious;
  double newton_tol = 1e-14;
  int newton_max_iter = 60;
  double far_field_radius = 1e4;
  /// |g - xi| below which a point counts as swallowed.
  double swallow_threshold = 1e-6;
  /// Hard floor for the adaptive forward step.
  double dt_min = 1e-12;

  /// Throws InvalidArgument when an invariant is broken.
  void check() const;
};

}  // namespace loewner
