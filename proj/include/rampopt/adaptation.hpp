#pragma once

#include <span>
#include <string>
#include <vector>

namespace rampopt {

/// Time l(x) a user needs to adapt completely to an increase of size x.
struct AdaptationClock {
  enum class Kind { Constant, Power };
  Kind kind = Kind::Constant;
  double c = 1.0;  // level
  double a = 0.0;  // exponent (Power): l(x) = c * x^a

  static AdaptationClock constant(double c);
  static AdaptationClock power(double c, double a);

  double operator()(double x) const;
  /// Central finite-difference derivative, relative step 1e-6.
  double derivative(double x) const;
  /// x * l'(x) / l(x), exact for the closed-form families.
  double elasticity() const;
  std::string describe() const;
};

/// Total time to roll out a target increase A in steps of x:
/// t_A(x) = (A/x - 1) * l(x). Zero for a single step (x = A).
double rollout_time(const AdaptationClock& clock, double A, double x);

/// Whether x * l'(x) < l(x) holds on the grid (time to adapt is inelastic).
struct InelasticityReport {
  bool inelastic = false;
  double worst_margin = 0.0;  // min over the grid of l(x) - x * l'(x)
  double worst_x = 0.0;
};

InelasticityReport is_inelastic(const AdaptationClock& clock, std::span<const double> grid);
/// Same on a default grid of 64 log-spaced points on [1e-3, 10].
InelasticityReport is_inelastic(const AdaptationClock& clock);

/// Average rate of increase rbar = A / t_A(x) for 0 < x < A.
/// Throws std::domain_error for x = A, where the rate is infinite.
double avg_rate(const AdaptationClock& clock, double A, double x);

/// Unique x in (0, A) with avg_rate(A, x) = rbar, by bisection to relative
/// tolerance 1e-9. Requires an inelastic clock (t_A strictly decreasing);
/// throws std::range_error when rbar is outside the attainable range.
double invert_rate(const AdaptationClock& clock, double A, double rbar);

}  // namespace rampopt
