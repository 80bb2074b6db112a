#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "rampopt/retention.hpp"

namespace rampopt {

/// Incomplete adaptation: each step's retention is depressed by
/// epsilon * d(inconvenience accumulated before the step).
struct LastingEffect {
  enum class Decay { Linear, Power };
  double epsilon = 0.0;
  Decay decay = Decay::Linear;
  double decay_exponent = 1.0;  // Power only, > 0

  static LastingEffect none() { return {}; }
  static LastingEffect linear(double epsilon);
  static LastingEffect power(double epsilon, double exponent);

  /// d(t): strictly increasing, d(0) = 0.
  double d(double t) const;
};

/// Retention at the i-th increase of size x: max(p(x) - eps*d((i-1)x), 0).
double step_retention(const RetentionCurve& curve, const LastingEffect& eff,
                      double x, std::int64_t i);

/// Whether the i-th step's retention was clamped at zero.
bool step_retention_clamped(const RetentionCurve& curve, const LastingEffect& eff,
                            double x, std::int64_t i);

/// Survival after the full rollout: product of step_retention over
/// i = 1..z with z = round(A/x). x must be an admissible step size, i.e.
/// A/x within 1e-6 of an integer in [1, z_max]. With epsilon = 0 this is
/// the integer-exponent survival p(x)^z exactly.
double survival_s_lasting(const RetentionCurve& curve, const LastingEffect& eff,
                          double A, double x, std::int64_t z_max = 10000);

/// ARUM form of the step retention: F(u0 - c(x) - eps*d((i-1)x)).
double arum_step_retention(const ArumSpec& arum, const LastingEffect& eff,
                           double x, std::int64_t i);

/// Upper bound on survival_s_lasting from the tail-half of the product:
/// (p(x) - eps*d(A/2))_+ ^ floor(z/2).
double lasting_survival_bound(const RetentionCurve& curve, const LastingEffect& eff,
                              double A, std::int64_t z);

/// Searches the admissible step sizes A/z, z = 1..z_max, for a pair
/// x1 < x2 with s_{A,eps}(x1) < s_{A,eps}(x2), demonstrating that a lasting
/// effect breaks the gradual-is-better monotonicity. Returns the pair or
/// nullopt when survival is non-decreasing toward small steps throughout.
std::optional<std::pair<double, double>> nonmonotonicity_witness(
    const RetentionCurve& curve, const LastingEffect& eff, double A,
    std::int64_t z_max = 10000);

}  // namespace rampopt
