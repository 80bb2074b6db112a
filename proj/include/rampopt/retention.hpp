#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rampopt/numeric.hpp"

namespace rampopt {

// ---------------------------------------------------------------------------
// Additive random utility model: p(x) = F(u0 - c(x)) for x > 0, p(0) = 1.
// ---------------------------------------------------------------------------

/// Deterministic disutility c(x); non-decreasing with c(0) = 0.
struct CostFn {
  enum class Kind { Linear, Power };
  Kind kind = Kind::Linear;
  double coeff = 1.0;     // slope (Linear) or multiplier (Power)
  double exponent = 1.0;  // Power only, >= 1

  static CostFn linear(double slope);
  static CostFn power(double coeff, double exponent);
  double operator()(double x) const;
  std::string describe() const;
};

/// Distribution of the random disutility term Y.
struct NoiseDist {
  enum class Kind { Normal, Uniform, Exponential, Logistic };
  Kind kind = Kind::Normal;
  double a = 0.0;  // mean / lo / rate / location
  double b = 1.0;  // sd / hi / unused / scale

  static NoiseDist normal(double mean, double sd);
  static NoiseDist uniform(double lo, double hi);
  static NoiseDist exponential(double rate);
  static NoiseDist logistic(double loc, double scale);

  double cdf(double y) const;
  /// Inverse CDF for u in (0,1); used to replay per-user noise draws.
  double quantile(double u) const;
  std::string describe() const;
};

struct ArumSpec {
  double u0 = 1.0;
  CostFn cost;
  NoiseDist noise;

  ArumSpec(double u0, CostFn cost, NoiseDist noise);
  /// F(u0 - c(x)); callers handle the x = 0 special case.
  double retention(double x) const { return noise.cdf(u0 - cost(x)); }
  std::string describe() const;
};

// ---------------------------------------------------------------------------
// Retention curves
// ---------------------------------------------------------------------------

/// The probability p(x) that a user keeps using the site after a single
/// increase of magnitude x. Always p(0) = 1 and p non-increasing; the limit
/// at 0+ (jump_at_zero) may be below 1.
class RetentionCurve {
 public:
  static RetentionCurve exp_power(double k);               // e^{-x^k}
  static RetentionCurve poly_cap(double k);                // max(1 - x^k, 0)
  static RetentionCurve inverse_power(double k);           // (1 + x)^{-k}
  static RetentionCurve scaled_exp_power(double scale, double k);  // s e^{-x^k}
  static RetentionCurve arum(ArumSpec spec);
  /// Piecewise-linear curve through the given non-increasing samples.
  /// A leading (0, 1) point is prepended when absent; evaluation beyond the
  /// last sample is a domain error.
  static RetentionCurve tabulated(std::vector<double> xs, std::vector<double> ps);

  /// p(x). Throws std::domain_error for x < 0 or x > domain_max().
  double operator()(double x) const;

  double jump_at_zero() const { return jump_; }
  double domain_max() const { return domain_max_; }
  const ArumSpec* arum_spec() const;
  bool is_tabulated() const;
  std::string describe() const;

 private:
  struct ExpPower { double k; };
  struct PolyCap { double k; };
  struct InversePower { double k; };
  struct ScaledExpPower { double scale, k; };
  struct Tabulated { std::vector<double> x, p; };
  using Family =
      std::variant<ExpPower, PolyCap, InversePower, ScaledExpPower, ArumSpec, Tabulated>;

  RetentionCurve(Family f, double jump, double domain_max, std::string name);

  Family family_;
  double jump_;
  double domain_max_;
  std::string name_;
};

inline double eval_p(const RetentionCurve& curve, double x) { return curve(x); }

/// Expected fraction of users left after a total increase A applied in steps
/// of size x under complete adaptation: s_A(x) = p(x)^{A/x}. The exponent is
/// real-valued; integer-step semantics live in the lasting module and the
/// optimizer. Returns 0 when p(x) = 0.
double survival_s(const RetentionCurve& curve, double A, double x);

// ---------------------------------------------------------------------------
// Curvature classification
// ---------------------------------------------------------------------------

enum class CurvatureKind {
  LogConcave,
  LogConvex,
  Neither,
  DiscontinuousLogConcaveTail,
};

const char* to_string(CurvatureKind kind);

struct CurvatureReport {
  CurvatureKind kind = CurvatureKind::Neither;
  /// Largest (most convex) and smallest (most concave) change of slope of
  /// log p between adjacent grid cells.
  double max_second_diff = 0.0;
  double min_second_diff = 0.0;
  double threshold = 0.0;
  double jump_at_zero = 1.0;
  std::size_t grid_points = 0;
};

/// Classifies log-curvature of p on the given ascending grid by the sign of
/// the slope changes of log p. rel_tol is scaled by max(1, max |log p|).
/// Throws std::domain_error naming the first grid point with p(x) = 0.
CurvatureReport classify_curvature(const RetentionCurve& curve,
                                   std::span<const double> grid,
                                   double rel_tol = 1e-9);

/// 256 log-spaced points on (1e-4, min(domain_max, 10)], trimmed to the
/// region where p > 0 so log p is defined.
std::vector<double> default_classification_grid(const RetentionCurve& curve);

CurvatureReport classify_default(const RetentionCurve& curve, double rel_tol = 1e-9);

/// For a curve that is discontinuous at zero with a log-concave tail, the
/// step size x̄ where s_A switches from increasing to decreasing, i.e. the
/// maximizer of log(p(x))/x. Golden-section search to relative tol 1e-6.
/// Throws std::domain_error when the curve is not in that class.
double tangent_point(const RetentionCurve& curve);

// ---------------------------------------------------------------------------
// Product bound (one large step vs. several uneven steps)
// ---------------------------------------------------------------------------

struct ProductBoundReport {
  double p_of_sum = 0.0;  // p(sum of increments)
  double product = 0.0;   // prod of p(increment)
  int cmp = 0;            // -1: p_of_sum < product, 0: equal within tol, +1: greater
};

ProductBoundReport product_bound_check(const RetentionCurve& curve,
                                       std::span<const double> increments,
                                       double rel_tol = 1e-12);

}  // namespace rampopt
