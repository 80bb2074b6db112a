#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rampopt/lasting.hpp"
#include "rampopt/retention.hpp"

namespace rampopt {

/// Per-user revenue r(x) at total inconvenience x, plus the per-period
/// discount factor. All built-in families are non-decreasing and log-concave.
struct RevenueModel {
  enum class Family { Identity, Power, Affine, LogShifted };
  Family family = Family::Identity;
  double a = 1.0;          // exponent (Power)
  double intercept = 0.0;  // Affine
  double slope = 1.0;      // Affine
  double delta = 0.9;      // discount factor in (0, 1)

  static RevenueModel identity(double delta);
  static RevenueModel power(double a, double delta);
  static RevenueModel affine(double intercept, double slope, double delta);
  static RevenueModel log_shifted(double delta);

  double revenue(double x) const;
  std::string describe() const;
};

struct Schedule {
  double x = 0.0;       // per-step increase
  std::int64_t z = 1;   // number of increases
  double total() const { return x * double(z); }
};

/// Discounted infinite-horizon revenue of performing z increases of size x:
/// sum_{i=1}^{z-1} delta^{i-1} p(x)^i r(x i) + delta^{z-1}/(1-delta) p(x)^z r(x z).
double revenue_pi(const RetentionCurve& curve, const RevenueModel& rev, Schedule sched);

struct ZStarResult {
  std::int64_t z = 1;
  bool capped = false;  // scan stopped at z_max without meeting the condition
};

/// Smallest z with r(x z)/r(x (z+1)) >= p(x); the maximizer of revenue_pi in z
/// for log-concave r. Capped at z_max.
ZStarResult z_star(const RetentionCurve& curve, const RevenueModel& rev, double x,
                   std::int64_t z_max = 10000);

/// Lasting-effects variant: smallest z with
/// r(x z)/r(x (z+1)) + eps*d(z x) >= p(x). Equal to z_star when eps = 0.
ZStarResult z_star_lasting(const RetentionCurve& curve, const RevenueModel& rev,
                           const LastingEffect& eff, double x,
                           std::int64_t z_max = 10000);

struct TraceEntry {
  double x = 0.0;
  std::int64_t z = 1;
  double pi = 0.0;
  bool capped = false;
};

struct OptimizationResult {
  Schedule best;
  double value = 0.0;
  std::vector<TraceEntry> trace;
  bool one_step_shortcut_used = false;
  std::int64_t capped_entries = 0;
};

struct OneStepResult {
  double x = 0.0;
  double value = 0.0;
};

/// For log-convex curves a single increase is optimal; maximizes p(x) r(x)
/// over the grid, refines by golden section in the bracketing cell, and
/// audits the result against randomized (x, z) probes. Throws
/// std::domain_error when the curve does not classify LogConvex.
OneStepResult optimize_one_step(const RetentionCurve& curve, const RevenueModel& rev,
                                std::span<const double> x_grid);

/// One-dimensional sweep: for each grid x computes z*(x) and the revenue at
/// (x, z*(x)); ties break toward smaller x. Grid entries are independent and
/// evaluated in parallel; the merge is ordered so results do not depend on
/// thread count. n_threads = 0 picks hardware concurrency.
OptimizationResult optimize_sweep(const RetentionCurve& curve, const RevenueModel& rev,
                                  std::span<const double> x_grid,
                                  std::int64_t z_max = 10000, int n_threads = 0);

/// Grid {step, 2*step, ...} up to min(domain_max, smallest x with p(x) < 1e-6).
std::vector<double> make_default_grid(const RetentionCurve& curve, double step = 1e-3);

/// Wraps optimize_one_step as an OptimizationResult with a (x, 1, pi) trace.
OptimizationResult one_step_as_result(const RetentionCurve& curve, const RevenueModel& rev,
                                      std::span<const double> x_grid);

}  // namespace rampopt
