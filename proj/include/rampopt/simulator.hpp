#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "rampopt/lasting.hpp"
#include "rampopt/optimizer.hpp"
#include "rampopt/retention.hpp"

namespace rampopt {

/// Population model for the cohort engine: either a retention curve sampled
/// directly, or an ARUM whose per-user noise draws are replayed explicitly.
using PopulationModel = std::variant<RetentionCurve, ArumSpec>;

struct CohortConfig {
  std::int64_t n_users = 0;
  std::uint64_t seed = 0;
  PopulationModel model;
  LastingEffect lasting = LastingEffect::none();
  std::vector<double> increments;  // per-period step sizes, all > 0
  int n_threads = 0;               // 0 = hardware concurrency
};

struct CohortResult {
  std::vector<std::int64_t> survivors_per_period;
  std::vector<double> survival_fraction;
  std::vector<WilsonInterval> ci_95;
  std::vector<double> realized_revenue;  // r(cumulative x) * survivors
  std::uint64_t seed = 0;
  std::int64_t n_users = 0;
};

/// Replays each user's stay/leave decisions period by period. Departure is
/// absorbing. Per-user draws are indexed by (seed, user, period, stream), so
/// the result is bit-identical across thread counts.
CohortResult simulate_schedule(const CohortConfig& cfg, const RevenueModel& rev);
CohortResult simulate_schedule(const CohortConfig& cfg);  // Identity revenue

struct AbEstimate {
  std::vector<double> x_samples;
  std::vector<double> p_hat;
  std::vector<WilsonInterval> ci_95;
  RetentionCurve fitted;
  std::uint64_t seed = 0;
  std::int64_t n_per_arm = 0;
  bool wide_ci_warning = false;  // some arm's 95% interval wider than 0.05
};

/// Single-increase A/B arms: for each sample x, n_per_arm fresh users see one
/// increase of x; the surviving fraction estimates p(x). Arms use separate
/// RNG streams so adding arms never changes another arm's draws.
AbEstimate estimate_p(const PopulationModel& model, std::vector<double> x_samples,
                      std::int64_t n_per_arm, std::uint64_t seed, int n_threads = 0);

/// Pool-adjacent-violators fit of a non-increasing curve through the
/// estimates, with the exact point (0, 1) prepended.
RetentionCurve monotone_fit(std::span<const double> xs, std::span<const double> ps);

struct EndToEndResult {
  AbEstimate estimate;
  OptimizationResult result;
};

/// estimate_p, then optimize_sweep on the fitted curve. bypass_estimation
/// requires a RetentionCurve model and uses its exact values as the
/// estimates (no simulation noise).
EndToEndResult end_to_end_estimate_and_optimize(
    const PopulationModel& model, std::vector<double> x_samples, std::int64_t n_per_arm,
    std::uint64_t seed, const RevenueModel& rev, double grid_step = 1e-3,
    std::int64_t z_max = 10000, bool bypass_estimation = false, int n_threads = 0);

}  // namespace rampopt
