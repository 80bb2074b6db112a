#include "rampopt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "rampopt/rng.hpp"

namespace rampopt {

namespace {

// Stream ids: cohort simulation uses 0, A/B arm j uses j + 1.
constexpr std::uint32_t kCohortStream = 0;

struct PeriodRule {
  // Direct mode: stay iff u < stay_prob. ARUM mode: stay iff Y < threshold.
  double stay_prob = 1.0;
  double threshold = 0.0;
};

std::vector<std::int64_t> run_cohort(std::int64_t n_users, std::uint64_t seed,
                                     std::uint32_t stream, bool arum_mode,
                                     const NoiseDist* noise,
                                     const std::vector<PeriodRule>& rules, int n_threads) {
  const std::size_t periods = rules.size();
  const auto simulate_range = [&](std::int64_t lo, std::int64_t hi,
                                  std::vector<std::int64_t>& counts) {
    for (std::int64_t user = lo; user < hi; ++user) {
      for (std::size_t i = 0; i < periods; ++i) {
        const double u = uniform01(seed, std::uint64_t(user),
                                   static_cast<std::uint32_t>(i + 1), stream);
        bool stays;
        if (arum_mode) {
          stays = noise->quantile(std::clamp(u, 1e-300, 1.0 - 1e-16)) < rules[i].threshold;
        } else {
          stays = u < rules[i].stay_prob;
        }
        if (!stays) break;
        counts[i] += 1;
      }
    }
  };

  std::size_t hw = n_threads > 0 ? std::size_t(n_threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  hw = std::min<std::size_t>(hw, 64);
  std::vector<std::int64_t> totals(periods, 0);
  if (hw <= 1 || n_users < 4096) {
    simulate_range(0, n_users, totals);
    return totals;
  }
  std::vector<std::vector<std::int64_t>> partials(hw, std::vector<std::int64_t>(periods, 0));
  std::vector<std::thread> workers;
  workers.reserve(hw);
  const std::int64_t chunk = (n_users + std::int64_t(hw) - 1) / std::int64_t(hw);
  for (std::size_t t = 0; t < hw; ++t) {
    const std::int64_t lo = std::int64_t(t) * chunk;
    const std::int64_t hi = std::min(lo + chunk, n_users);
    if (lo >= hi) break;
    workers.emplace_back([&, lo, hi, t] { simulate_range(lo, hi, partials[t]); });
  }
  for (auto& w : workers) w.join();
  for (const auto& part : partials)
    for (std::size_t i = 0; i < periods; ++i) totals[i] += part[i];
  return totals;
}

}  // namespace

CohortResult simulate_schedule(const CohortConfig& cfg, const RevenueModel& rev) {
  if (cfg.n_users < 1) throw std::invalid_argument("simulate_schedule: n_users must be >= 1");
  if (cfg.increments.empty())
    throw std::invalid_argument("simulate_schedule: schedule has no increments");
  for (double dx : cfg.increments)
    if (!(dx > 0.0)) throw std::invalid_argument("simulate_schedule: increments must be > 0");

  const auto* curve = std::get_if<RetentionCurve>(&cfg.model);
  const auto* arum = std::get_if<ArumSpec>(&cfg.model);
  const bool arum_mode = arum != nullptr;

  std::vector<PeriodRule> rules(cfg.increments.size());
  double cum_before = 0.0;
  for (std::size_t i = 0; i < cfg.increments.size(); ++i) {
    const double x = cfg.increments[i];
    const double deficit = cfg.lasting.epsilon * cfg.lasting.d(cum_before);
    if (arum_mode) {
      rules[i].threshold = arum->u0 - arum->cost(x) - deficit;
    } else {
      rules[i].stay_prob = std::clamp((*curve)(x) - deficit, 0.0, 1.0);
    }
    cum_before += x;
  }

  const auto totals = run_cohort(cfg.n_users, cfg.seed, kCohortStream, arum_mode,
                                 arum_mode ? &arum->noise : nullptr, rules, cfg.n_threads);

  CohortResult res;
  res.seed = cfg.seed;
  res.n_users = cfg.n_users;
  res.survivors_per_period = totals;
  res.survival_fraction.reserve(totals.size());
  res.ci_95.reserve(totals.size());
  res.realized_revenue.reserve(totals.size());
  double cum = 0.0;
  for (std::size_t i = 0; i < totals.size(); ++i) {
    cum += cfg.increments[i];
    res.survival_fraction.push_back(double(totals[i]) / double(cfg.n_users));
    res.ci_95.push_back(wilson_95(totals[i], cfg.n_users));
    res.realized_revenue.push_back(rev.revenue(cum) * double(totals[i]));
  }
  return res;
}

CohortResult simulate_schedule(const CohortConfig& cfg) {
  return simulate_schedule(cfg, RevenueModel::identity(0.9));
}

AbEstimate estimate_p(const PopulationModel& model, std::vector<double> x_samples,
                      std::int64_t n_per_arm, std::uint64_t seed, int n_threads) {
  if (x_samples.empty()) throw std::invalid_argument("estimate_p: no sample points");
  for (std::size_t i = 0; i < x_samples.size(); ++i) {
    if (!(x_samples[i] > 0.0)) throw std::invalid_argument("estimate_p: samples must be > 0");
    if (i > 0 && !(x_samples[i] > x_samples[i - 1]))
      throw std::invalid_argument("estimate_p: samples must be strictly ascending");
  }
  if (n_per_arm < 30) throw std::invalid_argument("estimate_p: n_per_arm must be >= 30");

  const auto* curve = std::get_if<RetentionCurve>(&model);
  const auto* arum = std::get_if<ArumSpec>(&model);
  const bool arum_mode = arum != nullptr;

  std::vector<double> p_hat(x_samples.size());
  std::vector<WilsonInterval> cis(x_samples.size());
  bool wide = false;
  for (std::size_t j = 0; j < x_samples.size(); ++j) {
    std::vector<PeriodRule> rule(1);
    if (arum_mode)
      rule[0].threshold = arum->u0 - arum->cost(x_samples[j]);
    else
      rule[0].stay_prob = (*curve)(x_samples[j]);
    const auto stream = static_cast<std::uint32_t>(j + 1);
    const auto totals = run_cohort(n_per_arm, seed, stream, arum_mode,
                                   arum_mode ? &arum->noise : nullptr, rule, n_threads);
    p_hat[j] = double(totals[0]) / double(n_per_arm);
    cis[j] = wilson_95(totals[0], n_per_arm);
    wide = wide || cis[j].width() > 0.05;
  }

  AbEstimate est{std::move(x_samples), std::move(p_hat), std::move(cis),
                 monotone_fit({}, {}), seed, n_per_arm, wide};
  est.fitted = monotone_fit(est.x_samples, est.p_hat);
  return est;
}

RetentionCurve monotone_fit(std::span<const double> xs, std::span<const double> ps) {
  if (xs.empty()) return RetentionCurve::tabulated({1.0}, {1.0});
  if (xs.size() != ps.size())
    throw std::invalid_argument("monotone_fit: mismatched sample arrays");

  // PAV for a non-increasing fit: merge adjacent blocks while a later block
  // averages higher than an earlier one.
  struct Block {
    double sum;
    std::int64_t weight;
    double mean() const { return sum / double(weight); }
  };
  std::vector<Block> blocks;
  blocks.reserve(ps.size());
  for (double v : ps) {
    blocks.push_back(Block{v, 1});
    while (blocks.size() > 1 &&
           blocks[blocks.size() - 2].mean() < blocks.back().mean()) {
      blocks[blocks.size() - 2].sum += blocks.back().sum;
      blocks[blocks.size() - 2].weight += blocks.back().weight;
      blocks.pop_back();
    }
  }
  std::vector<double> fit_x(xs.begin(), xs.end());
  std::vector<double> fit_p;
  fit_p.reserve(ps.size());
  for (const auto& b : blocks)
    for (std::int64_t i = 0; i < b.weight; ++i) fit_p.push_back(b.mean());

  // Strictly ascending x is guaranteed by the caller; tabulated() prepends
  // the exact (0, 1) point and validates monotonicity.
  return RetentionCurve::tabulated(std::move(fit_x), std::move(fit_p));
}

EndToEndResult end_to_end_estimate_and_optimize(
    const PopulationModel& model, std::vector<double> x_samples, std::int64_t n_per_arm,
    std::uint64_t seed, const RevenueModel& rev, double grid_step, std::int64_t z_max,
    bool bypass_estimation, int n_threads) {
  AbEstimate est = [&] {
    if (!bypass_estimation) return estimate_p(model, x_samples, n_per_arm, seed, n_threads);
    const auto* curve = std::get_if<RetentionCurve>(&model);
    if (!curve)
      throw std::invalid_argument("end_to_end: bypass_estimation needs a retention curve model");
    std::vector<double> exact(x_samples.size());
    std::vector<WilsonInterval> cis(x_samples.size());
    for (std::size_t j = 0; j < x_samples.size(); ++j) {
      exact[j] = (*curve)(x_samples[j]);
      cis[j] = WilsonInterval{exact[j], exact[j]};
    }
    AbEstimate e{std::move(x_samples), std::move(exact), std::move(cis),
                 monotone_fit({}, {}), seed, 0, false};
    e.fitted = monotone_fit(e.x_samples, e.p_hat);
    return e;
  }();

  const auto grid = make_default_grid(est.fitted, grid_step);
  EndToEndResult out{std::move(est), {}};
  out.result = optimize_sweep(out.estimate.fitted, rev, grid, z_max, n_threads);
  return out;
}

}  // namespace rampopt
