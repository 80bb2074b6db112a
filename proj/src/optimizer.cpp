#include "rampopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rampopt/rng.hpp"

namespace rampopt {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("revenue model: delta must be in (0, 1), got " + fmt(delta));
}

}  // namespace

RevenueModel RevenueModel::identity(double delta) {
  check_delta(delta);
  return RevenueModel{Family::Identity, 1.0, 0.0, 1.0, delta};
}

RevenueModel RevenueModel::power(double a, double delta) {
  check_delta(delta);
  if (!(a > 0.0)) throw std::invalid_argument("revenue model: power exponent must be > 0");
  return RevenueModel{Family::Power, a, 0.0, 1.0, delta};
}

RevenueModel RevenueModel::affine(double intercept, double slope, double delta) {
  check_delta(delta);
  if (!(intercept >= 0.0)) throw std::invalid_argument("revenue model: intercept must be >= 0");
  if (!(slope > 0.0)) throw std::invalid_argument("revenue model: slope must be > 0");
  return RevenueModel{Family::Affine, 1.0, intercept, slope, delta};
}

RevenueModel RevenueModel::log_shifted(double delta) {
  check_delta(delta);
  return RevenueModel{Family::LogShifted, 1.0, 0.0, 1.0, delta};
}

double RevenueModel::revenue(double x) const {
  switch (family) {
    case Family::Identity: return x;
    case Family::Power: return std::pow(x, a);
    case Family::Affine: return intercept + slope * x;
    case Family::LogShifted: return std::log1p(x);
  }
  return x;
}

std::string RevenueModel::describe() const {
  switch (family) {
    case Family::Identity: return "identity";
    case Family::Power: return "power(a=" + fmt(a) + ")";
    case Family::Affine: return "affine(" + fmt(intercept) + " + " + fmt(slope) + " x)";
    case Family::LogShifted: return "log_shifted";
  }
  return {};
}

double revenue_pi(const RetentionCurve& curve, const RevenueModel& rev, Schedule sched) {
  check_delta(rev.delta);
  if (sched.z < 1) throw std::invalid_argument("revenue_pi: z must be >= 1");
  if (!(sched.x > 0.0)) throw std::domain_error("revenue_pi: x must be > 0");
  const double p = curve(sched.x);
  const double delta = rev.delta;
  double sum = 0.0;
  double disc = 1.0;  // delta^{i-1}
  double pk = 1.0;    // p^i
  for (std::int64_t i = 1; i < sched.z; ++i) {
    pk *= p;
    sum += disc * pk * rev.revenue(sched.x * double(i));
    disc *= delta;
  }
  pk *= p;
  sum += disc / (1.0 - delta) * pk * rev.revenue(sched.x * double(sched.z));
  return sum;
}

ZStarResult z_star(const RetentionCurve& curve, const RevenueModel& rev, double x,
                   std::int64_t z_max) {
  if (!(x > 0.0)) throw std::domain_error("z_star: x must be > 0");
  if (z_max < 1) throw std::invalid_argument("z_star: z_max must be >= 1");
  const double p = curve(x);
  for (std::int64_t z = 1; z < z_max; ++z) {
    // r(xz)/r(x(z+1)) >= p, in product form to tolerate r -> 0.
    if (rev.revenue(x * double(z)) >= p * rev.revenue(x * double(z + 1)))
      return {z, false};
  }
  const bool final_ok =
      rev.revenue(x * double(z_max)) >= p * rev.revenue(x * double(z_max + 1));
  return {z_max, !final_ok};
}

ZStarResult z_star_lasting(const RetentionCurve& curve, const RevenueModel& rev,
                           const LastingEffect& eff, double x, std::int64_t z_max) {
  if (!(x > 0.0)) throw std::domain_error("z_star_lasting: x must be > 0");
  if (z_max < 1) throw std::invalid_argument("z_star_lasting: z_max must be >= 1");
  const double p = curve(x);
  for (std::int64_t z = 1; z < z_max; ++z) {
    const double lift = eff.epsilon * eff.d(double(z) * x);
    if (rev.revenue(x * double(z)) >= (p - lift) * rev.revenue(x * double(z + 1)))
      return {z, false};
  }
  const double lift = eff.epsilon * eff.d(double(z_max) * x);
  const bool final_ok =
      rev.revenue(x * double(z_max)) >= (p - lift) * rev.revenue(x * double(z_max + 1));
  return {z_max, !final_ok};
}

OneStepResult optimize_one_step(const RetentionCurve& curve, const RevenueModel& rev,
                                std::span<const double> x_grid) {
  if (x_grid.empty()) throw std::invalid_argument("optimize_one_step: empty grid");
  const auto rep = classify_default(curve);
  if (rep.kind != CurvatureKind::LogConvex)
    throw std::domain_error("optimize_one_step: requires a log-convex curve, " +
                            curve.describe() + " classified " + to_string(rep.kind));

  const auto objective = [&](double x) { return curve(x) * rev.revenue(x); };
  std::size_t best = 0;
  double best_val = objective(x_grid[0]);
  for (std::size_t i = 1; i < x_grid.size(); ++i) {
    const double v = objective(x_grid[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double lo = best > 0 ? x_grid[best - 1] : x_grid[best];
  const double hi = best + 1 < x_grid.size() ? x_grid[best + 1] : x_grid[best];
  double x_star = x_grid[best];
  if (lo < hi) {
    const double refined = golden_section_max(objective, lo, hi, 1e-6);
    if (objective(refined) > objective(x_star)) x_star = refined;
  }

  OneStepResult res;
  res.x = x_star;
  res.value = revenue_pi(curve, rev, Schedule{x_star, 1});

  // Dominance audit: one step at x_star must beat randomized multi-step plans.
  CounterRng rng(0x9e3779b97f4a7c15ULL, 7);
  for (int probe = 0; probe < 200; ++probe) {
    const double x = rng.next_uniform(x_grid.front(), x_grid.back());
    const auto z = rng.next_int(1, 50);
    const double pi = revenue_pi(curve, rev, Schedule{x, z});
    if (pi > res.value * (1.0 + 1e-9))
      throw std::logic_error("optimize_one_step: dominance audit failed at (x=" + fmt(x) +
                             ", z=" + std::to_string(z) + "): " + fmt(pi) + " > " +
                             fmt(res.value));
  }
  return res;
}

OptimizationResult optimize_sweep(const RetentionCurve& curve, const RevenueModel& rev,
                                  std::span<const double> x_grid, std::int64_t z_max,
                                  int n_threads) {
  if (x_grid.empty()) throw std::invalid_argument("optimize_sweep: empty grid");
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    if (!(x_grid[i] > 0.0)) throw std::invalid_argument("optimize_sweep: grid must be positive");
    if (i > 0 && !(x_grid[i] > x_grid[i - 1]))
      throw std::invalid_argument("optimize_sweep: grid must be strictly ascending");
  }

  OptimizationResult res;
  res.trace.resize(x_grid.size());

  const auto eval_entry = [&](std::size_t idx) {
    const double x = x_grid[idx];
    const auto zs = z_star(curve, rev, x, z_max);
    res.trace[idx] = TraceEntry{x, zs.z, revenue_pi(curve, rev, Schedule{x, zs.z}), zs.capped};
  };

  std::size_t hw = n_threads > 0 ? std::size_t(n_threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  hw = std::min(hw, x_grid.size());
  if (hw <= 1 || x_grid.size() < 256) {
    for (std::size_t i = 0; i < x_grid.size(); ++i) eval_entry(i);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(hw);
    const std::size_t chunk = (x_grid.size() + hw - 1) / hw;
    for (std::size_t t = 0; t < hw; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(lo + chunk, x_grid.size());
      if (lo >= hi) break;
      workers.emplace_back([lo, hi, &eval_entry] {
        for (std::size_t i = lo; i < hi; ++i) eval_entry(i);
      });
    }
    for (auto& w : workers) w.join();
  }

  // Ordered reduction; strict > keeps the smallest x on ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    if (res.trace[i].pi > res.trace[best].pi) best = i;
  res.best = Schedule{res.trace[best].x, res.trace[best].z};
  res.value = res.trace[best].pi;
  res.one_step_shortcut_used = false;
  for (const auto& e : res.trace) res.capped_entries += e.capped ? 1 : 0;
  return res;
}

std::vector<double> make_default_grid(const RetentionCurve& curve, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("make_default_grid: step must be > 0");
  // Smallest x with p(x) < 1e-6 (p is non-increasing), found by doubling
  // then bisection; the sweep has nothing to gain beyond it.
  const double p_floor = 1e-6;
  double upper = curve.domain_max();
  if (!std::isfinite(upper)) {
    double hi = step;
    const double cap = 1e7;
    while (hi < cap && curve(hi) >= p_floor) hi *= 2.0;
    if (curve(hi) < p_floor) {
      double lo = hi / 2.0;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (curve(mid) < p_floor ? hi : lo) = mid;
      }
      upper = hi;
    } else {
      upper = cap;
    }
  }
  const auto n = static_cast<std::size_t>(upper / step + 1e-9);
  if (n < 1)
    throw std::invalid_argument("make_default_grid: step larger than the usable domain");
  if (n > 20'000'000)
    throw std::invalid_argument("make_default_grid: grid would need " + std::to_string(n) +
                                " points; pass an explicit grid or a larger step");
  std::vector<double> grid;
  grid.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = double(i) * step;
    if (x > upper) break;
    grid.push_back(x);
  }
  return grid;
}

OptimizationResult one_step_as_result(const RetentionCurve& curve, const RevenueModel& rev,
                                      std::span<const double> x_grid) {
  const auto one = optimize_one_step(curve, rev, x_grid);
  OptimizationResult res;
  res.best = Schedule{one.x, 1};
  res.value = one.value;
  res.one_step_shortcut_used = true;
  res.trace.reserve(x_grid.size());
  for (double x : x_grid)
    res.trace.push_back(TraceEntry{x, 1, revenue_pi(curve, rev, Schedule{x, 1}), false});
  return res;
}

}  // namespace rampopt
