#include "rampopt/retention.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rampopt {

namespace {

[[noreturn]] void domain_fail(const std::string& msg) { throw std::domain_error(msg); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// CostFn / NoiseDist / ArumSpec
// ---------------------------------------------------------------------------

CostFn CostFn::linear(double slope) {
  if (!(slope >= 0.0)) throw std::invalid_argument("cost: linear slope must be >= 0");
  return CostFn{Kind::Linear, slope, 1.0};
}

CostFn CostFn::power(double coeff, double exponent) {
  if (!(coeff >= 0.0)) throw std::invalid_argument("cost: power coeff must be >= 0");
  if (!(exponent >= 1.0)) throw std::invalid_argument("cost: power exponent must be >= 1");
  return CostFn{Kind::Power, coeff, exponent};
}

double CostFn::operator()(double x) const {
  switch (kind) {
    case Kind::Linear: return coeff * x;
    case Kind::Power: return coeff * std::pow(x, exponent);
  }
  return 0.0;
}

std::string CostFn::describe() const {
  switch (kind) {
    case Kind::Linear: return "linear(slope=" + fmt(coeff) + ")";
    case Kind::Power: return "power(coeff=" + fmt(coeff) + ", exponent=" + fmt(exponent) + ")";
  }
  return {};
}

NoiseDist NoiseDist::normal(double mean, double sd) {
  if (!(sd > 0.0)) throw std::invalid_argument("noise: normal sd must be > 0");
  return NoiseDist{Kind::Normal, mean, sd};
}

NoiseDist NoiseDist::uniform(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("noise: uniform requires lo < hi");
  return NoiseDist{Kind::Uniform, lo, hi};
}

NoiseDist NoiseDist::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("noise: exponential rate must be > 0");
  return NoiseDist{Kind::Exponential, rate, 0.0};
}

NoiseDist NoiseDist::logistic(double loc, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("noise: logistic scale must be > 0");
  return NoiseDist{Kind::Logistic, loc, scale};
}

double NoiseDist::cdf(double y) const {
  switch (kind) {
    case Kind::Normal:
      return normal_cdf((y - a) / b);
    case Kind::Uniform:
      return std::clamp((y - a) / (b - a), 0.0, 1.0);
    case Kind::Exponential:
      return y <= 0.0 ? 0.0 : -std::expm1(-a * y);
    case Kind::Logistic:
      return 1.0 / (1.0 + std::exp(-(y - a) / b));
  }
  return 0.0;
}

double NoiseDist::quantile(double u) const {
  switch (kind) {
    case Kind::Normal:
      return a + b * normal_quantile(u);
    case Kind::Uniform:
      return a + u * (b - a);
    case Kind::Exponential:
      return -std::log1p(-u) / a;
    case Kind::Logistic:
      return a + b * std::log(u / (1.0 - u));
  }
  return 0.0;
}

std::string NoiseDist::describe() const {
  switch (kind) {
    case Kind::Normal: return "normal(" + fmt(a) + ", " + fmt(b) + ")";
    case Kind::Uniform: return "uniform(" + fmt(a) + ", " + fmt(b) + ")";
    case Kind::Exponential: return "exponential(rate=" + fmt(a) + ")";
    case Kind::Logistic: return "logistic(" + fmt(a) + ", " + fmt(b) + ")";
  }
  return {};
}

ArumSpec::ArumSpec(double u0_, CostFn cost_, NoiseDist noise_)
    : u0(u0_), cost(cost_), noise(noise_) {
  if (!(u0 > 0.0)) throw std::invalid_argument("arum: u0 must be > 0");
}

std::string ArumSpec::describe() const {
  return "arum(u0=" + fmt(u0) + ", c=" + cost.describe() + ", Y~" + noise.describe() + ")";
}

// ---------------------------------------------------------------------------
// RetentionCurve
// ---------------------------------------------------------------------------

RetentionCurve::RetentionCurve(Family f, double jump, double domain_max, std::string name)
    : family_(std::move(f)), jump_(jump), domain_max_(domain_max), name_(std::move(name)) {}

RetentionCurve RetentionCurve::exp_power(double k) {
  if (!(k > 0.0)) throw std::invalid_argument("exp_power: k must be > 0");
  return RetentionCurve(ExpPower{k}, 1.0, kInf, "exp_power(k=" + fmt(k) + ")");
}

RetentionCurve RetentionCurve::poly_cap(double k) {
  if (!(k > 0.0)) throw std::invalid_argument("poly_cap: k must be > 0");
  return RetentionCurve(PolyCap{k}, 1.0, kInf, "poly_cap(k=" + fmt(k) + ")");
}

RetentionCurve RetentionCurve::inverse_power(double k) {
  if (!(k > 0.0)) throw std::invalid_argument("inverse_power: k must be > 0");
  return RetentionCurve(InversePower{k}, 1.0, kInf, "inverse_power(k=" + fmt(k) + ")");
}

RetentionCurve RetentionCurve::scaled_exp_power(double scale, double k) {
  if (!(scale > 0.0 && scale <= 1.0))
    throw std::invalid_argument("scaled_exp_power: scale must be in (0, 1]");
  if (!(k > 0.0)) throw std::invalid_argument("scaled_exp_power: k must be > 0");
  return RetentionCurve(ScaledExpPower{scale, k}, scale, kInf,
                        "scaled_exp_power(scale=" + fmt(scale) + ", k=" + fmt(k) + ")");
}

RetentionCurve RetentionCurve::arum(ArumSpec spec) {
  const double jump = spec.noise.cdf(spec.u0 - spec.cost(0.0));
  std::string name = spec.describe();
  return RetentionCurve(std::move(spec), jump, kInf, std::move(name));
}

RetentionCurve RetentionCurve::tabulated(std::vector<double> xs, std::vector<double> ps) {
  if (xs.size() != ps.size() || xs.empty())
    throw std::invalid_argument("tabulated: need equally many x and p samples");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(ps[i] >= 0.0 && ps[i] <= 1.0))
      throw std::invalid_argument("tabulated: p out of [0,1] at index " + std::to_string(i));
    if (i > 0 && !(xs[i] > xs[i - 1]))
      throw std::invalid_argument("tabulated: x samples must be strictly ascending");
    if (i > 0 && ps[i] > ps[i - 1])
      throw std::invalid_argument("tabulated: p samples must be non-increasing (violation at index " +
                                  std::to_string(i) + ")");
  }
  if (xs.front() == 0.0) {
    if (ps.front() != 1.0) throw std::invalid_argument("tabulated: p(0) must be exactly 1");
  } else {
    if (!(xs.front() > 0.0)) throw std::invalid_argument("tabulated: x must be >= 0");
    xs.insert(xs.begin(), 0.0);
    ps.insert(ps.begin(), 1.0);
  }
  const double dom = xs.back();
  return RetentionCurve(Tabulated{std::move(xs), std::move(ps)}, 1.0, dom,
                        "tabulated(" + std::to_string(ps.size()) + " points)");
}

const ArumSpec* RetentionCurve::arum_spec() const { return std::get_if<ArumSpec>(&family_); }

bool RetentionCurve::is_tabulated() const { return std::holds_alternative<Tabulated>(family_); }

std::string RetentionCurve::describe() const { return name_; }

double RetentionCurve::operator()(double x) const {
  if (!(x >= 0.0)) domain_fail("p(x): x must be >= 0, got " + fmt(x));
  if (x > domain_max_)
    domain_fail("p(x): x = " + fmt(x) + " beyond curve domain max " + fmt(domain_max_));
  if (x == 0.0) return 1.0;
  struct Eval {
    double x;
    double operator()(const ExpPower& f) const { return std::exp(-std::pow(x, f.k)); }
    double operator()(const PolyCap& f) const { return std::max(1.0 - std::pow(x, f.k), 0.0); }
    double operator()(const InversePower& f) const { return std::pow(1.0 + x, -f.k); }
    double operator()(const ScaledExpPower& f) const {
      return f.scale * std::exp(-std::pow(x, f.k));
    }
    double operator()(const ArumSpec& f) const {
      return std::clamp(f.retention(x), 0.0, 1.0);
    }
    double operator()(const Tabulated& f) const {
      auto it = std::upper_bound(f.x.begin(), f.x.end(), x);
      const std::size_t hi = std::min<std::size_t>(it - f.x.begin(), f.x.size() - 1);
      const std::size_t lo = hi - 1;
      const double t = (x - f.x[lo]) / (f.x[hi] - f.x[lo]);
      return f.p[lo] + t * (f.p[hi] - f.p[lo]);
    }
  };
  return std::visit(Eval{x}, family_);
}

double survival_s(const RetentionCurve& curve, double A, double x) {
  if (!(A > 0.0)) domain_fail("survival_s: A must be > 0");
  if (!(x > 0.0) || x > A)
    domain_fail("survival_s: need 0 < x <= A, got x = " + fmt(x) + ", A = " + fmt(A));
  const double p = curve(x);
  if (p == 0.0) return 0.0;
  return std::pow(p, A / x);
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

const char* to_string(CurvatureKind kind) {
  switch (kind) {
    case CurvatureKind::LogConcave: return "LogConcave";
    case CurvatureKind::LogConvex: return "LogConvex";
    case CurvatureKind::Neither: return "Neither";
    case CurvatureKind::DiscontinuousLogConcaveTail: return "DiscontinuousLogConcaveTail";
  }
  return "?";
}

CurvatureReport classify_curvature(const RetentionCurve& curve,
                                   std::span<const double> grid, double rel_tol) {
  if (grid.size() < 5)
    throw std::invalid_argument("classify_curvature: grid needs at least 5 points");
  std::vector<double> g(grid.size());
  double max_abs_g = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    if (!(x > 0.0) || x > curve.domain_max())
      throw std::invalid_argument("classify_curvature: grid point " + fmt(x) +
                                  " outside (0, domain_max)");
    if (i > 0 && !(x > grid[i - 1]))
      throw std::invalid_argument("classify_curvature: grid must be strictly ascending");
    const double p = curve(x);
    if (p <= 0.0)
      domain_fail("classify_curvature: p(x) = 0 at grid point x = " + fmt(x) +
                  ", log p undefined");
    g[i] = std::log(p);
    max_abs_g = std::max(max_abs_g, std::abs(g[i]));
  }

  CurvatureReport rep;
  rep.grid_points = grid.size();
  rep.jump_at_zero = curve.jump_at_zero();
  rep.threshold = rel_tol * std::max(1.0, max_abs_g);
  rep.max_second_diff = -kInf;
  rep.min_second_diff = kInf;
  double prev_slope = (g[1] - g[0]) / (grid[1] - grid[0]);
  for (std::size_t i = 2; i < grid.size(); ++i) {
    const double slope = (g[i] - g[i - 1]) / (grid[i] - grid[i - 1]);
    const double d2 = slope - prev_slope;
    rep.max_second_diff = std::max(rep.max_second_diff, d2);
    rep.min_second_diff = std::min(rep.min_second_diff, d2);
    prev_slope = slope;
  }

  const bool concave_tail = rep.max_second_diff <= rep.threshold;
  const bool convex_tail = rep.min_second_diff >= -rep.threshold;
  const bool continuous = std::abs(rep.jump_at_zero - 1.0) <= 1e-9;
  if (concave_tail && continuous) {
    rep.kind = CurvatureKind::LogConcave;
  } else if (convex_tail) {
    // A downward jump at zero is compatible with log-convexity on [0, inf).
    rep.kind = CurvatureKind::LogConvex;
  } else if (concave_tail && rep.jump_at_zero < 1.0) {
    rep.kind = CurvatureKind::DiscontinuousLogConcaveTail;
  } else {
    rep.kind = CurvatureKind::Neither;
  }
  return rep;
}

std::vector<double> default_classification_grid(const RetentionCurve& curve) {
  const double lo = 1e-4;
  const double hi = std::min(curve.domain_max(), 10.0);
  if (!(hi > lo))
    throw std::invalid_argument("default_classification_grid: curve domain too small");
  const std::size_t n = 256;
  std::vector<double> grid;
  grid.reserve(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::exp(llo + (lhi - llo) * double(i) / double(n - 1));
    if (curve(x) > 0.0) grid.push_back(x);
  }
  if (grid.size() < 5)
    domain_fail("default_classification_grid: p vanishes on almost all of (0, " + fmt(hi) + "]");
  return grid;
}

CurvatureReport classify_default(const RetentionCurve& curve, double rel_tol) {
  const auto grid = default_classification_grid(curve);
  return classify_curvature(curve, grid, rel_tol);
}

double tangent_point(const RetentionCurve& curve) {
  const auto rep = classify_default(curve);
  if (rep.kind != CurvatureKind::DiscontinuousLogConcaveTail)
    domain_fail("tangent_point: curve must be discontinuous at zero with a log-concave tail, "
                "classified " + std::string(to_string(rep.kind)) + " (" + curve.describe() + ")");

  const auto h = [&curve](double x) { return std::log(curve(x)) / x; };

  // Coarse argmax over the default grid, then expand right if the maximum
  // sits on the boundary, then refine by golden section.
  auto grid = default_classification_grid(curve);
  std::size_t best = 0;
  double best_val = -kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = h(grid[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = best > 0 ? grid[best - 1] : grid[best] * 0.5;
  double hi = best + 1 < grid.size() ? grid[best + 1] : grid[best];
  if (best + 1 == grid.size()) {
    // Maximum may lie beyond the scan window; march right while h keeps rising.
    double x = grid.back();
    double step = x;
    const double cap = std::min(curve.domain_max(), 1e9);
    while (x + step <= cap && curve(x + step) > 0.0 && h(x + step) > h(x)) {
      lo = x;
      x += step;
      step *= 2.0;
    }
    hi = std::min(x + step, cap);
    if (hi >= cap)
      domain_fail("tangent_point: log(p(x))/x keeps increasing; no interior maximum found for " +
                  curve.describe());
  }
  return golden_section_max(h, lo, hi, 1e-6);
}

ProductBoundReport product_bound_check(const RetentionCurve& curve,
                                       std::span<const double> increments,
                                       double rel_tol) {
  double sum = 0.0;
  double prod = 1.0;
  for (double dx : increments) {
    if (!(dx >= 0.0)) throw std::invalid_argument("product_bound_check: increments must be >= 0");
    sum += dx;
    prod *= curve(dx);
  }
  ProductBoundReport rep;
  rep.p_of_sum = curve(sum);
  rep.product = prod;
  const double tol = rel_tol * std::max({std::abs(rep.p_of_sum), std::abs(rep.product), 1e-30});
  if (std::abs(rep.p_of_sum - rep.product) <= tol)
    rep.cmp = 0;
  else
    rep.cmp = rep.p_of_sum < rep.product ? -1 : 1;
  return rep;
}

}  // namespace rampopt
