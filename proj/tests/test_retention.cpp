#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rampopt/retention.hpp"

using namespace rampopt;

namespace {

// Quadrature oracle for the standard normal CDF: Simpson's rule on the
// density over [-12, y], fine enough for ~1e-12 absolute error.
double normal_cdf_oracle(double y) {
  const double lo = -12.0;
  if (y <= lo) return 0.0;
  const int n = 40000;  // even
  const double h = (y - lo) / n;
  auto dens = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
  double acc = dens(lo) + dens(y);
  for (int i = 1; i < n; ++i) acc += dens(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * double(i) / double(n - 1));
  return out;
}

}  // namespace

TEST_CASE("eval_p piecewise definition and families") {
  const auto exp2 = RetentionCurve::exp_power(2.0);
  CHECK(exp2(0.0) == 1.0);
  CHECK(exp2(0.5) == doctest::Approx(0.7788007830714049).epsilon(1e-12));

  const auto scaled = RetentionCurve::scaled_exp_power(0.5, 2.0);
  CHECK(scaled(0.0) == 1.0);
  CHECK(scaled(1e-9) == doctest::Approx(0.5).epsilon(1e-9));  // the jump at zero
  CHECK(scaled.jump_at_zero() == 0.5);

  const auto arum = RetentionCurve::arum(
      ArumSpec(1.0, CostFn::linear(1.0), NoiseDist::normal(0.0, 1.0)));
  CHECK(arum(1.0) == doctest::Approx(0.5).epsilon(1e-12));  // F(0) by symmetry

  const auto inv = RetentionCurve::inverse_power(1.0);
  CHECK(inv(1.0) == doctest::Approx(0.5));
  CHECK(inv(2.0) == doctest::Approx(1.0 / 3.0));

  const auto cap = RetentionCurve::poly_cap(2.0);
  CHECK(cap(0.5) == doctest::Approx(0.75));
  CHECK(cap(1.0) == 0.0);
  CHECK(cap(3.0) == 0.0);

  CHECK_THROWS_AS(exp2(-0.1), std::domain_error);
}

TEST_CASE("retention curve invariants on a grid") {
  const std::vector<RetentionCurve> curves = {
      RetentionCurve::exp_power(2.0),
      RetentionCurve::exp_power(0.5),
      RetentionCurve::poly_cap(2.0),
      RetentionCurve::inverse_power(1.5),
      RetentionCurve::scaled_exp_power(0.7, 2.0),
      RetentionCurve::arum(ArumSpec(1.0, CostFn::linear(1.0), NoiseDist::logistic(0.0, 1.0))),
      RetentionCurve::tabulated({0.5, 1.0, 2.0}, {0.9, 0.6, 0.2}),
  };
  for (const auto& curve : curves) {
    CAPTURE(curve.describe());
    CHECK(curve(0.0) == 1.0);
    const double hi = std::min(curve.domain_max(), 8.0);
    double prev = curve.jump_at_zero();
    CHECK(std::abs(curve(1e-12) - curve.jump_at_zero()) < 1e-6);
    for (double x : linspace(1e-6, hi, 200)) {
      const double p = curve(x);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      CHECK(p <= prev + 1e-12);
      prev = p;
    }
  }
}

TEST_CASE("tabulated curves interpolate and refuse extrapolation") {
  const auto tab = RetentionCurve::tabulated({1.0, 2.0}, {0.8, 0.4});
  CHECK(tab(0.0) == 1.0);              // prepended exact origin
  CHECK(tab(0.5) == doctest::Approx(0.9));
  CHECK(tab(1.5) == doctest::Approx(0.6));
  CHECK(tab(2.0) == doctest::Approx(0.4));
  CHECK(tab.domain_max() == 2.0);
  CHECK_THROWS_AS(tab(2.5), std::domain_error);
  CHECK_THROWS_AS(RetentionCurve::tabulated({1.0, 2.0}, {0.5, 0.7}), std::invalid_argument);
  CHECK_THROWS_AS(RetentionCurve::tabulated({0.0, 1.0}, {0.9, 0.5}), std::invalid_argument);
}

TEST_CASE("normal_cdf against the quadrature oracle") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(normal_cdf(40.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-10));
  for (double y : {-3.0, -1.3, -0.2, 0.4, 1.0, 2.7, 5.0})
    CHECK(normal_cdf(y) == doctest::Approx(normal_cdf_oracle(y)).epsilon(1e-9));
  // Symmetry and monotonicity.
  double prev = -1.0;
  for (double y : linspace(-8.0, 8.0, 400)) {
    CHECK(normal_cdf(y) + normal_cdf(-y) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(normal_cdf(y) >= prev);
    prev = normal_cdf(y);
  }
}

TEST_CASE("normal_quantile inverts normal_cdf") {
  for (double u : {1e-9, 1e-4, 0.02, 0.3, 0.5, 0.7, 0.975, 0.9999, 1.0 - 1e-9})
    CHECK(normal_cdf(normal_quantile(u)) == doctest::Approx(u).epsilon(1e-9));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("survival function s_A") {
  const auto exp2 = RetentionCurve::exp_power(2.0);
  // p = e^{-x^2} gives s_A(x) = e^{-A x} analytically.
  CHECK(survival_s(exp2, 1.0, 0.5) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  for (double x : {0.1, 0.3, 0.9}) {
    CHECK(survival_s(exp2, 2.0, x) == doctest::Approx(std::exp(-2.0 * x)).epsilon(1e-12));
  }
  // p = e^{-sqrt(x)} gives s_A(x) = e^{-A/sqrt(x)}.
  const auto expr = RetentionCurve::exp_power(0.5);
  CHECK(survival_s(expr, 1.0, 0.25) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  // Single step: s_A(A) = p(A).
  for (const auto& curve : {exp2, RetentionCurve::inverse_power(2.0)})
    CHECK(survival_s(curve, 1.7, 1.7) == doctest::Approx(curve(1.7)).epsilon(1e-15));
  // p = 0 short-circuits.
  CHECK(survival_s(RetentionCurve::poly_cap(1.0), 3.0, 2.0) == 0.0);
  CHECK_THROWS_AS(survival_s(exp2, 1.0, 1.5), std::domain_error);
  CHECK_THROWS_AS(survival_s(exp2, 1.0, 0.0), std::domain_error);
}

TEST_CASE("curvature classification of the built-in families") {
  CHECK(classify_default(RetentionCurve::exp_power(2.0)).kind == CurvatureKind::LogConcave);
  CHECK(classify_default(RetentionCurve::exp_power(3.0)).kind == CurvatureKind::LogConcave);
  CHECK(classify_default(RetentionCurve::poly_cap(2.0)).kind == CurvatureKind::LogConcave);
  // Boundary: log p = -x is weakly both; the concave rule wins.
  CHECK(classify_default(RetentionCurve::exp_power(1.0)).kind == CurvatureKind::LogConcave);

  CHECK(classify_default(RetentionCurve::inverse_power(1.0)).kind == CurvatureKind::LogConvex);
  CHECK(classify_default(RetentionCurve::inverse_power(3.0)).kind == CurvatureKind::LogConvex);
  CHECK(classify_default(RetentionCurve::exp_power(0.5)).kind == CurvatureKind::LogConvex);

  CHECK(classify_default(RetentionCurve::scaled_exp_power(0.5, 2.0)).kind ==
        CurvatureKind::DiscontinuousLogConcaveTail);
  // Affine log tail with a jump is log-convex on the whole domain.
  CHECK(classify_default(RetentionCurve::scaled_exp_power(std::exp(-1.0), 1.0)).kind ==
        CurvatureKind::LogConvex);

  // A wiggle in the samples is neither.
  const auto wiggle =
      RetentionCurve::tabulated({0.5, 1.0, 1.5, 2.0, 2.5, 3.0}, {0.9, 0.6, 0.55, 0.2, 0.1, 0.05});
  CHECK(classify_default(wiggle).kind == CurvatureKind::Neither);

  // ARUM with normal noise: discontinuous at zero, log-concave tail.
  const auto arum_normal = RetentionCurve::arum(
      ArumSpec(1.0, CostFn::linear(1.0), NoiseDist::normal(0.0, 1.0)));
  const auto rep = classify_default(arum_normal);
  CHECK(rep.kind == CurvatureKind::DiscontinuousLogConcaveTail);
  CHECK(rep.jump_at_zero == doctest::Approx(normal_cdf(1.0)).epsilon(1e-12));
}

TEST_CASE("classification names a grid point where p vanishes") {
  const auto cap = RetentionCurve::poly_cap(2.0);
  const std::vector<double> grid = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2};
  CHECK_THROWS_WITH_AS(classify_curvature(cap, grid),
                       doctest::Contains("p(x) = 0 at grid point x = 1"), std::domain_error);
  // The default grid trims those points instead.
  CHECK(classify_default(cap).kind == CurvatureKind::LogConcave);
}

TEST_CASE("classification is reproducible") {
  const auto curve = RetentionCurve::arum(
      ArumSpec(2.0, CostFn::power(0.5, 2.0), NoiseDist::logistic(0.0, 0.7)));
  const auto a = classify_default(curve);
  const auto b = classify_default(curve);
  CHECK(a.kind == b.kind);
  CHECK(a.max_second_diff == b.max_second_diff);
  CHECK(a.min_second_diff == b.min_second_diff);
}

TEST_CASE("ARUM curves with full-support log-concave noise and convex cost are "
          "log-concave (continuous case)") {
  // F(u0 - c(0)) = 1 requires the noise support to stop at u0; uniform noise
  // with hi <= u0 qualifies.
  const std::vector<ArumSpec> specs = {
      ArumSpec(2.0, CostFn::linear(1.0), NoiseDist::uniform(-3.0, 2.0)),
      ArumSpec(1.0, CostFn::power(1.0, 2.0), NoiseDist::uniform(-1.0, 1.0)),
      ArumSpec(0.5, CostFn::power(2.0, 1.5), NoiseDist::uniform(-4.0, 0.5)),
  };
  for (const auto& spec : specs) {
    const auto curve = RetentionCurve::arum(spec);
    CAPTURE(curve.describe());
    CHECK(curve.jump_at_zero() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(classify_default(curve).kind == CurvatureKind::LogConcave);
  }
}

TEST_CASE("tangent point of discontinuous log-concave tails") {
  // Stationarity of (log s - x^2)/x gives xbar = sqrt(-log s).
  CHECK(tangent_point(RetentionCurve::scaled_exp_power(0.5, 2.0)) ==
        doctest::Approx(std::sqrt(std::log(2.0))).epsilon(1e-5));
  CHECK(tangent_point(RetentionCurve::scaled_exp_power(0.9, 2.0)) ==
        doctest::Approx(std::sqrt(-std::log(0.9))).epsilon(1e-5));

  // Dense-grid argmax oracle for a case without a hand closed form.
  const auto arum_normal = RetentionCurve::arum(
      ArumSpec(1.0, CostFn::linear(1.0), NoiseDist::normal(0.0, 1.0)));
  double best_x = 0.0, best_v = -1e300;
  for (double x : linspace(1e-4, 6.0, 200000)) {
    const double v = std::log(arum_normal(x)) / x;
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  CHECK(tangent_point(arum_normal) == doctest::Approx(best_x).epsilon(1e-4));

  // Not in the class: refused.
  CHECK_THROWS_AS(tangent_point(RetentionCurve::exp_power(2.0)), std::domain_error);
  // Affine log tail classifies LogConvex, so it is refused as well: the
  // survival function only becomes more favorable with larger steps there.
  CHECK_THROWS_AS(tangent_point(RetentionCurve::scaled_exp_power(std::exp(-1.0), 1.0)),
                  std::domain_error);
}

TEST_CASE("survival is unimodal around the tangent point") {
  const auto curve = RetentionCurve::scaled_exp_power(0.5, 2.0);
  const double xbar = tangent_point(curve);
  const double A = 5.0;
  const auto grid = linspace(1e-3, A, 2048);
  std::size_t argmax = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (survival_s(curve, A, grid[i]) > survival_s(curve, A, grid[argmax])) argmax = i;
  const double cell = grid[1] - grid[0];
  CHECK(std::abs(grid[argmax] - xbar) <= cell + 1e-9);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= xbar)
      CHECK(survival_s(curve, A, grid[i]) >=
            survival_s(curve, A, grid[i - 1]) * (1.0 - 1e-12));
    if (grid[i - 1] >= xbar)
      CHECK(survival_s(curve, A, grid[i]) <=
            survival_s(curve, A, grid[i - 1]) * (1.0 + 1e-12));
  }
}

TEST_CASE("product bound check") {
  const auto exp2 = RetentionCurve::exp_power(2.0);
  const std::vector<double> incs = {0.3, 0.7};
  const auto rep = product_bound_check(exp2, incs);
  CHECK(rep.p_of_sum == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(rep.product == doctest::Approx(std::exp(-0.58)).epsilon(1e-12));
  CHECK(rep.cmp == -1);

  const std::vector<double> single = {1.3};
  CHECK(product_bound_check(exp2, single).cmp == 0);

  const auto inv = RetentionCurve::inverse_power(1.0);
  const std::vector<double> two = {1.0, 1.0};
  const auto rep2 = product_bound_check(inv, two);
  CHECK(rep2.p_of_sum == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(rep2.product == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rep2.cmp == 1);
}

TEST_CASE("survival monotonicity and product bounds by curvature class") {
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::vector<RetentionCurve> concave = {
      RetentionCurve::exp_power(2.0), RetentionCurve::exp_power(1.5),
      RetentionCurve::poly_cap(2.0),
      RetentionCurve::arum(ArumSpec(2.0, CostFn::linear(1.0), NoiseDist::uniform(-3.0, 2.0)))};
  const std::vector<RetentionCurve> convex = {RetentionCurve::inverse_power(1.0),
                                              RetentionCurve::inverse_power(2.5),
                                              RetentionCurve::exp_power(0.5)};
  for (double A : {0.5, 1.0, 2.0, 5.0}) {
    const auto grid = linspace(A * 1e-3, A, 512);
    for (const auto& curve : concave) {
      CAPTURE(curve.describe());
      for (std::size_t i = 1; i < grid.size(); ++i)
        CHECK(survival_s(curve, A, grid[i]) <=
              survival_s(curve, A, grid[i - 1]) * (1.0 + 1e-12));
    }
    for (const auto& curve : convex) {
      CAPTURE(curve.describe());
      for (std::size_t i = 1; i < grid.size(); ++i)
        CHECK(survival_s(curve, A, grid[i]) >=
              survival_s(curve, A, grid[i - 1]) * (1.0 - 1e-12));
    }
  }
  // Randomized increment lists: p(sum) <= prod for log-concave, >= for log-convex.
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> incs(2 + trial % 5);
    for (auto& v : incs) v = unif(gen) * 0.8;
    for (const auto& curve : concave) CHECK(product_bound_check(curve, incs).cmp <= 0);
    for (const auto& curve : convex) CHECK(product_bound_check(curve, incs).cmp >= 0);
  }
}
