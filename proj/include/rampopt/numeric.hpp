#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>

namespace rampopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Standard normal CDF via erfc. Monotone, absolute error well below 1e-7.
inline double normal_cdf(double y) {
  return 0.5 * std::erfc(-y / std::sqrt(2.0));
}

/// Standard normal density.
inline double normal_pdf(double y) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * y * y);
}

/// Inverse standard normal CDF. Acklam's rational approximation followed by
/// one Halley step against normal_cdf, good to ~1e-15 on (0,1).
double normal_quantile(double u);

/// Wilson score interval for a binomial proportion at 95% confidence.
struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
};

WilsonInterval wilson_95(std::int64_t successes, std::int64_t trials);

/// Golden-section maximization of a unimodal function on [a, b].
/// Terminates when the bracket width falls below rel_tol relative to |x|.
template <typename F>
double golden_section_max(F&& f, double a, double b, double rel_tol = 1e-6,
                          int max_iter = 200) {
  if (!(a < b)) throw std::invalid_argument("golden_section_max: a < b required");
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter; ++it) {
    if (b - a <= rel_tol * (std::abs(a) + std::abs(b)) / 2.0 + 1e-300) break;
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

}  // namespace rampopt
