#include "rampopt/adaptation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rampopt {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

}  // namespace

AdaptationClock AdaptationClock::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("clock: constant level must be > 0");
  return AdaptationClock{Kind::Constant, c, 0.0};
}

AdaptationClock AdaptationClock::power(double c, double a) {
  if (!(c > 0.0)) throw std::invalid_argument("clock: power level must be > 0");
  if (!(a >= 0.0)) throw std::invalid_argument("clock: power exponent must be >= 0");
  return AdaptationClock{Kind::Power, c, a};
}

double AdaptationClock::operator()(double x) const {
  switch (kind) {
    case Kind::Constant: return c;
    case Kind::Power: return c * std::pow(x, a);
  }
  return c;
}

double AdaptationClock::derivative(double x) const {
  const double h = 1e-6 * std::max(std::abs(x), 1e-12);
  return ((*this)(x + h) - (*this)(x - h)) / (2.0 * h);
}

double AdaptationClock::elasticity() const {
  return kind == Kind::Power ? a : 0.0;
}

std::string AdaptationClock::describe() const {
  switch (kind) {
    case Kind::Constant: return "constant(" + fmt(c) + ")";
    case Kind::Power: return "power(c=" + fmt(c) + ", a=" + fmt(a) + ")";
  }
  return {};
}

double rollout_time(const AdaptationClock& clock, double A, double x) {
  if (!(A > 0.0)) throw std::domain_error("rollout_time: A must be > 0");
  if (!(x > 0.0) || x > A)
    throw std::domain_error("rollout_time: need 0 < x <= A, got x = " + fmt(x));
  return (A / x - 1.0) * clock(x);
}

InelasticityReport is_inelastic(const AdaptationClock& clock, std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("is_inelastic: empty grid");
  InelasticityReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (double x : grid) {
    if (!(x > 0.0)) throw std::invalid_argument("is_inelastic: grid must be positive");
    const double margin = clock(x) - x * clock.derivative(x);
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_x = x;
    }
  }
  rep.inelastic = rep.worst_margin > 0.0;
  return rep;
}

InelasticityReport is_inelastic(const AdaptationClock& clock) {
  std::vector<double> grid;
  grid.reserve(64);
  const double llo = std::log(1e-3), lhi = std::log(10.0);
  for (int i = 0; i < 64; ++i)
    grid.push_back(std::exp(llo + (lhi - llo) * double(i) / 63.0));
  return is_inelastic(clock, grid);
}

double avg_rate(const AdaptationClock& clock, double A, double x) {
  if (!(A > 0.0)) throw std::domain_error("avg_rate: A must be > 0");
  if (x == A)
    throw std::domain_error("avg_rate: rate is infinite for a single step (x = A)");
  if (!(x > 0.0) || x > A)
    throw std::domain_error("avg_rate: need 0 < x < A, got x = " + fmt(x));
  return A / rollout_time(clock, A, x);
}

double invert_rate(const AdaptationClock& clock, double A, double rbar) {
  if (!(A > 0.0)) throw std::domain_error("invert_rate: A must be > 0");
  if (!(rbar > 0.0) || !std::isfinite(rbar))
    throw std::range_error("invert_rate: rbar must be positive and finite");
  const auto rep = is_inelastic(clock);
  if (!rep.inelastic)
    throw std::domain_error(
        "invert_rate: clock " + clock.describe() +
        " is elastic (x*l'(x) >= l(x) at x = " + fmt(rep.worst_x) +
        "); t_A is not guaranteed monotone, refusing to invert");

  double lo = A * 1e-12;
  double hi = A * (1.0 - 1e-12);
  const double f_lo = avg_rate(clock, A, lo);
  const double f_hi = avg_rate(clock, A, hi);
  if (rbar < f_lo || rbar > f_hi)
    throw std::range_error("invert_rate: rbar = " + fmt(rbar) +
                           " outside attainable range [" + fmt(f_lo) + ", " + fmt(f_hi) + "]");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-9 * mid) break;
    if (avg_rate(clock, A, mid) < rbar)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace rampopt
