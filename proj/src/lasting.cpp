#include "rampopt/lasting.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rampopt {

LastingEffect LastingEffect::linear(double epsilon) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("lasting: epsilon must be >= 0");
  return LastingEffect{epsilon, Decay::Linear, 1.0};
}

LastingEffect LastingEffect::power(double epsilon, double exponent) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("lasting: epsilon must be >= 0");
  if (!(exponent > 0.0)) throw std::invalid_argument("lasting: decay exponent must be > 0");
  return LastingEffect{epsilon, Decay::Power, exponent};
}

double LastingEffect::d(double t) const {
  switch (decay) {
    case Decay::Linear: return t;
    case Decay::Power: return std::pow(t, decay_exponent);
  }
  return t;
}

namespace {

std::int64_t step_count(double A, double x, std::int64_t z_max) {
  if (!(A > 0.0) || !(x > 0.0))
    throw std::domain_error("survival_s_lasting: A and x must be > 0");
  const double ratio = A / x;
  const auto z = static_cast<std::int64_t>(std::llround(ratio));
  if (z < 1 || std::abs(ratio - double(z)) > 1e-6 * std::max(1.0, double(z)))
    throw std::domain_error("survival_s_lasting: x must divide A into an integer number "
                            "of steps (A/x = " + std::to_string(ratio) + ")");
  if (z > z_max)
    throw std::domain_error("survival_s_lasting: step count " + std::to_string(z) +
                            " exceeds z_max = " + std::to_string(z_max));
  return z;
}

}  // namespace

double step_retention(const RetentionCurve& curve, const LastingEffect& eff,
                      double x, std::int64_t i) {
  if (!(x > 0.0)) throw std::domain_error("step_retention: x must be > 0");
  if (i < 1) throw std::domain_error("step_retention: i must be >= 1");
  const double raw = curve(x) - eff.epsilon * eff.d(double(i - 1) * x);
  return std::max(raw, 0.0);
}

bool step_retention_clamped(const RetentionCurve& curve, const LastingEffect& eff,
                            double x, std::int64_t i) {
  if (!(x > 0.0)) throw std::domain_error("step_retention: x must be > 0");
  if (i < 1) throw std::domain_error("step_retention: i must be >= 1");
  return curve(x) - eff.epsilon * eff.d(double(i - 1) * x) < 0.0;
}

double survival_s_lasting(const RetentionCurve& curve, const LastingEffect& eff,
                          double A, double x, std::int64_t z_max) {
  const std::int64_t z = step_count(A, x, z_max);
  const double p = curve(x);
  if (eff.epsilon == 0.0) return std::pow(p, double(z));
  double prod = 1.0;
  for (std::int64_t i = 1; i <= z; ++i) {
    const double pi = std::max(p - eff.epsilon * eff.d(double(i - 1) * x), 0.0);
    if (pi == 0.0) return 0.0;
    prod *= pi;
  }
  return prod;
}

double arum_step_retention(const ArumSpec& arum, const LastingEffect& eff,
                           double x, std::int64_t i) {
  if (!(x > 0.0)) throw std::domain_error("arum_step_retention: x must be > 0");
  if (i < 1) throw std::domain_error("arum_step_retention: i must be >= 1");
  return arum.noise.cdf(arum.u0 - arum.cost(x) - eff.epsilon * eff.d(double(i - 1) * x));
}

double lasting_survival_bound(const RetentionCurve& curve, const LastingEffect& eff,
                              double A, std::int64_t z) {
  if (z < 1) throw std::domain_error("lasting_survival_bound: z must be >= 1");
  const double x = A / double(z);
  const double base = std::max(curve(x) - eff.epsilon * eff.d(A / 2.0), 0.0);
  return std::pow(base, double(z / 2));
}

std::optional<std::pair<double, double>> nonmonotonicity_witness(
    const RetentionCurve& curve, const LastingEffect& eff, double A, std::int64_t z_max) {
  // Survival over all admissible step sizes, ascending in x (descending z).
  std::vector<std::pair<double, double>> samples;  // (x, s)
  samples.reserve(static_cast<std::size_t>(z_max));
  for (std::int64_t z = z_max; z >= 1; --z) {
    const double x = A / double(z);
    if (x > curve.domain_max()) break;
    samples.emplace_back(x, survival_s_lasting(curve, eff, A, x, z_max));
  }
  if (samples.size() < 2) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].second > samples[best].second) best = i;
  if (best == 0) return std::nullopt;
  std::size_t low = 0;
  for (std::size_t i = 1; i < best; ++i)
    if (samples[i].second < samples[low].second) low = i;
  if (samples[low].second < samples[best].second)
    return std::make_pair(samples[low].first, samples[best].first);
  return std::nullopt;
}

}  // namespace rampopt
