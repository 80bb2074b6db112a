#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rampopt/adaptation.hpp"
#include "rampopt/lasting.hpp"
#include "rampopt/optimizer.hpp"
#include "rampopt/retention.hpp"

namespace rampopt {

/// Malformed or inconsistent configuration; carries the offending field path.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GridSpec {
  double min = 1e-3;
  double max = 0.0;  // 0 = derive from the curve
  double step = 1e-3;
};

struct SimulationSpec {
  std::int64_t n_users = 0;
  std::uint64_t seed = 0;
  std::int64_t arms = 0;
  std::int64_t n_per_arm = 0;
  std::vector<double> x_samples;   // explicit arm placement, optional
  std::vector<double> increments;  // explicit schedule, optional
  std::optional<Schedule> schedule;
  bool bypass_estimation = false;
};

/// Parsed configuration document. Sections are optional; each command
/// validates the ones it needs.
struct RunConfig {
  std::optional<RetentionCurve> curve;  // exactly one of curve/arum
  std::optional<ArumSpec> arum;
  std::optional<RevenueModel> revenue;
  std::optional<AdaptationClock> clock;
  LastingEffect lasting = LastingEffect::none();
  GridSpec grid;
  SimulationSpec simulation;
  std::string out_dir = ".";

  /// The configured model: the direct curve, or the ARUM wrapped as a curve.
  RetentionCurve model_curve() const;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

}  // namespace rampopt
