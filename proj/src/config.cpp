#include "rampopt/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace rampopt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError("config error at '" + path + "': " + msg);
}

void require_keys(const json& obj, const std::string& path,
                  const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) fail(path + "." + key, "unknown field");
}

double get_num(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) fail(path + "." + key, "missing required field");
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double get_num_or(const json& obj, const std::string& path, const std::string& key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

std::string get_str(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) fail(path + "." + key, "missing required field");
  const auto& v = obj.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_num_array(const json& obj, const std::string& path,
                                  const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_array()) fail(path + "." + key, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) fail(path + "." + key, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

RetentionCurve parse_curve(const json& obj, const std::string& path) {
  const std::string family = get_str(obj, path, "family");
  try {
    if (family == "exp_power") {
      require_keys(obj, path, {"family", "k"});
      return RetentionCurve::exp_power(get_num(obj, path, "k"));
    }
    if (family == "poly_cap") {
      require_keys(obj, path, {"family", "k"});
      return RetentionCurve::poly_cap(get_num(obj, path, "k"));
    }
    if (family == "inverse_power") {
      require_keys(obj, path, {"family", "k"});
      return RetentionCurve::inverse_power(get_num(obj, path, "k"));
    }
    if (family == "scaled_exp_power") {
      require_keys(obj, path, {"family", "scale", "k"});
      return RetentionCurve::scaled_exp_power(get_num(obj, path, "scale"),
                                              get_num(obj, path, "k"));
    }
    if (family == "tabulated") {
      require_keys(obj, path, {"family", "x", "p"});
      return RetentionCurve::tabulated(get_num_array(obj, path, "x"),
                                       get_num_array(obj, path, "p"));
    }
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path + ".family", "unknown curve family '" + family + "'");
}

CostFn parse_cost(const json& obj, const std::string& path) {
  const std::string family = get_str(obj, path, "family");
  try {
    if (family == "linear") {
      require_keys(obj, path, {"family", "slope"});
      return CostFn::linear(get_num(obj, path, "slope"));
    }
    if (family == "power") {
      require_keys(obj, path, {"family", "coeff", "exponent"});
      return CostFn::power(get_num(obj, path, "coeff"), get_num(obj, path, "exponent"));
    }
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path + ".family", "unknown cost family '" + family + "'");
}

NoiseDist parse_noise(const json& obj, const std::string& path) {
  const std::string family = get_str(obj, path, "family");
  try {
    if (family == "normal") {
      require_keys(obj, path, {"family", "mean", "sd"});
      return NoiseDist::normal(get_num(obj, path, "mean"), get_num(obj, path, "sd"));
    }
    if (family == "uniform") {
      require_keys(obj, path, {"family", "lo", "hi"});
      return NoiseDist::uniform(get_num(obj, path, "lo"), get_num(obj, path, "hi"));
    }
    if (family == "exponential") {
      require_keys(obj, path, {"family", "rate"});
      return NoiseDist::exponential(get_num(obj, path, "rate"));
    }
    if (family == "logistic") {
      require_keys(obj, path, {"family", "loc", "scale"});
      return NoiseDist::logistic(get_num(obj, path, "loc"), get_num(obj, path, "scale"));
    }
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path + ".family", "unknown noise family '" + family + "'");
}

ArumSpec parse_arum(const json& obj, const std::string& path) {
  require_keys(obj, path, {"u0", "cost", "noise"});
  try {
    return ArumSpec(get_num(obj, path, "u0"), parse_cost(obj.at("cost"), path + ".cost"),
                    parse_noise(obj.at("noise"), path + ".noise"));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

RevenueModel parse_revenue(const json& obj, const std::string& path) {
  const std::string family = get_str(obj, path, "family");
  const double delta = get_num(obj, path, "delta");
  try {
    if (family == "identity") {
      require_keys(obj, path, {"family", "delta"});
      return RevenueModel::identity(delta);
    }
    if (family == "power") {
      require_keys(obj, path, {"family", "delta", "a"});
      return RevenueModel::power(get_num(obj, path, "a"), delta);
    }
    if (family == "affine") {
      require_keys(obj, path, {"family", "delta", "intercept", "slope"});
      return RevenueModel::affine(get_num(obj, path, "intercept"),
                                  get_num(obj, path, "slope"), delta);
    }
    if (family == "log_shifted") {
      require_keys(obj, path, {"family", "delta"});
      return RevenueModel::log_shifted(delta);
    }
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path + ".family", "unknown revenue family '" + family + "'");
}

AdaptationClock parse_clock(const json& obj, const std::string& path) {
  const std::string family = get_str(obj, path, "family");
  try {
    if (family == "constant") {
      require_keys(obj, path, {"family", "c"});
      return AdaptationClock::constant(get_num(obj, path, "c"));
    }
    if (family == "power") {
      require_keys(obj, path, {"family", "c", "a"});
      return AdaptationClock::power(get_num(obj, path, "c"), get_num(obj, path, "a"));
    }
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path + ".family", "unknown clock family '" + family + "'");
}

LastingEffect parse_lasting(const json& obj, const std::string& path) {
  require_keys(obj, path, {"epsilon", "decay"});
  const double eps = get_num(obj, path, "epsilon");
  try {
    if (!obj.contains("decay")) return LastingEffect::linear(eps);
    const auto& dec = obj.at("decay");
    const std::string family = get_str(dec, path + ".decay", "family");
    if (family == "linear") {
      require_keys(dec, path + ".decay", {"family"});
      return LastingEffect::linear(eps);
    }
    if (family == "power") {
      require_keys(dec, path + ".decay", {"family", "exponent"});
      return LastingEffect::power(eps, get_num(dec, path + ".decay", "exponent"));
    }
    fail(path + ".decay.family", "unknown decay family '" + family + "'");
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

GridSpec parse_grid(const json& obj, const std::string& path) {
  require_keys(obj, path, {"min", "max", "step"});
  GridSpec g;
  g.min = get_num_or(obj, path, "min", g.min);
  g.max = get_num_or(obj, path, "max", 0.0);
  g.step = get_num_or(obj, path, "step", g.step);
  if (!(g.min > 0.0)) fail(path + ".min", "grid min must be > 0");
  if (!(g.step > 0.0)) fail(path + ".step", "grid step must be > 0");
  if (g.max != 0.0 && !(g.min < g.max)) fail(path + ".max", "grid min must be < max");
  return g;
}

SimulationSpec parse_simulation(const json& obj, const std::string& path) {
  require_keys(obj, path, {"n_users", "seed", "arms", "n_per_arm", "x_samples",
                           "increments", "schedule", "bypass_estimation"});
  SimulationSpec s;
  if (obj.contains("n_users")) {
    const double v = get_num(obj, path, "n_users");
    if (v < 0 || v != std::floor(v)) fail(path + ".n_users", "expected a nonnegative integer");
    s.n_users = static_cast<std::int64_t>(v);
  }
  if (obj.contains("seed")) {
    const auto& v = obj.at("seed");
    if (!v.is_number_unsigned() && !v.is_number_integer())
      fail(path + ".seed", "expected an unsigned integer");
    s.seed = v.get<std::uint64_t>();
  }
  if (obj.contains("arms")) {
    const double v = get_num(obj, path, "arms");
    if (v < 0 || v != std::floor(v)) fail(path + ".arms", "expected a nonnegative integer");
    s.arms = static_cast<std::int64_t>(v);
  }
  if (obj.contains("n_per_arm")) {
    const double v = get_num(obj, path, "n_per_arm");
    if (v < 0 || v != std::floor(v)) fail(path + ".n_per_arm", "expected a nonnegative integer");
    s.n_per_arm = static_cast<std::int64_t>(v);
  }
  if (obj.contains("x_samples")) s.x_samples = get_num_array(obj, path, "x_samples");
  if (obj.contains("increments")) s.increments = get_num_array(obj, path, "increments");
  if (obj.contains("schedule")) {
    const auto& sch = obj.at("schedule");
    require_keys(sch, path + ".schedule", {"x", "z"});
    const double x = get_num(sch, path + ".schedule", "x");
    const double z = get_num(sch, path + ".schedule", "z");
    if (!(x > 0.0)) fail(path + ".schedule.x", "step size must be > 0");
    if (z < 1 || z != std::floor(z)) fail(path + ".schedule.z", "expected a positive integer");
    s.schedule = Schedule{x, static_cast<std::int64_t>(z)};
  }
  if (obj.contains("bypass_estimation")) {
    const auto& v = obj.at("bypass_estimation");
    if (!v.is_boolean()) fail(path + ".bypass_estimation", "expected a boolean");
    s.bypass_estimation = v.get<bool>();
  }
  return s;
}

}  // namespace

RetentionCurve RunConfig::model_curve() const {
  if (curve) return *curve;
  if (arum) return RetentionCurve::arum(*arum);
  throw ConfigError("config error at 'curve': exactly one of curve/arum must be present");
}

RunConfig parse_config(const json& doc) {
  require_keys(doc, "$", {"curve", "arum", "revenue", "clock", "lasting", "grid",
                          "simulation", "output"});
  RunConfig cfg;
  if (doc.contains("curve")) cfg.curve = parse_curve(doc.at("curve"), "curve");
  if (doc.contains("arum")) cfg.arum = parse_arum(doc.at("arum"), "arum");
  if (cfg.curve && cfg.arum)
    throw ConfigError("config error at 'curve': exactly one of curve/arum must be present");
  if (doc.contains("revenue")) cfg.revenue = parse_revenue(doc.at("revenue"), "revenue");
  if (doc.contains("clock")) cfg.clock = parse_clock(doc.at("clock"), "clock");
  if (doc.contains("lasting")) cfg.lasting = parse_lasting(doc.at("lasting"), "lasting");
  if (doc.contains("grid")) cfg.grid = parse_grid(doc.at("grid"), "grid");
  if (doc.contains("simulation"))
    cfg.simulation = parse_simulation(doc.at("simulation"), "simulation");
  if (doc.contains("output")) {
    require_keys(doc.at("output"), "output", {"dir"});
    if (doc.at("output").contains("dir"))
      cfg.out_dir = get_str(doc.at("output"), "output", "dir");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config error: invalid JSON in '" + path + "': " + e.what());
  }
  return parse_config(doc);
}

}  // namespace rampopt
