#include "rampopt/io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rampopt {

using nlohmann::json;

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

std::string trace_csv(const OptimizationResult& result) {
  std::string out = "x,z_star,A,pi\n";
  for (const auto& e : result.trace) {
    out += csv_num(e.x);
    out += ',';
    out += std::to_string(e.z);
    out += ',';
    out += csv_num(e.x * double(e.z));
    out += ',';
    out += csv_num(e.pi);
    out += '\n';
  }
  return out;
}

std::string cohort_csv(const CohortResult& result) {
  std::string out = "period,survivors,fraction,ci_lo,ci_hi,revenue\n";
  for (std::size_t i = 0; i < result.survivors_per_period.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += std::to_string(result.survivors_per_period[i]);
    out += ',';
    out += csv_num(result.survival_fraction[i]);
    out += ',';
    out += csv_num(result.ci_95[i].lo);
    out += ',';
    out += csv_num(result.ci_95[i].hi);
    out += ',';
    out += csv_num(result.realized_revenue[i]);
    out += '\n';
  }
  return out;
}

std::string arms_csv(const AbEstimate& estimate) {
  std::string out = "x,p_hat,ci_lo,ci_hi,n\n";
  for (std::size_t i = 0; i < estimate.x_samples.size(); ++i) {
    out += csv_num(estimate.x_samples[i]);
    out += ',';
    out += csv_num(estimate.p_hat[i]);
    out += ',';
    out += csv_num(estimate.ci_95[i].lo);
    out += ',';
    out += csv_num(estimate.ci_95[i].hi);
    out += ',';
    out += std::to_string(estimate.n_per_arm);
    out += '\n';
  }
  return out;
}

std::string rate_sweep_csv(const std::vector<std::array<double, 3>>& rows) {
  std::string out = "rbar,x,s\n";
  for (const auto& r : rows) {
    out += csv_num(r[0]);
    out += ',';
    out += csv_num(r[1]);
    out += ',';
    out += csv_num(r[2]);
    out += '\n';
  }
  return out;
}

json classify_report_json(const CurvatureReport& report, const std::string& curve_name) {
  return json{{"command", "classify"},
              {"curve", curve_name},
              {"class", to_string(report.kind)},
              {"evidence",
               {{"max_second_diff", report.max_second_diff},
                {"min_second_diff", report.min_second_diff},
                {"threshold", report.threshold},
                {"jump_at_zero", report.jump_at_zero},
                {"grid_points", report.grid_points}}}};
}

json optimize_result_json(const OptimizationResult& result, const CurvatureReport& report,
                          double delta) {
  return json{{"command", "optimize"},
              {"classification", to_string(report.kind)},
              {"one_step_shortcut_used", result.one_step_shortcut_used},
              {"best", {{"x", result.best.x}, {"z", result.best.z}, {"A", result.best.total()}}},
              {"value", result.value},
              {"delta", delta},
              {"capped_entries", result.capped_entries},
              {"trace_rows", result.trace.size()}};
}

json cohort_summary_json(const CohortResult& result) {
  const std::size_t last = result.survivors_per_period.size() - 1;
  return json{{"command", "simulate"},
              {"seed", result.seed},
              {"n_users", result.n_users},
              {"periods", result.survivors_per_period.size()},
              {"final_survivors", result.survivors_per_period[last]},
              {"final_fraction", result.survival_fraction[last]},
              {"final_ci", {result.ci_95[last].lo, result.ci_95[last].hi}}};
}

json fitted_curve_json(const AbEstimate& estimate) {
  json arms = json::array();
  for (std::size_t i = 0; i < estimate.x_samples.size(); ++i)
    arms.push_back(json{{"x", estimate.x_samples[i]},
                        {"p_hat", estimate.p_hat[i]},
                        {"ci", {estimate.ci_95[i].lo, estimate.ci_95[i].hi}}});
  // Fitted curve sampled at the arm locations plus the exact origin.
  json fx = json::array(), fp = json::array();
  fx.push_back(0.0);
  fp.push_back(1.0);
  for (double x : estimate.x_samples) {
    fx.push_back(x);
    fp.push_back(estimate.fitted(x));
  }
  return json{{"command", "estimate"},
              {"seed", estimate.seed},
              {"n_per_arm", estimate.n_per_arm},
              {"wide_ci_warning", estimate.wide_ci_warning},
              {"arms", arms},
              {"fitted", {{"x", fx}, {"p", fp}}}};
}

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw std::runtime_error("result document invalid: " + what);
}

void need(const json& doc, const char* key, json::value_t type) {
  if (!doc.contains(key)) invalid(std::string("missing field '") + key + "'");
  const auto& v = doc.at(key);
  if (type == json::value_t::number_float) {
    if (!v.is_number()) invalid(std::string("field '") + key + "' must be a number");
  } else if (type == json::value_t::number_unsigned) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
      invalid(std::string("field '") + key + "' must be an integer");
  } else if (v.type() != type) {
    invalid(std::string("field '") + key + "' has wrong type");
  }
}

}  // namespace

void validate_classify_report_json(const json& doc) {
  need(doc, "command", json::value_t::string);
  need(doc, "curve", json::value_t::string);
  need(doc, "class", json::value_t::string);
  need(doc, "evidence", json::value_t::object);
  const auto& ev = doc.at("evidence");
  need(ev, "max_second_diff", json::value_t::number_float);
  need(ev, "min_second_diff", json::value_t::number_float);
  need(ev, "threshold", json::value_t::number_float);
  need(ev, "jump_at_zero", json::value_t::number_float);
  need(ev, "grid_points", json::value_t::number_unsigned);
  const std::string cls = doc.at("class").get<std::string>();
  if (cls != "LogConcave" && cls != "LogConvex" && cls != "Neither" &&
      cls != "DiscontinuousLogConcaveTail")
    invalid("unknown class '" + cls + "'");
}

void validate_optimize_result_json(const json& doc) {
  need(doc, "command", json::value_t::string);
  need(doc, "classification", json::value_t::string);
  need(doc, "one_step_shortcut_used", json::value_t::boolean);
  need(doc, "best", json::value_t::object);
  need(doc, "value", json::value_t::number_float);
  need(doc, "delta", json::value_t::number_float);
  need(doc, "capped_entries", json::value_t::number_unsigned);
  need(doc, "trace_rows", json::value_t::number_unsigned);
  const auto& best = doc.at("best");
  need(best, "x", json::value_t::number_float);
  need(best, "z", json::value_t::number_unsigned);
  need(best, "A", json::value_t::number_float);
  const double delta = doc.at("delta").get<double>();
  if (!(delta > 0.0 && delta < 1.0)) invalid("delta out of (0,1)");
  if (!(best.at("x").get<double>() > 0.0)) invalid("best.x not positive");
  if (best.at("z").get<std::int64_t>() < 1) invalid("best.z not positive");
}

void validate_cohort_summary_json(const json& doc) {
  need(doc, "command", json::value_t::string);
  need(doc, "seed", json::value_t::number_unsigned);
  need(doc, "n_users", json::value_t::number_unsigned);
  need(doc, "periods", json::value_t::number_unsigned);
  need(doc, "final_survivors", json::value_t::number_unsigned);
  need(doc, "final_fraction", json::value_t::number_float);
  need(doc, "final_ci", json::value_t::array);
  const double f = doc.at("final_fraction").get<double>();
  if (!(f >= 0.0 && f <= 1.0)) invalid("final_fraction out of [0,1]");
}

void validate_fitted_curve_json(const json& doc) {
  need(doc, "command", json::value_t::string);
  need(doc, "seed", json::value_t::number_unsigned);
  need(doc, "n_per_arm", json::value_t::number_unsigned);
  need(doc, "wide_ci_warning", json::value_t::boolean);
  need(doc, "arms", json::value_t::array);
  need(doc, "fitted", json::value_t::object);
  const auto& fit = doc.at("fitted");
  need(fit, "x", json::value_t::array);
  need(fit, "p", json::value_t::array);
  const auto& fx = fit.at("x");
  const auto& fp = fit.at("p");
  if (fx.size() != fp.size() || fx.empty()) invalid("fitted arrays mismatched");
  if (fp.at(0).get<double>() != 1.0) invalid("fitted p(0) must be 1");
  for (std::size_t i = 1; i < fp.size(); ++i)
    if (fp.at(i).get<double>() > fp.at(i - 1).get<double>() + 1e-12)
      invalid("fitted p not non-increasing");
}

}  // namespace rampopt
