#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "rampopt/config.hpp"
#include "rampopt/io.hpp"

using namespace rampopt;
using nlohmann::json;

namespace {

json example1_config() {
  return json::parse(R"({
    "curve": {"family": "exp_power", "k": 2.0},
    "revenue": {"family": "identity", "delta": 0.9},
    "grid": {"min": 0.001, "max": 2.0, "step": 0.001}
  })");
}

}  // namespace

TEST_CASE("config parses the basic document") {
  const auto cfg = parse_config(example1_config());
  REQUIRE(cfg.curve.has_value());
  CHECK((*cfg.curve)(0.5) == doctest::Approx(std::exp(-0.25)));
  REQUIRE(cfg.revenue.has_value());
  CHECK(cfg.revenue->delta == 0.9);
  CHECK(cfg.grid.min == 0.001);
  CHECK(cfg.grid.max == 2.0);
}

TEST_CASE("unknown fields are rejected with a field path") {
  auto doc = example1_config();
  doc["curve"]["kk"] = 3.0;
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("curve.kk"), ConfigError);

  auto doc2 = example1_config();
  doc2["extra_section"] = 1;
  CHECK_THROWS_WITH_AS(parse_config(doc2), doctest::Contains("extra_section"), ConfigError);
}

TEST_CASE("exactly one of curve and arum") {
  auto doc = example1_config();
  doc["arum"] = {{"u0", 1.0},
                 {"cost", {{"family", "linear"}, {"slope", 1.0}}},
                 {"noise", {{"family", "normal"}, {"mean", 0.0}, {"sd", 1.0}}}};
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  auto doc2 = example1_config();
  doc2.erase("curve");
  const auto cfg = parse_config(doc2);
  CHECK_THROWS_AS(cfg.model_curve(), ConfigError);
}

TEST_CASE("field-level validation") {
  auto doc = example1_config();
  doc["revenue"]["delta"] = 1.5;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = example1_config();
  doc["grid"]["min"] = -1.0;
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("grid.min"), ConfigError);

  doc = example1_config();
  doc["curve"] = {{"family", "no_such_family"}};
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("curve.family"), ConfigError);

  doc = example1_config();
  doc["lasting"] = {{"epsilon", -0.5}};
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = example1_config();
  doc["simulation"] = {{"n_users", 3.7}};
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("simulation.n_users"), ConfigError);
}

TEST_CASE("arum, clock, lasting and simulation sections parse") {
  const auto doc = json::parse(R"({
    "arum": {"u0": 1.0,
             "cost": {"family": "power", "coeff": 2.0, "exponent": 1.5},
             "noise": {"family": "logistic", "loc": 0.0, "scale": 0.5}},
    "revenue": {"family": "affine", "delta": 0.8, "intercept": 1.0, "slope": 2.0},
    "clock": {"family": "power", "c": 1.0, "a": 0.5},
    "lasting": {"epsilon": 0.01, "decay": {"family": "power", "exponent": 2.0}},
    "simulation": {"n_users": 1000, "seed": 7, "schedule": {"x": 0.5, "z": 4}},
    "output": {"dir": "/tmp/somewhere"}
  })");
  const auto cfg = parse_config(doc);
  REQUIRE(cfg.arum.has_value());
  CHECK(cfg.arum->u0 == 1.0);
  const auto curve = cfg.model_curve();
  CHECK(curve(0.0) == 1.0);
  REQUIRE(cfg.clock.has_value());
  CHECK((*cfg.clock)(4.0) == doctest::Approx(2.0));
  CHECK(cfg.lasting.epsilon == 0.01);
  CHECK(cfg.lasting.d(3.0) == doctest::Approx(9.0));
  REQUIRE(cfg.simulation.schedule.has_value());
  CHECK(cfg.simulation.schedule->z == 4);
  CHECK(cfg.simulation.seed == 7);
  CHECK(cfg.out_dir == "/tmp/somewhere");
}

TEST_CASE("explicit increment lists and arm placements parse") {
  const auto doc = json::parse(R"({
    "curve": {"family": "exp_power", "k": 2.0},
    "simulation": {"n_users": 100, "seed": 3,
                   "increments": [0.1, 0.2, 0.3],
                   "x_samples": [0.5, 1.0, 1.5],
                   "n_per_arm": 50}
  })");
  const auto cfg = parse_config(doc);
  CHECK(cfg.simulation.increments == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(cfg.simulation.x_samples == std::vector<double>{0.5, 1.0, 1.5});
  CHECK(cfg.simulation.n_per_arm == 50);
}

TEST_CASE("emitted result documents re-parse under their validators") {
  const auto curve = RetentionCurve::exp_power(2.0);
  const auto rev = RevenueModel::identity(0.9);
  std::vector<double> grid;
  for (int i = 1; i <= 500; ++i) grid.push_back(0.002 * i);
  const auto result = optimize_sweep(curve, rev, grid);
  const auto report = classify_default(curve);

  const json opt_doc = optimize_result_json(result, report, rev.delta);
  validate_optimize_result_json(opt_doc);
  validate_optimize_result_json(json::parse(opt_doc.dump()));

  const json classify_doc = classify_report_json(report, curve.describe());
  validate_classify_report_json(classify_doc);
  validate_classify_report_json(json::parse(classify_doc.dump(2)));

  CohortConfig cc{2000, 11, curve, LastingEffect::none(), {0.5, 0.5}, 0};
  const auto cohort = simulate_schedule(cc);
  const json cohort_doc = cohort_summary_json(cohort);
  validate_cohort_summary_json(json::parse(cohort_doc.dump()));
  CHECK(cohort_doc.at("seed").get<std::uint64_t>() == 11);

  const auto est = estimate_p(curve, {0.5, 1.0, 1.5}, 500, 13);
  const json est_doc = fitted_curve_json(est);
  validate_fitted_curve_json(json::parse(est_doc.dump()));
  CHECK(est_doc.at("seed").get<std::uint64_t>() == 13);

  // Validators reject mangled documents.
  json broken = opt_doc;
  broken.erase("value");
  CHECK_THROWS(validate_optimize_result_json(broken));
  json broken2 = est_doc;
  broken2["fitted"]["p"][0] = 0.5;
  CHECK_THROWS(validate_fitted_curve_json(broken2));
}

TEST_CASE("csv emitters have fixed headers and one row per record") {
  const auto curve = RetentionCurve::exp_power(2.0);
  std::vector<double> grid = {0.1, 0.2, 0.3};
  const auto result = optimize_sweep(curve, RevenueModel::identity(0.9), grid);
  const auto csv = trace_csv(result);
  CHECK(csv.rfind("x,z_star,A,pi\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  CohortConfig cc{500, 3, curve, LastingEffect::none(), {0.5, 0.5}, 0};
  const auto cohort_doc = cohort_csv(simulate_schedule(cc));
  CHECK(cohort_doc.rfind("period,survivors,fraction,ci_lo,ci_hi,revenue\n", 0) == 0);
  CHECK(std::count(cohort_doc.begin(), cohort_doc.end(), '\n') == 3);

  const auto est = estimate_p(curve, {0.5, 1.0}, 100, 13);
  const auto arms = arms_csv(est);
  CHECK(arms.rfind("x,p_hat,ci_lo,ci_hi,n\n", 0) == 0);
  CHECK(std::count(arms.begin(), arms.end(), '\n') == 3);

  // 9 significant digits round-trip the tolerances used around here.
  CHECK(csv_num(0.123456789123) == "0.123456789");
  CHECK(csv_num(2.0) == "2");
}
