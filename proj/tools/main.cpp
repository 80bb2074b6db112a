// rampopt: revenue-maximizing schedules for gradually introduced
// user-facing costs (fees, ad load), with a seeded cohort simulator and a
// simulated A/B estimation pipeline.
//
// Exit codes: 0 success, 2 config error, 3 domain/parameter error,
// 4 capped result (soft failure unless --allow-cap). `classify` instead
// reports the curve class through its exit status (see below).

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rampopt/config.hpp"
#include "rampopt/io.hpp"
#include "rampopt/simulator.hpp"

namespace {

using nlohmann::json;
using namespace rampopt;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitCapped = 4;

// classify reports the class through the exit status.
int classify_exit_code(CurvatureKind kind) {
  switch (kind) {
    case CurvatureKind::LogConcave: return 0;
    case CurvatureKind::LogConvex: return 10;
    case CurvatureKind::DiscontinuousLogConcaveTail: return 11;
    case CurvatureKind::Neither: return 12;
  }
  return 12;
}

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> grid_step;
  int threads = 0;
  bool allow_cap = false;
  bool chain = false;
};

RunConfig load_with_overrides(const CliOptions& opt) {
  RunConfig cfg = load_config(opt.config_path);
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (opt.seed) cfg.simulation.seed = *opt.seed;
  if (opt.grid_step) cfg.grid.step = *opt.grid_step;
  std::filesystem::create_directories(cfg.out_dir);
  return cfg;
}

std::vector<double> build_grid(const RunConfig& cfg, const RetentionCurve& curve) {
  if (cfg.grid.max > 0.0) {
    std::vector<double> grid;
    const auto n = static_cast<std::size_t>((cfg.grid.max - cfg.grid.min) / cfg.grid.step + 1e-9);
    grid.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      const double x = cfg.grid.min + double(i) * cfg.grid.step;
      if (x > curve.domain_max()) break;
      grid.push_back(x);
    }
    if (grid.empty()) throw std::invalid_argument("grid: empty after clipping to curve domain");
    return grid;
  }
  return make_default_grid(curve, cfg.grid.step);
}

std::vector<double> schedule_increments(const RunConfig& cfg) {
  if (!cfg.simulation.increments.empty()) return cfg.simulation.increments;
  if (cfg.simulation.schedule) {
    const auto& s = *cfg.simulation.schedule;
    return std::vector<double>(static_cast<std::size_t>(s.z), s.x);
  }
  throw std::invalid_argument("simulation: need a schedule {x, z} or explicit increments");
}

int cmd_classify(const CliOptions& opt) {
  const RunConfig cfg = load_with_overrides(opt);
  const RetentionCurve curve = cfg.model_curve();
  const auto report = classify_default(curve);
  const json doc = classify_report_json(report, curve.describe());
  write_text_file(cfg.out_dir + "/classify.json", doc.dump(2) + "\n");
  std::cout << curve.describe() << " -> " << to_string(report.kind)
            << "  (second diffs in [" << csv_num(report.min_second_diff) << ", "
            << csv_num(report.max_second_diff) << "], threshold "
            << csv_num(report.threshold) << ", jump at zero "
            << csv_num(report.jump_at_zero) << ")\n";
  return classify_exit_code(report.kind);
}

int cmd_optimize(const CliOptions& opt) {
  const RunConfig cfg = load_with_overrides(opt);
  if (!cfg.revenue) throw ConfigError("config error at 'revenue': required for optimize");
  const RetentionCurve curve = cfg.model_curve();
  const auto report = classify_default(curve);
  const auto grid = build_grid(cfg, curve);

  OptimizationResult result = report.kind == CurvatureKind::LogConvex
                                  ? one_step_as_result(curve, *cfg.revenue, grid)
                                  : optimize_sweep(curve, *cfg.revenue, grid, 10000,
                                                   opt.threads);

  const json doc = optimize_result_json(result, report, cfg.revenue->delta);
  validate_optimize_result_json(doc);
  write_text_file(cfg.out_dir + "/result.json", doc.dump(2) + "\n");
  write_text_file(cfg.out_dir + "/trace.csv", trace_csv(result));
  std::cout << "best: x = " << csv_num(result.best.x) << ", z = " << result.best.z
            << ", A = " << csv_num(result.best.total())
            << ", value = " << csv_num(result.value)
            << (result.one_step_shortcut_used ? "  (one-step shortcut)" : "") << "\n";
  if (result.capped_entries > 0) {
    std::cerr << "warning: z* capped at z_max for " << result.capped_entries
              << " grid points\n";
    if (!opt.allow_cap) return kExitCapped;
  }
  return kExitOk;
}

int cmd_simulate(const CliOptions& opt) {
  const RunConfig cfg = load_with_overrides(opt);
  if (cfg.simulation.n_users < 1)
    throw std::invalid_argument("simulation.n_users must be >= 1");
  CohortConfig cc{cfg.simulation.n_users, cfg.simulation.seed,
                  cfg.arum ? PopulationModel(*cfg.arum) : PopulationModel(cfg.model_curve()),
                  cfg.lasting, schedule_increments(cfg), opt.threads};
  const RevenueModel rev = cfg.revenue ? *cfg.revenue : RevenueModel::identity(0.9);
  const CohortResult result = simulate_schedule(cc, rev);
  const json doc = cohort_summary_json(result);
  validate_cohort_summary_json(doc);
  write_text_file(cfg.out_dir + "/cohort.csv", cohort_csv(result));
  write_text_file(cfg.out_dir + "/cohort_summary.json", doc.dump(2) + "\n");
  std::cout << "seed " << result.seed << ": " << result.survivors_per_period.back() << "/"
            << result.n_users << " users left after "
            << result.survivors_per_period.size() << " increases (fraction "
            << csv_num(result.survival_fraction.back()) << ")\n";
  return kExitOk;
}

std::vector<double> arm_positions(const RunConfig& cfg) {
  if (!cfg.simulation.x_samples.empty()) return cfg.simulation.x_samples;
  if (cfg.simulation.arms < 1)
    throw std::invalid_argument("simulation.arms must be >= 1 (or give x_samples)");
  if (!(cfg.grid.max > 0.0))
    throw std::invalid_argument("grid.max is required to place estimation arms");
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(cfg.simulation.arms));
  if (cfg.simulation.arms == 1) return {cfg.grid.max};
  for (std::int64_t j = 0; j < cfg.simulation.arms; ++j)
    xs.push_back(cfg.grid.min + (cfg.grid.max - cfg.grid.min) * double(j) /
                                    double(cfg.simulation.arms - 1));
  return xs;
}

int cmd_estimate(const CliOptions& opt) {
  const RunConfig cfg = load_with_overrides(opt);
  const PopulationModel model =
      cfg.arum ? PopulationModel(*cfg.arum) : PopulationModel(cfg.model_curve());
  const auto xs = arm_positions(cfg);
  if (cfg.simulation.n_per_arm < 30 && !cfg.simulation.bypass_estimation)
    throw std::invalid_argument("simulation.n_per_arm must be >= 30");

  if (opt.chain) {
    if (!cfg.revenue) throw ConfigError("config error at 'revenue': required for --chain");
    const auto chained = end_to_end_estimate_and_optimize(
        model, xs, cfg.simulation.n_per_arm, cfg.simulation.seed, *cfg.revenue,
        cfg.grid.step, 10000, cfg.simulation.bypass_estimation, opt.threads);
    const json fit_doc = fitted_curve_json(chained.estimate);
    validate_fitted_curve_json(fit_doc);
    write_text_file(cfg.out_dir + "/arms.csv", arms_csv(chained.estimate));
    write_text_file(cfg.out_dir + "/fitted_curve.json", fit_doc.dump(2) + "\n");
    const auto fit_report = classify_default(chained.estimate.fitted);
    const json opt_doc =
        optimize_result_json(chained.result, fit_report, cfg.revenue->delta);
    validate_optimize_result_json(opt_doc);
    write_text_file(cfg.out_dir + "/result.json", opt_doc.dump(2) + "\n");
    write_text_file(cfg.out_dir + "/trace.csv", trace_csv(chained.result));
    std::cout << "estimated " << xs.size() << " arms (seed " << chained.estimate.seed
              << "); best: x = " << csv_num(chained.result.best.x)
              << ", z = " << chained.result.best.z << "\n";
    if (chained.estimate.wide_ci_warning)
      std::cerr << "warning: wide confidence intervals; estimates may be unreliable\n";
    return kExitOk;
  }

  const AbEstimate est = estimate_p(model, xs, cfg.simulation.n_per_arm,
                                    cfg.simulation.seed, opt.threads);
  const json doc = fitted_curve_json(est);
  validate_fitted_curve_json(doc);
  write_text_file(cfg.out_dir + "/arms.csv", arms_csv(est));
  write_text_file(cfg.out_dir + "/fitted_curve.json", doc.dump(2) + "\n");
  std::cout << "estimated " << xs.size() << " arms, n = " << est.n_per_arm
            << " per arm (seed " << est.seed << ")\n";
  if (est.wide_ci_warning)
    std::cerr << "warning: wide confidence intervals; estimates may be unreliable\n";
  return kExitOk;
}

int cmd_sweep_rate(const CliOptions& opt) {
  const RunConfig cfg = load_with_overrides(opt);
  if (!cfg.clock) throw ConfigError("config error at 'clock': required for sweep-rate");
  const RetentionCurve curve = cfg.model_curve();
  const auto incs = schedule_increments(cfg);
  double A = 0.0;
  for (double dx : incs) A += dx;

  const double x_lo = cfg.grid.min;
  const double x_hi = std::min(cfg.grid.max > 0.0 ? cfg.grid.max : A, A * (1.0 - 1e-9));
  if (!(x_lo < x_hi)) throw std::invalid_argument("sweep-rate: empty x range");
  const double r_lo = avg_rate(*cfg.clock, A, x_lo);
  const double r_hi = avg_rate(*cfg.clock, A, x_hi);

  const std::size_t points = 512;
  std::vector<std::array<double, 3>> rows;
  rows.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double rbar = r_lo + (r_hi - r_lo) * double(i) / double(points - 1);
    const double x = invert_rate(*cfg.clock, A, rbar);
    rows.push_back({rbar, x, survival_s(curve, A, x)});
  }
  write_text_file(cfg.out_dir + "/rate_sweep.csv", rate_sweep_csv(rows));
  std::cout << "rate sweep: " << points << " points, rbar in [" << csv_num(r_lo) << ", "
            << csv_num(r_hi) << "], A = " << csv_num(A) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"revenue-maximizing schedules for gradual inconvenience rollouts"};
  app.require_subcommand(1);

  CliOptions opt;
  const auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON configuration file")->required();
    sub->add_option("--out", opt.out_dir, "output directory (overrides config)");
    sub->add_option("--seed", opt.seed, "seed override");
    sub->add_option("--grid-step", opt.grid_step, "grid step override");
    sub->add_option("--threads", opt.threads, "worker threads (0 = auto)");
    sub->add_flag("--allow-cap", opt.allow_cap, "capped z* is not a failure");
  };

  auto* classify = app.add_subcommand(
      "classify", "log-curvature class of the retention curve (exit 0/10/11/12 = "
                  "LogConcave/LogConvex/DiscontinuousLogConcaveTail/Neither)");
  add_common(classify);
  auto* optimize = app.add_subcommand("optimize", "solve for the best (x, z) schedule");
  add_common(optimize);
  auto* simulate = app.add_subcommand("simulate", "seeded Monte-Carlo cohort replay");
  add_common(simulate);
  auto* estimate =
      app.add_subcommand("estimate", "simulated A/B estimation of the retention curve");
  add_common(estimate);
  estimate->add_flag("--chain", opt.chain, "feed the fitted curve into the optimizer");
  auto* sweep_rate = app.add_subcommand(
      "sweep-rate", "long-run survival as a function of the average rollout rate");
  add_common(sweep_rate);

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify->parsed()) return cmd_classify(opt);
    if (optimize->parsed()) return cmd_optimize(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
    if (estimate->parsed()) return cmd_estimate(opt);
    if (sweep_rate->parsed()) return cmd_sweep_rate(opt);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::range_error& e) {
    std::cerr << "range error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
