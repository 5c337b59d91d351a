#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "d2dcov/analytic.hpp"
#include "d2dcov/harness/config.hpp"
#include "d2dcov/harness/csv.hpp"
#include "d2dcov/harness/experiment.hpp"
#include "d2dcov/harness/units.hpp"
#include "d2dcov/harness/version.hpp"
#include "d2dcov/montecarlo.hpp"

namespace {

using namespace d2dcov;

struct CommonFlags {
  std::string config_file;
  std::uint64_t seed = 0;
  std::string out_dir;
  int replications = 0;
  std::vector<double> gamma_db;
  std::vector<double> lambda;
  std::vector<double> mu;
  std::string edge_mode;
  int workers = 1;

  CLI::Option* config_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* reps_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* mu_opt = nullptr;
  CLI::Option* edge_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
};

void add_common_flags(CLI::App* sub, CommonFlags& f) {
  f.config_opt =
      sub->add_option("--config", f.config_file, "flat dotted-key config file");
  f.seed_opt = sub->add_option("--seed", f.seed, "master seed");
  f.out_opt = sub->add_option("--out", f.out_dir, "output directory");
  f.reps_opt =
      sub->add_option("--replications", f.replications, "replication count")
          ->check(CLI::PositiveNumber);
  f.gamma_opt = sub->add_option("--gamma-db", f.gamma_db,
                                "SIR threshold(s) in dB, comma-separated")
                    ->delimiter(',');
  f.lambda_opt = sub->add_option("--lambda", f.lambda,
                                 "device density [1/m^2], comma-separated")
                     ->delimiter(',');
  f.mu_opt = sub->add_option("--mu", f.mu, "pairing range(s) [m], comma-separated")
                 ->delimiter(',');
  f.edge_opt = sub->add_option("--edge-mode", f.edge_mode,
                               "boundary handling: none|guard_ring")
                   ->check(CLI::IsMember({"none", "guard_ring"}));
  f.workers_opt = sub->add_option("--workers", f.workers,
                                  "worker threads (0 = one per core)");
}

/// Config file first, then flag overrides.
SimConfig resolve_config(const CommonFlags& f) {
  SimConfig config;
  if (*f.config_opt)
    config = sim_config_from_entries(load_config_file(f.config_file));
  if (*f.seed_opt) config.master_seed = f.seed;
  if (*f.reps_opt) config.replications = f.replications;
  if (*f.edge_opt) config.edge_mode = edge_mode_from_name(f.edge_mode);
  if (*f.workers_opt) config.workers = f.workers;
  return config;
}

double single_value(const std::vector<double>& values, const char* flag) {
  if (values.size() != 1)
    throw ConfigError(std::string("expected exactly one value for ") + flag +
                      " here; grids belong to sweep/figure commands");
  return values.front();
}

void apply_scalar_model_overrides(const CommonFlags& f, SimConfig& config,
                                  bool mu_is_scalar) {
  if (*f.lambda_opt) config.model.lambda = single_value(f.lambda, "--lambda");
  if (mu_is_scalar && *f.mu_opt) config.model.mu = single_value(f.mu, "--mu");
}

std::filesystem::path out_or_default(const CommonFlags& f,
                                     const std::string& fallback) {
  if (*f.out_opt) return f.out_dir;
  return std::filesystem::path("out") / fallback;
}

void report(const std::vector<ExperimentResult>& results) {
  for (const ExperimentResult& r : results)
    for (const std::filesystem::path& p : r.outputs)
      std::cout << "wrote " << p.string() << "\n";
}

int cmd_analytic(const CommonFlags& f) {
  SimConfig config = resolve_config(f);
  apply_scalar_model_overrides(f, config, true);
  const ModelParams& m = config.model;
  m.validate();

  std::vector<double> grid = f.gamma_db;
  if (grid.empty()) grid = {0.0};

  const double retention = retention_probability(m.k, m.lambda, m.mu);
  const double median_r =
      std::sqrt((m.inner_radius * m.inner_radius + m.cell_radius * m.cell_radius) /
                2.0);
  std::cout << "# model: R=" << csv_double(m.cell_radius)
            << " R0=" << csv_double(m.inner_radius)
            << " lambda=" << csv_double(m.lambda) << " mu=" << csv_double(m.mu)
            << " k=" << csv_double(m.k) << " alpha=" << csv_double(m.alpha)
            << " p_c=" << csv_double(m.p_c) << " p_i=" << csv_double(m.p_i)
            << "\n";
  std::cout << "# retention_probability=" << csv_double(retention)
            << " sinc_constant=" << csv_double(sinc_constant(m.alpha)) << "\n";

  const std::vector<std::string> header = {
      "gamma_db",       "gamma_linear",          "coverage_analytic",
      "coverage_lb_analytic", "gain_points_analytic", "gain_ratio_pct_analytic",
      "laplace_median_r"};
  std::vector<std::vector<std::string>> rows;
  for (double db : grid) {
    const double gamma = db_to_linear(db);
    const double cov = m.alpha == 4.0 ? coverage_alpha4(gamma, m)
                                      : coverage_general(gamma, m);
    const double lb = m.alpha == 4.0 ? coverage_lower_bound(gamma, m)
                                     : coverage_general_lower_bound(gamma, m);
    const CoverageGain gain = coverage_gain(cov, lb);
    // Conditional coverage of the median-radius user equals the interference
    // Laplace transform at s = gamma r^alpha / p_c.
    const double s = gamma * std::pow(median_r, m.alpha) / m.p_c;
    const double laplace = interference_laplace(
        s, m.lambda * retention, m);
    rows.push_back({csv_double(db), csv_double(gamma), csv_double(cov),
                    csv_double(lb), csv_double(gain.points),
                    csv_double(gain.ratio_pct), csv_double(laplace)});
  }
  const std::string table = csv_table(header, rows);
  std::cout << table;

  if (*f.out_opt) {
    const std::filesystem::path dir = f.out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
      throw HarnessError("cannot create output directory " + dir.string() +
                         ": " + ec.message());
    std::ofstream out(dir / "analytic.csv", std::ios::binary);
    if (!out) throw HarnessError("cannot write " + (dir / "analytic.csv").string());
    out << table;
    std::cout << "wrote " << (dir / "analytic.csv").string() << "\n";
  }
  return 0;
}

int cmd_simulate(const CommonFlags& f) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kCoverageVsGamma;
  spec.name = "simulate";
  spec.config = resolve_config(f);
  apply_scalar_model_overrides(f, spec.config, true);
  spec.gamma_db = f.gamma_db.empty() ? inclusive_grid(-10.0, 20.0, 2.5)
                                     : f.gamma_db;
  spec.output_dir = out_or_default(f, "simulate");
  report({run_experiment(spec)});
  return 0;
}

int cmd_retention(const CommonFlags& f) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kRetentionCurve;
  spec.name = "retention";
  spec.config = resolve_config(f);
  apply_scalar_model_overrides(f, spec.config, false);
  spec.mu_grid = f.mu.empty() ? inclusive_grid(5.0, 100.0, 5.0) : f.mu;
  spec.output_dir = out_or_default(f, "retention");
  report({run_experiment(spec)});
  return 0;
}

int cmd_calibrate(const CommonFlags& f) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kCalibration;
  spec.name = "calibrate";
  spec.config = resolve_config(f);
  apply_scalar_model_overrides(f, spec.config, false);
  spec.mu_grid = f.mu.empty() ? std::vector<double>{10, 20, 30, 40, 50} : f.mu;
  spec.output_dir = out_or_default(f, "calibrate");
  const ExperimentResult result = run_experiment(spec);
  std::cout << "fitted k = " << csv_double(result.fitted_k)
            << " (sse = " << csv_double(result.fit_sse) << ")\n";
  report({result});
  return 0;
}

int cmd_figure(int figure, const CommonFlags& f) {
  SimConfig config = resolve_config(f);
  const std::filesystem::path out =
      out_or_default(f, "figure" + std::to_string(figure));
  report(run_figure(figure, config, out));
  return 0;
}

int cmd_sweep(const CommonFlags& f) {
  const bool gamma_sweep = f.gamma_db.size() >= 2;
  const bool lambda_sweep = f.lambda.size() >= 2;
  const bool mu_sweep = f.mu.size() >= 2;
  if (static_cast<int>(gamma_sweep) + static_cast<int>(lambda_sweep) +
          static_cast<int>(mu_sweep) !=
      1)
    throw ConfigError(
        "sweep: provide a grid of two or more values for exactly one of "
        "--gamma-db, --lambda, --mu");

  ExperimentSpec spec;
  spec.name = "sweep";
  spec.config = resolve_config(f);
  spec.output_dir = out_or_default(f, "sweep");
  if (gamma_sweep) {
    spec.kind = ExperimentKind::kCoverageVsGamma;
    apply_scalar_model_overrides(f, spec.config, true);
    spec.gamma_db = f.gamma_db;
  } else if (lambda_sweep) {
    spec.kind = ExperimentKind::kCoverageVsLambda;
    if (*f.mu_opt) spec.config.model.mu = single_value(f.mu, "--mu");
    spec.lambda_grid = f.lambda;
    spec.gamma_db = f.gamma_db.empty()
                        ? std::vector<double>{0.0}
                        : std::vector<double>{single_value(f.gamma_db,
                                                           "--gamma-db")};
  } else {
    spec.kind = ExperimentKind::kRetentionCurve;
    if (*f.lambda_opt)
      spec.config.model.lambda = single_value(f.lambda, "--lambda");
    spec.mu_grid = f.mu;
  }
  report({run_experiment(spec)});
  return 0;
}

int cmd_rerun(const std::string& manifest, const CommonFlags& f) {
  std::optional<std::filesystem::path> out;
  if (*f.out_opt) out = std::filesystem::path(f.out_dir);
  report(rerun_manifest(manifest, out));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coverage analysis of a cellular uplink shared with "
               "device-to-device pairs"};
  app.set_version_flag("--version",
                       std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  CommonFlags analytic_f, simulate_f, retention_f, calibrate_f, figure_f,
      sweep_f, rerun_f;

  CLI::App* analytic =
      app.add_subcommand("analytic", "evaluate the closed-form expressions");
  add_common_flags(analytic, analytic_f);

  CLI::App* simulate =
      app.add_subcommand("simulate", "coverage estimate over an SIR grid");
  add_common_flags(simulate, simulate_f);

  CLI::App* retention =
      app.add_subcommand("retention", "empirical retention curve over mu");
  add_common_flags(retention, retention_f);

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "fit the retention tuning factor k");
  add_common_flags(calibrate, calibrate_f);

  CLI::App* figure =
      app.add_subcommand("figure", "reproduce a standard figure (2-5)");
  int figure_no = 0;
  figure->add_option("number", figure_no, "figure number")
      ->required()
      ->check(CLI::Range(2, 5));
  add_common_flags(figure, figure_f);

  CLI::App* sweep = app.add_subcommand("sweep", "generic one-variable sweep");
  add_common_flags(sweep, sweep_f);

  CLI::App* rerun =
      app.add_subcommand("rerun", "re-execute an experiment from its manifest");
  std::string manifest_path;
  rerun->add_option("--manifest", manifest_path, "params.json of a previous run")
      ->required();
  add_common_flags(rerun, rerun_f);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analytic) return cmd_analytic(analytic_f);
    if (*simulate) return cmd_simulate(simulate_f);
    if (*retention) return cmd_retention(retention_f);
    if (*calibrate) return cmd_calibrate(calibrate_f);
    if (*figure) return cmd_figure(figure_no, figure_f);
    if (*sweep) return cmd_sweep(sweep_f);
    if (*rerun) return cmd_rerun(manifest_path, rerun_f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
