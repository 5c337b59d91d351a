#include "d2dcov/harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "d2dcov/analytic.hpp"
#include "d2dcov/harness/config.hpp"
#include "d2dcov/harness/csv.hpp"
#include "d2dcov/harness/svgplot.hpp"
#include "d2dcov/harness/units.hpp"
#include "d2dcov/harness/version.hpp"

namespace d2dcov {

namespace {

using nlohmann::json;

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

void require_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty())
    throw ConfigError(std::string("experiment: empty ") + what + " grid");
  if (!strictly_increasing(grid))
    throw ConfigError(std::string("experiment: ") + what +
                      " grid must be strictly increasing");
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw HarnessError("cannot create output directory " + dir.string() + ": " +
                       ec.message());
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw HarnessError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw HarnessError("failed writing " + path.string());
}

/// Thinned coverage and lower bound from the matching closed forms; the
/// alpha = 4 specialization when it applies, the general expression otherwise.
std::pair<double, double> analytic_coverage_pair(double gamma_lin,
                                                 const ModelParams& model) {
  if (model.alpha == 4.0)
    return {coverage_alpha4(gamma_lin, model),
            coverage_lower_bound(gamma_lin, model)};
  return {coverage_general(gamma_lin, model),
          coverage_general_lower_bound(gamma_lin, model)};
}

std::string format_k(double k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", k);
  return buf;
}

GainRow compute_gain_row(const SimConfig& base, const GainPoint& point,
                         const std::vector<double>& run_gamma_db,
                         const CoverageRun& run) {
  GainRow row;
  row.lambda = point.lambda;
  row.gamma_db = point.gamma_db;

  ModelParams model = base.model;
  model.lambda = point.lambda;
  const double gamma_lin = db_to_linear(point.gamma_db);
  std::tie(row.coverage_analytic, row.coverage_lb_analytic) =
      analytic_coverage_pair(gamma_lin, model);
  row.analytic_gain = coverage_gain(row.coverage_analytic, row.coverage_lb_analytic);

  // Reuse the sweep's estimates when the cell lies on the sweep; otherwise
  // run a one-threshold simulation at the requested density.
  std::size_t on_grid = run_gamma_db.size();
  if (point.lambda == base.model.lambda) {
    for (std::size_t i = 0; i < run_gamma_db.size(); ++i)
      if (run_gamma_db[i] == point.gamma_db) on_grid = i;
  }
  if (on_grid < run_gamma_db.size()) {
    row.coverage_mc = run.thinned[on_grid].coverage;
    row.coverage_lb_mc = run.lower_bound[on_grid].coverage;
  } else {
    SimConfig cell_config = base;
    cell_config.model.lambda = point.lambda;
    const double grid[1] = {gamma_lin};
    const CoverageRun cell_run = simulate_coverage_run(cell_config, grid);
    row.coverage_mc = cell_run.thinned[0].coverage;
    row.coverage_lb_mc = cell_run.lower_bound[0].coverage;
  }
  row.mc_gain = coverage_gain(row.coverage_mc, row.coverage_lb_mc);
  return row;
}

const std::vector<std::string> kCoverageHeader = {
    "gamma_db",        "coverage_mc",   "coverage_analytic",
    "coverage_lb_mc",  "coverage_lb_analytic", "gain_points",
    "gain_ratio_pct",  "ci95",          "replications"};

const std::vector<std::string> kGainsHeader = {
    "lambda",
    "gamma_db",
    "coverage_analytic",
    "coverage_lb_analytic",
    "gain_points_analytic",
    "gain_ratio_pct_analytic",
    "coverage_mc",
    "coverage_lb_mc",
    "gain_points_mc",
    "gain_ratio_pct_mc"};

const std::vector<std::string> kRetentionHeader = {
    "mu_m", "retention_empirical", "retention_analytic", "ci95", "replications"};

void run_coverage_vs_gamma(const ExperimentSpec& spec, ExperimentResult& result) {
  std::vector<double> gamma_lin(spec.gamma_db.size());
  std::transform(spec.gamma_db.begin(), spec.gamma_db.end(), gamma_lin.begin(),
                 db_to_linear);
  result.coverage = simulate_coverage_run(spec.config, gamma_lin);

  std::vector<std::vector<std::string>> rows;
  std::vector<double> an_cov(gamma_lin.size()), an_lb(gamma_lin.size());
  for (std::size_t i = 0; i < gamma_lin.size(); ++i) {
    std::tie(an_cov[i], an_lb[i]) =
        analytic_coverage_pair(gamma_lin[i], spec.config.model);
    const CoverageEstimate& mc = result.coverage.thinned[i];
    const CoverageEstimate& lb = result.coverage.lower_bound[i];
    const CoverageGain gain = coverage_gain(mc.coverage, lb.coverage);
    rows.push_back({csv_double(spec.gamma_db[i]), csv_double(mc.coverage),
                    csv_double(an_cov[i]), csv_double(lb.coverage),
                    csv_double(an_lb[i]), csv_double(gain.points),
                    csv_double(gain.ratio_pct), csv_double(mc.half_width_95),
                    csv_int(mc.replications)});
  }
  write_text(spec.output_dir / "results.csv", csv_table(kCoverageHeader, rows));
  result.outputs.push_back(spec.output_dir / "results.csv");

  if (!spec.gain_points.empty()) {
    std::vector<std::vector<std::string>> gain_rows;
    for (const GainPoint& point : spec.gain_points) {
      const GainRow row =
          compute_gain_row(spec.config, point, spec.gamma_db, result.coverage);
      result.gains.push_back(row);
      gain_rows.push_back(
          {csv_double(row.lambda), csv_double(row.gamma_db),
           csv_double(row.coverage_analytic), csv_double(row.coverage_lb_analytic),
           csv_double(row.analytic_gain.points),
           csv_double(row.analytic_gain.ratio_pct), csv_double(row.coverage_mc),
           csv_double(row.coverage_lb_mc), csv_double(row.mc_gain.points),
           csv_double(row.mc_gain.ratio_pct)});
    }
    write_text(spec.output_dir / "gains.csv", csv_table(kGainsHeader, gain_rows));
    result.outputs.push_back(spec.output_dir / "gains.csv");
  }

  PlotSpec plot;
  plot.title = spec.name;
  plot.x_label = "SIR threshold [dB]";
  plot.y_label = "coverage probability";
  std::vector<double> mc_cov, mc_lb;
  for (const CoverageEstimate& e : result.coverage.thinned)
    mc_cov.push_back(e.coverage);
  for (const CoverageEstimate& e : result.coverage.lower_bound)
    mc_lb.push_back(e.coverage);
  plot.series.push_back({"simulated", spec.gamma_db, mc_cov, true, false, 0});
  plot.series.push_back({"analytic", spec.gamma_db, an_cov, false, false, 0});
  plot.series.push_back(
      {"lower bound simulated", spec.gamma_db, mc_lb, true, false, 1});
  plot.series.push_back(
      {"lower bound analytic", spec.gamma_db, an_lb, false, true, 1});
  write_svg_plot(spec.output_dir / "plot.svg", plot);
  result.outputs.push_back(spec.output_dir / "plot.svg");
}

void run_coverage_vs_lambda(const ExperimentSpec& spec, ExperimentResult& result) {
  const double gamma_lin = db_to_linear(spec.gamma_db.front());
  const double grid[1] = {gamma_lin};

  std::vector<std::vector<std::string>> rows;
  std::vector<double> an_cov, an_lb, mc_cov, mc_lb;
  for (double lambda : spec.lambda_grid) {
    SimConfig config = spec.config;
    config.model.lambda = lambda;
    const CoverageRun run = simulate_coverage_run(config, grid);
    result.coverage.thinned.push_back(run.thinned[0]);
    result.coverage.lower_bound.push_back(run.lower_bound[0]);

    const auto [cov_an, lb_an] = analytic_coverage_pair(gamma_lin, config.model);
    an_cov.push_back(cov_an);
    an_lb.push_back(lb_an);
    mc_cov.push_back(run.thinned[0].coverage);
    mc_lb.push_back(run.lower_bound[0].coverage);

    const CoverageGain gain =
        coverage_gain(run.thinned[0].coverage, run.lower_bound[0].coverage);
    rows.push_back({csv_double(lambda), csv_double(run.thinned[0].coverage),
                    csv_double(cov_an), csv_double(run.lower_bound[0].coverage),
                    csv_double(lb_an), csv_double(gain.points),
                    csv_double(gain.ratio_pct),
                    csv_double(run.thinned[0].half_width_95),
                    csv_int(run.thinned[0].replications)});
  }

  std::vector<std::string> header = kCoverageHeader;
  header[0] = "lambda";  // sweep variable replaces the threshold column
  write_text(spec.output_dir / "results.csv", csv_table(header, rows));
  result.outputs.push_back(spec.output_dir / "results.csv");

  PlotSpec plot;
  plot.title = spec.name;
  plot.x_label = "device density [1/m^2]";
  plot.y_label = "coverage probability";
  plot.series.push_back({"simulated", spec.lambda_grid, mc_cov, true, false, 0});
  plot.series.push_back({"analytic", spec.lambda_grid, an_cov, false, false, 0});
  plot.series.push_back(
      {"lower bound simulated", spec.lambda_grid, mc_lb, true, false, 1});
  plot.series.push_back(
      {"lower bound analytic", spec.lambda_grid, an_lb, false, true, 1});
  write_svg_plot(spec.output_dir / "plot.svg", plot);
  result.outputs.push_back(spec.output_dir / "plot.svg");
}

std::vector<std::vector<std::string>> retention_rows(
    const RetentionCurve& curve, double k, double lambda) {
  std::vector<std::vector<std::string>> rows;
  for (const RetentionEstimate& est : curve.points) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rows.push_back({csv_double(est.mu),
                    csv_double(est.defined ? est.probability : nan),
                    csv_double(retention_probability(k, lambda, est.mu)),
                    csv_double(est.defined ? est.half_width_95 : nan),
                    csv_int(est.replications)});
  }
  return rows;
}

std::vector<double> analytic_retention_series(const std::vector<double>& mu_grid,
                                              double k, double lambda) {
  std::vector<double> out(mu_grid.size());
  std::transform(mu_grid.begin(), mu_grid.end(), out.begin(),
                 [k, lambda](double mu) {
                   return retention_probability(k, lambda, mu);
                 });
  return out;
}

void run_retention_curve(const ExperimentSpec& spec, ExperimentResult& result) {
  result.retention =
      estimate_retention(spec.config, spec.mu_grid, spec.config.replications);
  write_text(spec.output_dir / "results.csv",
             csv_table(kRetentionHeader,
                       retention_rows(result.retention, spec.config.model.k,
                                      spec.config.model.lambda)));
  result.outputs.push_back(spec.output_dir / "results.csv");

  PlotSpec plot;
  plot.title = spec.name;
  plot.x_label = "pairing range [m]";
  plot.y_label = "retention probability";
  std::vector<double> empirical;
  for (const RetentionEstimate& est : result.retention.points)
    empirical.push_back(est.defined ? est.probability
                                    : std::numeric_limits<double>::quiet_NaN());
  plot.series.push_back({"simulated", spec.mu_grid, empirical, true, false, -1});
  plot.series.push_back(
      {"model k=" + format_k(spec.config.model.k), spec.mu_grid,
       analytic_retention_series(spec.mu_grid, spec.config.model.k,
                                 spec.config.model.lambda),
       false, false, -1});
  for (double k : spec.plot_k_values) {
    if (k == spec.config.model.k) continue;
    plot.series.push_back(
        {"model k=" + format_k(k), spec.mu_grid,
         analytic_retention_series(spec.mu_grid, k, spec.config.model.lambda),
         false, true, -1});
  }
  write_svg_plot(spec.output_dir / "plot.svg", plot);
  result.outputs.push_back(spec.output_dir / "plot.svg");
}

void run_calibration(const ExperimentSpec& spec, ExperimentResult& result) {
  const CalibrationResult fit =
      calibrate_k(spec.config, spec.mu_grid, spec.config.replications);
  result.retention = fit.curve;
  result.fitted_k = fit.k;
  result.fit_sse = fit.sse;

  // The analytic column reports the fitted model, so the CSV shows the fit.
  write_text(spec.output_dir / "results.csv",
             csv_table(kRetentionHeader,
                       retention_rows(fit.curve, fit.k,
                                      spec.config.model.lambda)));
  result.outputs.push_back(spec.output_dir / "results.csv");

  json calib;
  calib["tool"] = kToolName;
  calib["version"] = kToolVersion;
  calib["k"] = fit.k;
  calib["sse"] = fit.sse;
  calib["lambda"] = spec.config.model.lambda;
  calib["mu_grid"] = spec.mu_grid;
  calib["replications"] = spec.config.replications;
  calib["master_seed"] = spec.config.master_seed;
  write_text(spec.output_dir / "calibration.json", calib.dump(2) + "\n");
  result.outputs.push_back(spec.output_dir / "calibration.json");

  PlotSpec plot;
  plot.title = spec.name;
  plot.x_label = "pairing range [m]";
  plot.y_label = "retention probability";
  std::vector<double> empirical;
  for (const RetentionEstimate& est : fit.curve.points)
    empirical.push_back(est.defined ? est.probability
                                    : std::numeric_limits<double>::quiet_NaN());
  plot.series.push_back({"simulated", spec.mu_grid, empirical, true, false, -1});
  plot.series.push_back(
      {"fitted model k=" + format_k(fit.k), spec.mu_grid,
       analytic_retention_series(spec.mu_grid, fit.k, spec.config.model.lambda),
       false, false, -1});
  write_svg_plot(spec.output_dir / "plot.svg", plot);
  result.outputs.push_back(spec.output_dir / "plot.svg");
}

}  // namespace

const char* experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kRetentionCurve: return "retention_curve";
    case ExperimentKind::kCoverageVsGamma: return "coverage_vs_gamma";
    case ExperimentKind::kCoverageVsLambda: return "coverage_vs_lambda";
    case ExperimentKind::kCalibration: return "calibration";
  }
  throw std::logic_error("experiment_kind_name: bad kind");
}

ExperimentKind experiment_kind_from_name(std::string_view name) {
  if (name == "retention_curve") return ExperimentKind::kRetentionCurve;
  if (name == "coverage_vs_gamma") return ExperimentKind::kCoverageVsGamma;
  if (name == "coverage_vs_lambda") return ExperimentKind::kCoverageVsLambda;
  if (name == "calibration") return ExperimentKind::kCalibration;
  throw ConfigError("experiment: unknown kind '" + std::string(name) + "'");
}

void ExperimentSpec::validate() const {
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("experiment: ") + e.what());
  }
  switch (kind) {
    case ExperimentKind::kCoverageVsGamma:
      require_grid(gamma_db, "gamma_db");
      break;
    case ExperimentKind::kCoverageVsLambda:
      require_grid(lambda_grid, "lambda");
      if (gamma_db.size() != 1)
        throw ConfigError(
            "experiment: coverage_vs_lambda needs exactly one gamma_db value");
      for (double lambda : lambda_grid)
        if (!(lambda >= 0.0))
          throw ConfigError("experiment: lambda grid has negative values");
      break;
    case ExperimentKind::kRetentionCurve:
    case ExperimentKind::kCalibration:
      require_grid(mu_grid, "mu");
      for (double mu : mu_grid)
        if (!(mu >= 0.0))
          throw ConfigError("experiment: mu grid has negative values");
      break;
  }
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ensure_directory(spec.output_dir);

  ExperimentResult result;
  result.output_dir = spec.output_dir;
  switch (spec.kind) {
    case ExperimentKind::kCoverageVsGamma:
      run_coverage_vs_gamma(spec, result);
      break;
    case ExperimentKind::kCoverageVsLambda:
      run_coverage_vs_lambda(spec, result);
      break;
    case ExperimentKind::kRetentionCurve:
      run_retention_curve(spec, result);
      break;
    case ExperimentKind::kCalibration:
      run_calibration(spec, result);
      break;
  }

  write_text(spec.output_dir / "params.json", manifest_json(spec));
  result.outputs.push_back(spec.output_dir / "params.json");
  return result;
}

std::string manifest_json(const ExperimentSpec& spec) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["type"] = "experiment";
  j["kind"] = experiment_kind_name(spec.kind);
  j["name"] = spec.name;
  // The config block mirrors the config-file key set, so a manifest can seed
  // new runs; string values round-trip exactly.
  j["config"] = sim_config_to_entries(spec.config);
  j["gamma_db"] = spec.gamma_db;
  j["lambda_grid"] = spec.lambda_grid;
  j["mu_grid"] = spec.mu_grid;
  json gains = json::array();
  for (const GainPoint& p : spec.gain_points)
    gains.push_back({{"lambda", p.lambda}, {"gamma_db", p.gamma_db}});
  j["gain_points"] = gains;
  j["plot_k_values"] = spec.plot_k_values;
  return j.dump(2) + "\n";
}

namespace {

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw HarnessError("cannot read manifest " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw HarnessError("malformed manifest " + path.string() + ": " + e.what());
  }
  return j;
}

}  // namespace

ExperimentSpec spec_from_manifest(
    const std::filesystem::path& manifest_path,
    const std::optional<std::filesystem::path>& override_out) {
  const json j = load_json(manifest_path);
  try {
    if (j.at("type") != "experiment")
      throw HarnessError("manifest " + manifest_path.string() +
                         " is not a single experiment");
    ExperimentSpec spec;
    spec.kind = experiment_kind_from_name(j.at("kind").get<std::string>());
    spec.name = j.at("name").get<std::string>();
    ConfigEntries entries;
    for (const auto& [key, value] : j.at("config").items())
      entries[key] = value.get<std::string>();
    spec.config = sim_config_from_entries(entries);
    spec.gamma_db = j.at("gamma_db").get<std::vector<double>>();
    spec.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    spec.mu_grid = j.at("mu_grid").get<std::vector<double>>();
    for (const auto& g : j.at("gain_points"))
      spec.gain_points.push_back(
          {g.at("lambda").get<double>(), g.at("gamma_db").get<double>()});
    spec.plot_k_values = j.at("plot_k_values").get<std::vector<double>>();
    spec.output_dir =
        override_out ? *override_out : manifest_path.parent_path();
    return spec;
  } catch (const json::exception& e) {
    throw HarnessError("malformed manifest " + manifest_path.string() + ": " +
                       e.what());
  }
}

std::vector<ExperimentResult> rerun_manifest(
    const std::filesystem::path& manifest_path,
    const std::optional<std::filesystem::path>& override_out) {
  const json j = load_json(manifest_path);
  const std::string type = j.value("type", "experiment");
  std::vector<ExperimentResult> results;
  if (type == "experiment") {
    results.push_back(run_experiment(spec_from_manifest(manifest_path, override_out)));
    return results;
  }
  if (type == "collection") {
    const auto runs = j.at("runs").get<std::vector<std::string>>();
    for (const std::string& name : runs) {
      const std::filesystem::path sub =
          manifest_path.parent_path() / name / "params.json";
      std::optional<std::filesystem::path> sub_out;
      if (override_out) sub_out = *override_out / name;
      results.push_back(run_experiment(spec_from_manifest(sub, sub_out)));
    }
    return results;
  }
  throw HarnessError("manifest " + manifest_path.string() +
                     " has unknown type '" + type + "'");
}

std::vector<double> inclusive_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start))
    throw std::invalid_argument("inclusive_grid: require step > 0, stop >= start");
  const long long n = std::llround((stop - start) / step);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (long long i = 0; i <= n; ++i) out.push_back(start + i * step);
  return out;
}

std::vector<ExperimentResult> run_figure(int figure, const SimConfig& base,
                                         const std::filesystem::path& out_dir) {
  std::vector<ExperimentResult> results;
  switch (figure) {
    case 2: {
      ExperimentSpec spec;
      spec.kind = ExperimentKind::kRetentionCurve;
      spec.name = "figure2";
      spec.config = base;
      spec.config.model.lambda = 2.5e-5;
      spec.mu_grid = inclusive_grid(5.0, 100.0, 5.0);
      spec.plot_k_values = {0.6, 1.0};
      spec.output_dir = out_dir;
      results.push_back(run_experiment(spec));
      break;
    }
    case 3: {
      const std::vector<double> lambdas = {1.2e-5, 2.5e-5, 5e-5, 7.5e-5, 1e-4};
      std::vector<std::string> run_names;
      PlotSpec combined;
      combined.title = "figure3";
      combined.x_label = "pairing range [m]";
      combined.y_label = "retention probability";
      const std::vector<double> mu_grid = inclusive_grid(5.0, 100.0, 5.0);
      for (std::size_t i = 0; i < lambdas.size(); ++i) {
        ExperimentSpec spec;
        spec.kind = ExperimentKind::kRetentionCurve;
        spec.config = base;
        spec.config.model.lambda = lambdas[i];
        spec.mu_grid = mu_grid;
        const std::string tag = "lambda_" + csv_double(lambdas[i]);
        spec.name = "figure3_" + tag;
        spec.output_dir = out_dir / tag;
        ExperimentResult result = run_experiment(spec);

        std::vector<double> empirical;
        for (const RetentionEstimate& est : result.retention.points)
          empirical.push_back(est.defined
                                  ? est.probability
                                  : std::numeric_limits<double>::quiet_NaN());
        combined.series.push_back({"sim " + tag, mu_grid, empirical, true,
                                   false, static_cast<int>(i)});
        combined.series.push_back(
            {"model " + tag, mu_grid,
             analytic_retention_series(mu_grid, spec.config.model.k, lambdas[i]),
             false, true, static_cast<int>(i)});
        results.push_back(std::move(result));
        run_names.push_back(tag);
      }
      ensure_directory(out_dir);
      write_svg_plot(out_dir / "figure3.svg", combined);
      json manifest;
      manifest["tool"] = kToolName;
      manifest["version"] = kToolVersion;
      manifest["type"] = "collection";
      manifest["name"] = "figure3";
      manifest["runs"] = run_names;
      write_text(out_dir / "params.json", manifest.dump(2) + "\n");
      break;
    }
    case 4: {
      ExperimentSpec spec;
      spec.kind = ExperimentKind::kCoverageVsGamma;
      spec.name = "figure4";
      spec.config = base;
      spec.config.model.lambda = 5e-5;
      spec.gamma_db = inclusive_grid(-10.0, 20.0, 2.5);
      spec.gain_points = {{5e-5, -5.0}, {5e-5, 20.0}, {7.5e-5, 20.0}};
      spec.output_dir = out_dir;
      results.push_back(run_experiment(spec));
      break;
    }
    case 5: {
      ExperimentSpec spec;
      spec.kind = ExperimentKind::kCoverageVsLambda;
      spec.name = "figure5";
      spec.config = base;
      spec.gamma_db = {0.0};
      spec.lambda_grid = inclusive_grid(1e-5, 1e-4, 1e-5);
      spec.output_dir = out_dir;
      results.push_back(run_experiment(spec));
      break;
    }
    default:
      throw ConfigError("figure: expected 2, 3, 4, or 5");
  }
  return results;
}

}  // namespace d2dcov
