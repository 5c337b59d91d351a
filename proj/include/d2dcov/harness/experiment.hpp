#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "d2dcov/montecarlo.hpp"
#include "d2dcov/simconfig.hpp"

namespace d2dcov {

struct HarnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
  kRetentionCurve,
  kCoverageVsGamma,
  kCoverageVsLambda,
  kCalibration,
};

const char* experiment_kind_name(ExperimentKind kind);
ExperimentKind experiment_kind_from_name(std::string_view name);

/// Extra (density, threshold) cell whose analytic and simulated gains are
/// tabulated in gains.csv alongside a coverage-vs-threshold run.
struct GainPoint {
  double lambda = 0.0;
  double gamma_db = 0.0;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kCoverageVsGamma;
  std::string name = "experiment";
  SimConfig config;

  std::vector<double> gamma_db;     // threshold grid [dB]; exactly one value
                                    // for coverage_vs_lambda
  std::vector<double> lambda_grid;  // density grid for coverage_vs_lambda
  std::vector<double> mu_grid;      // pairing-range grid for retention kinds
  std::vector<GainPoint> gain_points;

  /// Extra analytic retention series drawn in the plot (tuning-factor
  /// comparison); does not affect the CSV.
  std::vector<double> plot_k_values;

  std::filesystem::path output_dir;

  /// Grid nonempty and strictly increasing for the kind's sweep variable;
  /// config valid.
  void validate() const;
};

/// One gains.csv row: analytic and simulated coverage gain at a cell.
struct GainRow {
  double lambda = 0.0;
  double gamma_db = 0.0;
  double coverage_analytic = 0.0;
  double coverage_lb_analytic = 0.0;
  CoverageGain analytic_gain;
  double coverage_mc = 0.0;
  double coverage_lb_mc = 0.0;
  CoverageGain mc_gain;
};

struct ExperimentResult {
  std::filesystem::path output_dir;
  std::vector<std::filesystem::path> outputs;  // files written

  // In-memory views of the tables, for callers composing figures or tests.
  RetentionCurve retention;        // retention_curve and calibration kinds
  CoverageRun coverage;            // coverage kinds, in sweep order
  std::vector<GainRow> gains;      // coverage_vs_gamma with gain_points
  double fitted_k = 0.0;           // calibration kind
  double fit_sse = 0.0;
};

/// Run one experiment: writes results.csv, a params.json manifest holding
/// every resolved input, a plot, and kind-specific extras (gains.csv,
/// calibration.json). Throws HarnessError / ConfigError on unwritable
/// directories or invalid specs.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// The manifest document for a spec (tool version plus all resolved inputs).
std::string manifest_json(const ExperimentSpec& spec);

/// Rebuild a spec from a manifest written by run_experiment. The output
/// directory defaults to the manifest's directory.
ExperimentSpec spec_from_manifest(
    const std::filesystem::path& manifest_path,
    const std::optional<std::filesystem::path>& override_out = {});

/// Re-execute the experiment(s) a manifest describes; understands both
/// single-experiment manifests and figure collections.
std::vector<ExperimentResult> rerun_manifest(
    const std::filesystem::path& manifest_path,
    const std::optional<std::filesystem::path>& override_out = {});

/// Assemble one of the four standard figures (2: retention vs range at one
/// density; 3: retention vs range across densities; 4: coverage vs threshold
/// with gain table; 5: coverage vs density) on top of `base` settings.
std::vector<ExperimentResult> run_figure(int figure, const SimConfig& base,
                                         const std::filesystem::path& out_dir);

/// Inclusive arithmetic grid start, start+step, ..., stop.
std::vector<double> inclusive_grid(double start, double stop, double step);

}  // namespace d2dcov
