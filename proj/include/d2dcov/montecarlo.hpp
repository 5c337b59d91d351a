#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "d2dcov/pairing.hpp"
#include "d2dcov/simconfig.hpp"

namespace d2dcov {

struct CoverageEstimate {
  double gamma = 0.0;          // linear SIR threshold
  double coverage = 0.0;       // fraction of replications with SIR >= gamma
  double half_width_95 = 0.0;  // 1.96 sqrt(coverage (1 - coverage) / n)
  int replications = 0;
};

/// Both coverage series produced by one run: the paired-activity (thinned)
/// estimate and the everyone-transmits lower bound. Each replication feeds
/// both series from the same sampled pattern, fading, and cell user, so
/// thinned >= lower_bound holds replication by replication.
struct CoverageRun {
  std::vector<CoverageEstimate> thinned;
  std::vector<CoverageEstimate> lower_bound;
};

/// Coverage indicators of one replication across the threshold grid.
struct ReplicationCoverage {
  std::vector<std::uint8_t> thinned;
  std::vector<std::uint8_t> lower_bound;
};

/// Run a single replication. Deterministic in (config.master_seed,
/// replication); the simulation loop and tests share this entry point.
ReplicationCoverage run_coverage_replication(const SimConfig& config,
                                             std::uint64_t replication,
                                             std::span<const double> gamma_grid);

/// Estimate coverage over the threshold grid with config.replications
/// replications spread across config.workers threads. Output is bit-identical
/// for any worker count.
CoverageRun simulate_coverage_run(const SimConfig& config,
                                  std::span<const double> gamma_grid);

/// Thinned-mode series of simulate_coverage_run.
std::vector<CoverageEstimate> simulate_coverage(const SimConfig& config,
                                                std::span<const double> gamma_grid);

struct CoverageGain {
  double points = 0.0;     // percentage-point difference, 100 (cov - lb)
  double ratio_pct = 0.0;  // relative improvement, 100 (cov - lb) / lb
};

/// Gain of a coverage value over the lower bound. Never throws; when the
/// bound is zero the relative ratio is NaN while points stays well defined.
CoverageGain coverage_gain(double coverage, double coverage_lb);

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Least-squares fit of the retention tuning factor k to empirical retention
/// values over a mu grid. Throws CalibrationError when the fit is degenerate
/// (zero density or a curve with no signal).
double fit_retention_k(std::span<const double> mu_grid,
                       std::span<const double> empirical, double lambda);

struct CalibrationResult {
  double k = 0.0;
  double sse = 0.0;        // sum of squared residuals at the fitted k
  RetentionCurve curve;    // the empirical curve the fit was made against
};

/// Estimate retention over mu_grid, then fit k to the defined points.
CalibrationResult calibrate_k(const SimConfig& config,
                              std::span<const double> mu_grid,
                              int replications);

}  // namespace d2dcov
