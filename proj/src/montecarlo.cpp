#include "d2dcov/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <boost/math/tools/minima.hpp>

#include "d2dcov/analytic.hpp"
#include "d2dcov/pointprocess.hpp"

namespace d2dcov {

namespace {

double interference_power(const PointPattern& pattern,
                          const std::vector<std::size_t>& emitters,
                          double radius_limit_sq, double p_i, double alpha) {
  double total = 0.0;
  for (std::size_t idx : emitters) {
    const double r2 = pattern.positions[idx].radius_sq();
    if (r2 > radius_limit_sq) continue;
    total += p_i * pattern.fading[idx] * std::pow(r2, -0.5 * alpha);
  }
  return total;
}

CoverageEstimate aggregate(double gamma, std::uint64_t covered_count, int reps) {
  CoverageEstimate est;
  est.gamma = gamma;
  est.replications = reps;
  est.coverage = static_cast<double>(covered_count) / reps;
  est.half_width_95 =
      1.96 * std::sqrt(est.coverage * (1.0 - est.coverage) / reps);
  return est;
}

}  // namespace

ReplicationCoverage run_coverage_replication(const SimConfig& config,
                                             std::uint64_t replication,
                                             std::span<const double> gamma_grid) {
  const ModelParams& model = config.model;
  const double field_radius = config.effective_sim_radius();
  const bool guard = config.edge_mode == EdgeMode::kGuardRing;

  const RngStream rng(config.master_seed, replication);

  // Cell user: uniform on the cell annulus, with its own fading draw.
  const Annulus cell(model.inner_radius, model.cell_radius);
  const PolarPosition user = sample_cell_user(cell, rng);
  RngStream cell_fading = rng.substream(StreamPurpose::kCellFading);
  const double signal = model.p_c * cell_fading.exponential() *
                        std::pow(user.radius, -model.alpha);

  // Candidate nodes: sampled out to the interferer field radius, plus a guard
  // ring of width mu when pairing may cross that boundary.
  const Annulus sample_region(model.inner_radius,
                              field_radius + (guard ? model.mu : 0.0));
  const PointPattern pattern = sample_ppp(sample_region, model.lambda, rng);

  const PairingResult pairing = pair_nodes(pattern, model.mu);

  std::vector<std::size_t> thinned_emitters;
  if (config.interferer_policy == InterfererPolicy::kTransmitters) {
    thinned_emitters = select_transmitters(pairing, rng);
  } else {
    thinned_emitters.reserve(2 * pairing.pairs.size());
    for (const Pair& p : pairing.pairs) {
      thinned_emitters.push_back(p.a);
      thinned_emitters.push_back(p.b);
    }
  }
  std::vector<std::size_t> all_nodes(pattern.size());
  for (std::size_t i = 0; i < all_nodes.size(); ++i) all_nodes[i] = i;

  const double limit_sq = field_radius * field_radius;
  const double interference_thinned = interference_power(
      pattern, thinned_emitters, limit_sq, model.p_i, model.alpha);
  const double interference_lb = interference_power(
      pattern, all_nodes, limit_sq, model.p_i, model.alpha);

  ReplicationCoverage out;
  out.thinned.reserve(gamma_grid.size());
  out.lower_bound.reserve(gamma_grid.size());
  for (double gamma : gamma_grid) {
    out.thinned.push_back(signal >= gamma * interference_thinned ? 1 : 0);
    out.lower_bound.push_back(signal >= gamma * interference_lb ? 1 : 0);
  }
  return out;
}

CoverageRun simulate_coverage_run(const SimConfig& config,
                                  std::span<const double> gamma_grid) {
  config.validate();
  for (double gamma : gamma_grid)
    if (!(gamma >= 0.0))
      throw std::invalid_argument("simulate_coverage: gamma must be >= 0");

  const int reps = config.replications;
  const std::size_t grid_size = gamma_grid.size();

  // Per-replication indicator slots; workers write disjoint rows, so the
  // final reduction is independent of thread scheduling.
  std::vector<std::uint8_t> thinned_slots(
      static_cast<std::size_t>(reps) * grid_size);
  std::vector<std::uint8_t> lb_slots(static_cast<std::size_t>(reps) * grid_size);

  int workers = config.workers;
  if (workers == 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  workers = std::min(workers, reps);

  auto run_strided = [&](int first) {
    for (int rep = first; rep < reps; rep += workers) {
      const ReplicationCoverage rc = run_coverage_replication(
          config, static_cast<std::uint64_t>(rep), gamma_grid);
      const std::size_t base = static_cast<std::size_t>(rep) * grid_size;
      std::copy(rc.thinned.begin(), rc.thinned.end(),
                thinned_slots.begin() + base);
      std::copy(rc.lower_bound.begin(), rc.lower_bound.end(),
                lb_slots.begin() + base);
    }
  };

  if (workers <= 1) {
    run_strided(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(run_strided, t);
    for (std::thread& t : pool) t.join();
  }

  CoverageRun run;
  run.thinned.reserve(grid_size);
  run.lower_bound.reserve(grid_size);
  for (std::size_t g = 0; g < grid_size; ++g) {
    std::uint64_t covered_thinned = 0;
    std::uint64_t covered_lb = 0;
    for (int rep = 0; rep < reps; ++rep) {
      covered_thinned += thinned_slots[static_cast<std::size_t>(rep) * grid_size + g];
      covered_lb += lb_slots[static_cast<std::size_t>(rep) * grid_size + g];
    }
    run.thinned.push_back(aggregate(gamma_grid[g], covered_thinned, reps));
    run.lower_bound.push_back(aggregate(gamma_grid[g], covered_lb, reps));
  }
  return run;
}

std::vector<CoverageEstimate> simulate_coverage(const SimConfig& config,
                                                std::span<const double> gamma_grid) {
  return simulate_coverage_run(config, gamma_grid).thinned;
}

CoverageGain coverage_gain(double coverage, double coverage_lb) {
  CoverageGain gain;
  gain.points = 100.0 * (coverage - coverage_lb);
  gain.ratio_pct = coverage_lb > 0.0
                       ? 100.0 * (coverage - coverage_lb) / coverage_lb
                       : std::numeric_limits<double>::quiet_NaN();
  return gain;
}

double fit_retention_k(std::span<const double> mu_grid,
                       std::span<const double> empirical, double lambda) {
  if (mu_grid.size() != empirical.size() || mu_grid.empty())
    throw std::invalid_argument(
        "fit_retention_k: grids must be non-empty and equal-sized");
  if (!(lambda > 0.0))
    throw CalibrationError("fit_retention_k: degenerate fit at zero density");
  bool has_signal = false;
  for (double e : empirical)
    if (e > 0.0) has_signal = true;
  if (!has_signal)
    throw CalibrationError("fit_retention_k: empirical curve has no signal");

  const auto sse = [&](double k) {
    double total = 0.0;
    for (std::size_t i = 0; i < mu_grid.size(); ++i) {
      const double resid =
          empirical[i] - retention_probability(k, lambda, mu_grid[i]);
      total += resid * resid;
    }
    return total;
  };
  const auto [k, fk] = boost::math::tools::brent_find_minima(
      sse, 0.0, 5.0, std::numeric_limits<double>::digits);
  (void)fk;
  return k;
}

CalibrationResult calibrate_k(const SimConfig& config,
                              std::span<const double> mu_grid,
                              int replications) {
  int in_working_range = 0;
  for (double mu : mu_grid)
    if (mu > 0.0 && mu <= 50.0) ++in_working_range;
  if (in_working_range < 3)
    throw std::invalid_argument(
        "calibrate_k: need at least 3 grid points in (0, 50] m");

  CalibrationResult result;
  result.curve = estimate_retention(config, mu_grid, replications);

  std::vector<double> mu;
  std::vector<double> emp;
  for (const RetentionEstimate& p : result.curve.points) {
    if (!p.defined) continue;
    mu.push_back(p.mu);
    emp.push_back(p.probability);
  }
  if (mu.empty())
    throw CalibrationError("calibrate_k: no defined retention estimates");

  result.k = fit_retention_k(mu, emp, config.model.lambda);
  double sse = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double resid =
        emp[i] - retention_probability(result.k, config.model.lambda, mu[i]);
    sse += resid * resid;
  }
  result.sse = sse;
  return result;
}

}  // namespace d2dcov
