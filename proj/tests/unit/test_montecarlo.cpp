#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "d2dcov/analytic.hpp"
#include "d2dcov/montecarlo.hpp"

using namespace d2dcov;

namespace {

SimConfig base_config(double lambda, std::uint64_t seed) {
  SimConfig c;
  c.model.lambda = lambda;
  c.master_seed = seed;
  return c;
}

double rel_err(double value, double reference) {
  return std::fabs(value - reference) / std::fabs(reference);
}

}  // namespace

TEST_CASE("zero density gives certain coverage") {
  SimConfig config = base_config(0.0, 1);
  config.replications = 50;
  const double grid[] = {0.1, 1.0, 10.0};
  const CoverageRun run = simulate_coverage_run(config, grid);
  for (const CoverageEstimate& est : run.thinned) {
    CHECK(est.coverage == 1.0);
    CHECK(est.half_width_95 == 0.0);
    CHECK(est.replications == 50);
  }
  for (const CoverageEstimate& est : run.lower_bound) CHECK(est.coverage == 1.0);
}

TEST_CASE("per-replication indicators are monotone in the threshold") {
  const SimConfig config = base_config(5e-5, 21);
  const double grid[] = {0.01, 0.1, 1.0, 10.0, 100.0};
  for (std::uint64_t rep = 0; rep < 300; ++rep) {
    const ReplicationCoverage rc = run_coverage_replication(config, rep, grid);
    for (std::size_t g = 1; g < rc.thinned.size(); ++g) {
      CHECK(rc.thinned[g] <= rc.thinned[g - 1]);
      CHECK(rc.lower_bound[g] <= rc.lower_bound[g - 1]);
    }
    // More interferers can only hurt: the everyone-transmits indicator never
    // exceeds the paired-activity one on the same realization.
    for (std::size_t g = 0; g < rc.thinned.size(); ++g)
      CHECK(rc.lower_bound[g] <= rc.thinned[g]);
  }
}

TEST_CASE("aggregation equals a direct sum over replications") {
  SimConfig config = base_config(5e-5, 22);
  config.replications = 400;
  const double grid[] = {0.5, 2.0};
  const CoverageRun run = simulate_coverage_run(config, grid);

  std::uint64_t counts[2] = {0, 0};
  std::uint64_t counts_lb[2] = {0, 0};
  for (std::uint64_t rep = 0; rep < 400; ++rep) {
    const ReplicationCoverage rc = run_coverage_replication(config, rep, grid);
    for (int g = 0; g < 2; ++g) {
      counts[g] += rc.thinned[g];
      counts_lb[g] += rc.lower_bound[g];
    }
  }
  for (int g = 0; g < 2; ++g) {
    CHECK(run.thinned[g].coverage == static_cast<double>(counts[g]) / 400.0);
    CHECK(run.lower_bound[g].coverage ==
          static_cast<double>(counts_lb[g]) / 400.0);
    const double p = run.thinned[g].coverage;
    CHECK(run.thinned[g].half_width_95 ==
          doctest::Approx(1.96 * std::sqrt(p * (1.0 - p) / 400.0))
              .epsilon(1e-15));
    CHECK(run.thinned[g].gamma == grid[g]);
  }
}

TEST_CASE("extending a run preserves the earlier replications") {
  SimConfig config = base_config(5e-5, 23);
  config.replications = 200;
  const double grid[] = {1.0};
  const double short_cov = simulate_coverage_run(config, grid).thinned[0].coverage;

  config.replications = 400;
  const CoverageRun long_run = simulate_coverage_run(config, grid);
  std::uint64_t first_half = 0;
  for (std::uint64_t rep = 0; rep < 200; ++rep)
    first_half += run_coverage_replication(config, rep, grid).thinned[0];
  CHECK(static_cast<double>(first_half) / 200.0 == short_cov);
  CHECK(long_run.thinned[0].replications == 400);
}

TEST_CASE("results are independent of the worker count") {
  SimConfig config = base_config(1e-4, 24);
  config.replications = 600;
  const double grid[] = {0.1, 1.0, 10.0};

  config.workers = 1;
  const CoverageRun serial = simulate_coverage_run(config, grid);
  config.workers = 4;
  const CoverageRun parallel = simulate_coverage_run(config, grid);
  config.workers = 0;  // hardware concurrency
  const CoverageRun hw = simulate_coverage_run(config, grid);

  for (std::size_t g = 0; g < 3; ++g) {
    CHECK(serial.thinned[g].coverage == parallel.thinned[g].coverage);
    CHECK(serial.lower_bound[g].coverage == parallel.lower_bound[g].coverage);
    CHECK(serial.thinned[g].coverage == hw.thinned[g].coverage);
    CHECK(serial.lower_bound[g].coverage == hw.lower_bound[g].coverage);
  }
}

TEST_CASE("low-density simulation tracks the closed form") {
  SimConfig config = base_config(2.5e-5, 25);
  const double grid[] = {1.0};  // 0 dB
  const CoverageRun run = simulate_coverage_run(config, grid);
  const double analytic = coverage_alpha4(1.0, config.model);
  const double analytic_lb = coverage_lower_bound(1.0, config.model);
  CHECK(std::fabs(run.thinned[0].coverage - analytic) < 0.05);
  CHECK(std::fabs(run.lower_bound[0].coverage - analytic_lb) < 0.05);
}

TEST_CASE("high-density in-cell simulation exceeds the closed form") {
  // With the interferer field truncated at the cell boundary, the unbounded
  // integral of the closed form overstates interference; the gap grows with
  // density and passes 0.05 by lambda = 1e-4.
  SimConfig config = base_config(1e-4, 26);
  config.replications = 6000;
  const double grid[] = {1.0};
  const CoverageRun run = simulate_coverage_run(config, grid);
  const double analytic = coverage_alpha4(1.0, config.model);
  CHECK(run.thinned[0].coverage - analytic > 0.05);
}

TEST_CASE("enlarging the interferer field lowers coverage toward the form") {
  const double grid[] = {1.0};
  SimConfig config = base_config(1e-4, 27);

  const double in_cell = simulate_coverage_run(config, grid).thinned[0].coverage;
  config.sim_radius = 1500.0;
  const double wide = simulate_coverage_run(config, grid).thinned[0].coverage;
  const double analytic = coverage_alpha4(1.0, config.model);

  CHECK(wide < in_cell);
  CHECK(std::fabs(wide - analytic) < std::fabs(in_cell - analytic));
}

TEST_CASE("one-transmitter-per-pair thins the field and raises coverage") {
  const double grid[] = {1.0};
  SimConfig config = base_config(1e-4, 28);
  const double both = simulate_coverage_run(config, grid).thinned[0].coverage;
  config.interferer_policy = InterfererPolicy::kTransmitters;
  const double single = simulate_coverage_run(config, grid).thinned[0].coverage;
  CHECK(single > both + 0.02);
}

TEST_CASE("gain metrics") {
  const CoverageGain zero = coverage_gain(0.5, 0.5);
  CHECK(zero.points == 0.0);
  CHECK(zero.ratio_pct == 0.0);

  const CoverageGain full = coverage_gain(1.0, 0.0);
  CHECK(full.points == 100.0);
  CHECK(std::isnan(full.ratio_pct));

  // Frozen analytic pair at lambda = 5e-5, gamma = -5 dB.
  const CoverageGain g = coverage_gain(0.8172295698704423, 0.5079796688979355);
  CHECK(rel_err(g.points, 30.924990097250674) < 1e-12);
  CHECK(rel_err(g.ratio_pct, 60.878401224880903) < 1e-12);

  const CoverageGain negative = coverage_gain(0.2, 0.4);
  CHECK(negative.points == doctest::Approx(-20.0));
  CHECK(negative.ratio_pct == doctest::Approx(-50.0));
}

TEST_CASE("fitting k recovers a synthetic curve exactly") {
  const std::vector<double> mu = {10.0, 20.0, 30.0, 40.0, 50.0};
  std::vector<double> emp;
  for (double m : mu) emp.push_back(retention_probability(1.3, 2.5e-5, m));
  const double k = fit_retention_k(mu, emp, 2.5e-5);
  CHECK(std::fabs(k - 1.3) < 1e-6);
}

TEST_CASE("fit error handling") {
  const std::vector<double> mu = {10.0, 20.0, 30.0};
  const std::vector<double> flat = {0.0, 0.0, 0.0};
  const std::vector<double> ok = {0.01, 0.03, 0.06};
  CHECK_THROWS_AS(fit_retention_k(mu, flat, 2.5e-5), CalibrationError);
  CHECK_THROWS_AS(fit_retention_k(mu, ok, 0.0), CalibrationError);
  const std::vector<double> short_emp = {0.1};
  CHECK_THROWS_AS(fit_retention_k(mu, short_emp, 2.5e-5), std::invalid_argument);
  CHECK_THROWS_AS(
      fit_retention_k(std::vector<double>{}, std::vector<double>{}, 2.5e-5),
      std::invalid_argument);
}

TEST_CASE("calibration against simulated retention") {
  SimConfig config = base_config(2.5e-5, 29);
  const std::vector<double> mu = {10.0, 20.0, 30.0, 40.0, 50.0};

  const CalibrationResult low = calibrate_k(config, mu, 2500);
  CHECK(low.k > 0.7);
  CHECK(low.k < 0.9);
  CHECK(low.sse >= 0.0);
  CHECK(low.curve.points.size() == mu.size());

  // At high density pairing saturates, the curve flattens away from the
  // exponential family, the fitted k drops and the residuals grow.
  config.model.lambda = 1e-4;
  const CalibrationResult high = calibrate_k(config, mu, 2500);
  CHECK(high.k < low.k);
  CHECK(high.sse > low.sse);
}

TEST_CASE("calibration input validation") {
  SimConfig config = base_config(2.5e-5, 30);
  const std::vector<double> off_range = {60.0, 70.0, 80.0};
  CHECK_THROWS_AS(calibrate_k(config, off_range, 100), std::invalid_argument);
  const std::vector<double> two = {10.0, 20.0};
  CHECK_THROWS_AS(calibrate_k(config, two, 100), std::invalid_argument);

  SimConfig empty = base_config(0.0, 31);
  const std::vector<double> mu = {10.0, 20.0, 30.0};
  CHECK_THROWS_AS(calibrate_k(empty, mu, 50), CalibrationError);
}

TEST_CASE("simulation config validation") {
  const double grid[] = {1.0};
  SimConfig config = base_config(2.5e-5, 32);

  config.replications = 0;
  CHECK_THROWS_AS(simulate_coverage_run(config, grid), std::invalid_argument);

  config = base_config(2.5e-5, 32);
  config.sim_radius = 400.0;  // below the cell radius
  CHECK_THROWS_AS(simulate_coverage_run(config, grid), std::invalid_argument);
  config.sim_radius = 500.0;
  CHECK_NOTHROW(simulate_coverage_run(config, grid));

  config = base_config(2.5e-5, 32);
  config.workers = -1;
  CHECK_THROWS_AS(simulate_coverage_run(config, grid), std::invalid_argument);

  config = base_config(2.5e-5, 32);
  const double bad_grid[] = {1.0, -0.5};
  CHECK_THROWS_AS(simulate_coverage_run(config, bad_grid), std::invalid_argument);
}
