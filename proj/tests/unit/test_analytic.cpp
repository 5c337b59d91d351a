#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "d2dcov/analytic.hpp"
#include "d2dcov/rng.hpp"

using namespace d2dcov;

namespace {

// Reference values computed independently with 50-digit arithmetic.
constexpr double kRetentionLow = 0.14536400084676657;   // k=0.8, l=2.5e-5, mu=50
constexpr double kRetentionHigh = 0.4665119089088967;   // k=0.8, l=1e-4,  mu=50
constexpr double kCovThinned0dB = 0.7054500551707376;   // l=5e-5, gamma=1
constexpr double kCovBound0dB = 0.3395233040139975;
constexpr double kCovThinnedM5dB = 0.8172295698704423;  // gamma = 10^-0.5
constexpr double kCovBoundM5dB = 0.5079796688979355;
constexpr double kCovGeneralR0 = 0.7054460551766874;    // same case, R0 = 1 kept
constexpr double kLaplaceClosed = 0.9999990592589386;   // s=1, thinned density
constexpr double kLaplaceQuadR0 = 0.9999999915309154;

ModelParams reference_model() {
  ModelParams m;  // defaults: R=500, R0=1, k=0.8, alpha=4, p_c=0.1, p_i=2e-4
  m.lambda = 5e-5;
  return m;
}

double rel_err(double value, double reference) {
  return std::fabs(value - reference) / std::fabs(reference);
}

}  // namespace

TEST_CASE("retention probability matches the closed form") {
  CHECK(rel_err(retention_probability(0.8, 2.5e-5, 50.0), kRetentionLow) < 1e-12);
  CHECK(rel_err(retention_probability(0.8, 1e-4, 50.0), kRetentionHigh) < 1e-12);
  CHECK(retention_probability(0.8, 0.0, 50.0) == 0.0);
  CHECK(retention_probability(0.8, 2.5e-5, 0.0) == 0.0);
  CHECK(retention_probability(0.0, 2.5e-5, 50.0) == 0.0);
  CHECK(retention_probability(100.0, 1.0, 100.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(retention_probability(-0.1, 2.5e-5, 50.0), std::invalid_argument);
  CHECK_THROWS_AS(retention_probability(0.8, -1.0, 50.0), std::invalid_argument);
  CHECK_THROWS_AS(retention_probability(0.8, 2.5e-5, -5.0), std::invalid_argument);
}

TEST_CASE("retention probability is increasing in each argument") {
  double prev = 0.0;
  for (double mu : {10.0, 20.0, 30.0, 40.0, 50.0}) {
    const double p = retention_probability(0.8, 2.5e-5, mu);
    CHECK(p > prev);
    prev = p;
  }
  CHECK(retention_probability(0.8, 5e-5, 50.0) >
        retention_probability(0.8, 2.5e-5, 50.0));
  CHECK(retention_probability(1.0, 2.5e-5, 50.0) >
        retention_probability(0.8, 2.5e-5, 50.0));
}

TEST_CASE("path-loss constant: closed form values") {
  CHECK(rel_err(sinc_constant(2.5), 2.1379186642311902) < 1e-12);
  CHECK(rel_err(sinc_constant(3.0), 1.2091995761561452) < 1e-12);
  CHECK(rel_err(sinc_constant(3.5), 0.9206813035200634) < 1e-12);
  CHECK(rel_err(sinc_constant(4.0), M_PI / 4.0) < 1e-15);
  CHECK(rel_err(sinc_constant(5.0), 0.6606531998388248) < 1e-12);
  CHECK(rel_err(sinc_constant(6.0), 0.6045997880780726) < 1e-12);
  CHECK_THROWS_AS(sinc_constant(2.0), std::domain_error);
  CHECK_THROWS_AS(sinc_constant(1.5), std::domain_error);
}

TEST_CASE("path-loss constant: quadrature agrees with the closed form") {
  for (double alpha : {2.5, 3.0, 3.5, 4.0, 5.0, 6.0})
    CHECK(rel_err(sinc_constant_quadrature(alpha), sinc_constant(alpha)) < 1e-10);
  CHECK_THROWS_AS(sinc_constant_quadrature(2.0), std::domain_error);
}

TEST_CASE("interference transform: closed form and quadrature") {
  const ModelParams m = reference_model();
  const double lambda_tx =
      m.lambda * retention_probability(m.k, m.lambda, m.mu);

  const double closed = interference_laplace(1.0, lambda_tx, m);
  CHECK(rel_err(closed, kLaplaceClosed) < 1e-12);

  const double quad = interference_laplace_quadrature(1.0, lambda_tx, m);
  CHECK(rel_err(quad, kLaplaceQuadR0) < 1e-10);

  // The exclusion radius removes negligible interference mass at these
  // scales, so the two routes agree to well under a part per million.
  CHECK(rel_err(quad, closed) < 1e-6);

  CHECK(interference_laplace(0.0, lambda_tx, m) == 1.0);
  CHECK(interference_laplace(1.0, 0.0, m) == 1.0);
  CHECK(interference_laplace_quadrature(0.0, lambda_tx, m) == 1.0);
  CHECK_THROWS_AS(interference_laplace(-1.0, lambda_tx, m), std::invalid_argument);
  CHECK_THROWS_AS(interference_laplace(1.0, -1e-6, m), std::invalid_argument);
}

TEST_CASE("interference transform: quadrature tracks closed form across alpha") {
  ModelParams m = reference_model();
  m.inner_radius = 0.01;  // near-zero exclusion: routes must coincide closely
  for (double alpha : {2.5, 3.0, 4.0, 5.0}) {
    m.alpha = alpha;
    for (double s : {0.05, 1.0, 20.0}) {
      const double closed = interference_laplace(s, 1e-5, m);
      const double quad = interference_laplace_quadrature(s, 1e-5, m);
      CHECK(rel_err(quad, closed) < 1e-4);
    }
  }
}

TEST_CASE("coverage closed form, alpha = 4") {
  const ModelParams m = reference_model();
  CHECK(rel_err(coverage_alpha4(1.0, m), kCovThinned0dB) < 1e-12);
  CHECK(rel_err(coverage_lower_bound(1.0, m), kCovBound0dB) < 1e-12);

  const double gamma_m5 = std::pow(10.0, -0.5);
  CHECK(rel_err(coverage_alpha4(gamma_m5, m), kCovThinnedM5dB) < 1e-12);
  CHECK(rel_err(coverage_lower_bound(gamma_m5, m), kCovBoundM5dB) < 1e-12);
}

TEST_CASE("coverage closed form, general alpha, matches frozen value") {
  const ModelParams m = reference_model();
  CHECK(rel_err(coverage_general(1.0, m), kCovGeneralR0) < 1e-12);
}

TEST_CASE("general closed form agrees with quadrature") {
  ModelParams m = reference_model();
  for (double alpha : {2.5, 3.0, 4.0, 5.0}) {
    m.alpha = alpha;
    for (double gamma : {0.1, 1.0, 10.0, 100.0}) {
      CHECK(rel_err(coverage_general_quadrature(gamma, m),
                    coverage_general(gamma, m)) < 1e-9);
    }
  }
}

TEST_CASE("general form specializes to the alpha=4 expression as R0 -> 0") {
  RngStream rng(300);
  for (int i = 0; i < 100; ++i) {
    ModelParams m;
    m.cell_radius = rng.uniform(100.0, 1000.0);
    m.inner_radius = 0.0;
    m.lambda = rng.uniform(1e-6, 2e-4);
    m.mu = rng.uniform(5.0, 100.0);
    m.k = rng.uniform(0.2, 2.0);
    m.alpha = 4.0;
    m.p_c = rng.uniform(0.01, 1.0);
    m.p_i = rng.uniform(1e-5, 1e-2);
    const double gamma = rng.uniform(0.01, 100.0);
    CHECK(rel_err(coverage_general(gamma, m), coverage_alpha4(gamma, m)) < 1e-12);
    CHECK(rel_err(coverage_general_lower_bound(gamma, m),
                  coverage_lower_bound(gamma, m)) < 1e-12);
  }
}

TEST_CASE("degenerate limits") {
  ModelParams m = reference_model();

  SUBCASE("zero density leaves the user interference-free") {
    m.lambda = 0.0;
    CHECK(coverage_alpha4(1.0, m) == 1.0);
    CHECK(coverage_lower_bound(1.0, m) == 1.0);
    // The general form keeps the finite exclusion disc in the average.
    CHECK(coverage_general(1.0, m) == doctest::Approx(0.999996).epsilon(1e-12));
  }

  SUBCASE("zero threshold is always met") {
    CHECK(coverage_alpha4(0.0, m) == 1.0);
    CHECK(coverage_lower_bound(0.0, m) == 1.0);
    CHECK(coverage_general(0.0, m) == doctest::Approx(0.999996).epsilon(1e-12));
  }

  SUBCASE("huge threshold drives coverage to zero") {
    CHECK(coverage_alpha4(1e12, m) < 1e-3);
    CHECK(coverage_alpha4(1e12, m) > 0.0);
  }
}

TEST_CASE("coverage orderings and monotonicity") {
  const ModelParams base = reference_model();

  double prev = 1.0;
  for (double gamma : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    const double cov = coverage_alpha4(gamma, base);
    const double lb = coverage_lower_bound(gamma, base);
    CHECK(cov < prev);        // strictly decreasing in the threshold
    CHECK(cov > lb);          // thinning always helps
    CHECK(lb > 0.0);
    CHECK(cov < 1.0);
    prev = cov;
  }

  ModelParams m = base;
  m.lambda = 1e-4;
  CHECK(coverage_alpha4(1.0, m) < coverage_alpha4(1.0, base));  // denser is worse
  m = base;
  m.p_i = 4e-4;
  CHECK(coverage_alpha4(1.0, m) < coverage_alpha4(1.0, base));  // louder devices
  m = base;
  m.p_c = 0.2;
  CHECK(coverage_alpha4(1.0, m) > coverage_alpha4(1.0, base));  // stronger signal
  m = base;
  m.mu = 100.0;
  CHECK(coverage_alpha4(1.0, m) < coverage_alpha4(1.0, base));  // more retained
  m = base;
  m.k = 1.2;
  CHECK(coverage_alpha4(1.0, m) < coverage_alpha4(1.0, base));
}

TEST_CASE("coverage depends on powers only through their ratio") {
  ModelParams m = reference_model();
  const double ref = coverage_alpha4(1.0, m);
  const double ref_gen = coverage_general(1.0, m);
  m.p_c *= 10.0;
  m.p_i *= 10.0;
  CHECK(rel_err(coverage_alpha4(1.0, m), ref) < 1e-12);
  CHECK(rel_err(coverage_general(1.0, m), ref_gen) < 1e-12);
}

TEST_CASE("parameter validation") {
  ModelParams m;
  m.alpha = 2.0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  CHECK_THROWS_AS(coverage_general(1.0, m), std::invalid_argument);

  m = ModelParams{};
  m.inner_radius = 600.0;  // exceeds the cell radius
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);

  m = ModelParams{};
  m.lambda = -1e-5;
  CHECK_THROWS_AS(coverage_alpha4(1.0, m), std::invalid_argument);

  m = ModelParams{};
  m.p_c = 0.0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);

  m = ModelParams{};
  m.alpha = 3.0;  // valid model, but outside the specialized form
  CHECK_THROWS_AS(coverage_alpha4(1.0, m), std::domain_error);
  CHECK_THROWS_AS(coverage_lower_bound(1.0, m), std::domain_error);
  CHECK_NOTHROW(coverage_general(1.0, m));

  CHECK_THROWS_AS(coverage_alpha4(-1.0, ModelParams{}), std::invalid_argument);
  CHECK_THROWS_AS(coverage_general(-1.0, ModelParams{}), std::invalid_argument);
}
