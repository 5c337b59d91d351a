#include "d2dcov/analytic.hpp"

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace d2dcov {

namespace {

constexpr double kQuadTolerance = 1e-12;

void require_alpha4(const ModelParams& params, const char* fn) {
  if (params.alpha != 4.0)
    throw std::domain_error(std::string(fn) + ": closed form requires alpha == 4");
}

/// Exponent scale of the conditional coverage exp(-c r^2) for a user at
/// distance r, with the interferer field thinned to density lambda_tx.
double coverage_exponent_scale(double gamma, double lambda_tx,
                               const ModelParams& params) {
  return 2.0 * M_PI * lambda_tx * sinc_constant(params.alpha) *
         std::pow(gamma * params.p_i / params.p_c, 2.0 / params.alpha);
}

/// (exp(-c R0^2) - exp(-c R^2)) / (c R^2), evaluated stably for small c.
double averaged_coverage_closed_form(double c, double inner_radius,
                                     double cell_radius) {
  const double r0sq = inner_radius * inner_radius;
  const double rsq = cell_radius * cell_radius;
  if (c == 0.0) return (rsq - r0sq) / rsq;
  return std::exp(-c * r0sq) * (-std::expm1(-c * (rsq - r0sq))) / (c * rsq);
}

}  // namespace

double retention_probability(double k, double lambda, double mu) {
  if (!(k >= 0.0) || !(lambda >= 0.0) || !(mu >= 0.0))
    throw std::invalid_argument("retention_probability: negative argument");
  return -std::expm1(-k * M_PI * lambda * mu * mu);
}

double sinc_constant(double alpha) {
  if (!(alpha > 2.0))
    throw std::domain_error("sinc_constant: integral diverges for alpha <= 2");
  return M_PI / (alpha * std::sin(2.0 * M_PI / alpha));
}

double sinc_constant_quadrature(double alpha) {
  if (!(alpha > 2.0))
    throw std::domain_error("sinc_constant_quadrature: requires alpha > 2");
  boost::math::quadrature::tanh_sinh<double> integrator;
  // Head on [0, 1]; tail via u -> 1/u, giving an integrable endpoint
  // singularity at 0 when alpha < 3.
  const double head = integrator.integrate(
      [alpha](double u) { return u / (1.0 + std::pow(u, alpha)); }, 0.0, 1.0,
      kQuadTolerance);
  const double tail = integrator.integrate(
      [alpha](double v) {
        return std::pow(v, alpha - 3.0) / (1.0 + std::pow(v, alpha));
      },
      0.0, 1.0, kQuadTolerance);
  return head + tail;
}

double interference_laplace(double s, double lambda_tx,
                            const ModelParams& params) {
  params.validate();
  if (!(s >= 0.0)) throw std::invalid_argument("interference_laplace: s < 0");
  if (!(lambda_tx >= 0.0))
    throw std::invalid_argument("interference_laplace: lambda_tx < 0");
  if (s == 0.0 || lambda_tx == 0.0) return 1.0;
  const double exponent =
      2.0 * M_PI * lambda_tx * sinc_constant(params.alpha) *
      std::pow(s * params.p_i, 2.0 / params.alpha);
  return std::exp(-exponent);
}

double interference_laplace_quadrature(double s, double lambda_tx,
                                       const ModelParams& params) {
  params.validate();
  if (!(s >= 0.0)) throw std::invalid_argument("interference_laplace: s < 0");
  if (!(lambda_tx >= 0.0))
    throw std::invalid_argument("interference_laplace: lambda_tx < 0");
  if (s == 0.0 || lambda_tx == 0.0) return 1.0;

  // Exponent = 2 pi lambda_tx * integral over [R0, inf) of x / (1 + x^a / c),
  // c = s p_i. Split at the interference length scale c^{1/a}; map the tail
  // onto (0, 1] with u = x_split / x.
  const double c = s * params.p_i;
  const double alpha = params.alpha;
  const double split = std::max(params.inner_radius, std::pow(c, 1.0 / alpha));
  boost::math::quadrature::tanh_sinh<double> integrator;

  double head = 0.0;
  if (split > params.inner_radius) {
    head = integrator.integrate(
        [c, alpha](double x) { return x / (1.0 + std::pow(x, alpha) / c); },
        params.inner_radius, split, kQuadTolerance);
  }
  const double split_pow = std::pow(split, alpha);
  const double tail =
      split * split * c *
      integrator.integrate(
          [c, alpha, split_pow](double u) {
            return std::pow(u, alpha - 3.0) / (c * std::pow(u, alpha) + split_pow);
          },
          0.0, 1.0, kQuadTolerance);

  return std::exp(-2.0 * M_PI * lambda_tx * (head + tail));
}

double coverage_general(double gamma, const ModelParams& params) {
  params.validate();
  if (!(gamma >= 0.0)) throw std::invalid_argument("coverage_general: gamma < 0");
  const double lambda_ret =
      params.lambda * retention_probability(params.k, params.lambda, params.mu);
  const double c = coverage_exponent_scale(gamma, lambda_ret, params);
  return averaged_coverage_closed_form(c, params.inner_radius, params.cell_radius);
}

double coverage_general_quadrature(double gamma, const ModelParams& params) {
  params.validate();
  if (!(gamma >= 0.0)) throw std::invalid_argument("coverage_general: gamma < 0");
  const double lambda_ret =
      params.lambda * retention_probability(params.k, params.lambda, params.mu);
  const double c = coverage_exponent_scale(gamma, lambda_ret, params);
  const double rsq = params.cell_radius * params.cell_radius;
  // Conditional coverage exp(-c r^2) against the radial density 2r / R^2.
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [c, rsq](double r) { return std::exp(-c * r * r) * 2.0 * r / rsq; },
      params.inner_radius, params.cell_radius, 15, kQuadTolerance);
}

double coverage_general_lower_bound(double gamma, const ModelParams& params) {
  params.validate();
  if (!(gamma >= 0.0))
    throw std::invalid_argument("coverage_general_lower_bound: gamma < 0");
  const double c = coverage_exponent_scale(gamma, params.lambda, params);
  return averaged_coverage_closed_form(c, params.inner_radius, params.cell_radius);
}

double coverage_alpha4(double gamma, const ModelParams& params) {
  params.validate();
  require_alpha4(params, "coverage_alpha4");
  if (!(gamma >= 0.0)) throw std::invalid_argument("coverage_alpha4: gamma < 0");
  const double retention =
      retention_probability(params.k, params.lambda, params.mu);
  const double a = 0.5 * M_PI * M_PI * params.cell_radius * params.cell_radius *
                   params.lambda * std::sqrt(gamma * params.p_i / params.p_c) *
                   retention;
  if (a == 0.0) return 1.0;
  return -std::expm1(-a) / a;
}

double coverage_lower_bound(double gamma, const ModelParams& params) {
  params.validate();
  require_alpha4(params, "coverage_lower_bound");
  if (!(gamma >= 0.0))
    throw std::invalid_argument("coverage_lower_bound: gamma < 0");
  const double a = 0.5 * M_PI * M_PI * params.cell_radius * params.cell_radius *
                   params.lambda * std::sqrt(gamma * params.p_i / params.p_c);
  if (a == 0.0) return 1.0;
  return -std::expm1(-a) / a;
}

}  // namespace d2dcov
