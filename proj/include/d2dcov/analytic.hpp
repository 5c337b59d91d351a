#pragma once

#include <stdexcept>

namespace d2dcov {

/// Model parameters shared by the closed-form expressions and the simulator.
/// Linear units throughout: meters, watts, points per square meter; the SIR
/// threshold is a linear power ratio. Unit conversion happens at the CLI
/// boundary only.
struct ModelParams {
  double cell_radius = 500.0;       // R, outer cell radius [m]
  double inner_radius = 1.0;        // R0, base-station exclusion radius [m]
  double lambda = 2.5e-5;           // candidate-node density [1/m^2]
  double mu = 50.0;                 // maximum pairing distance [m]
  double k = 0.8;                   // retention tuning factor
  double alpha = 4.0;               // path-loss exponent
  double p_c = 0.1;                 // cell-user transmit power [W]
  double p_i = 0.0002;              // device transmit power [W]

  void validate() const {
    if (!(cell_radius > inner_radius) || !(inner_radius >= 0.0))
      throw std::invalid_argument("ModelParams: require 0 <= R0 < R");
    if (!(lambda >= 0.0)) throw std::invalid_argument("ModelParams: lambda < 0");
    if (!(mu >= 0.0)) throw std::invalid_argument("ModelParams: mu < 0");
    if (!(k >= 0.0)) throw std::invalid_argument("ModelParams: k < 0");
    if (!(alpha > 2.0))
      throw std::invalid_argument("ModelParams: alpha must exceed 2");
    if (!(p_c > 0.0) || !(p_i > 0.0))
      throw std::invalid_argument("ModelParams: powers must be positive");
  }
};

/// Probability that a candidate node finds a partner within distance mu:
///   p = 1 - exp(-k pi lambda mu^2).
double retention_probability(double k, double lambda, double mu);

/// The constant pi / (alpha sin(2 pi / alpha)), equal to the integral of
/// u / (1 + u^alpha) over [0, inf). Requires alpha > 2.
double sinc_constant(double alpha);

/// Same constant evaluated by adaptive quadrature of the defining integral;
/// independent verification route for sinc_constant.
double sinc_constant_quadrature(double alpha);

/// Laplace transform of the aggregate interference from a field of
/// transmitters of density lambda_tx and power p_i under Rayleigh fading,
/// evaluated at s (closed form, exclusion radius taken to zero):
///   exp(-2 pi lambda_tx s^{2/alpha} p_i^{2/alpha} sinc_constant(alpha)).
double interference_laplace(double s, double lambda_tx, const ModelParams& params);

/// Same transform with the field restricted to [R0, inf), by quadrature;
/// verification route for interference_laplace (the closed form drops R0).
double interference_laplace_quadrature(double s, double lambda_tx,
                                       const ModelParams& params);

/// Coverage probability of the cell user at SIR threshold gamma (linear),
/// averaged over its uniform position on the annulus, for general alpha > 2:
///   (exp(-c R0^2) - exp(-c R^2)) / (c R^2),
/// with c = 2 pi lambda_ret sinc_constant(alpha) (gamma p_i / p_c)^{2/alpha}
/// and lambda_ret = lambda * retention_probability(k, lambda, mu).
double coverage_general(double gamma, const ModelParams& params);

/// coverage_general with the position average done by quadrature instead of
/// the closed form; verification route.
double coverage_general_quadrature(double gamma, const ModelParams& params);

/// coverage_general with every candidate node transmitting (retention
/// probability replaced by one); general-alpha companion of
/// coverage_lower_bound.
double coverage_general_lower_bound(double gamma, const ModelParams& params);

/// Closed form specialized to alpha = 4 with R0 terms dropped:
///   (1 - exp(-A)) / A,
///   A = (pi^2 R^2 lambda / 2) sqrt(gamma p_i / p_c) (1 - exp(-k pi lambda mu^2)).
/// Throws if params.alpha != 4.
double coverage_alpha4(double gamma, const ModelParams& params);

/// Lower bound: coverage_alpha4 with every candidate node transmitting
/// (retention probability replaced by one). Throws if params.alpha != 4.
double coverage_lower_bound(double gamma, const ModelParams& params);

}  // namespace d2dcov
