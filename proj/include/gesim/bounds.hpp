#pragma once

// Closed-form quantities: single-sensor coverage, F_K(1), the E[K] upper
// bound N - (N-1) F_K(1), the size N0 beyond which that bound is
// non-increasing, the efficiency factor, and the distortion bounds.
//
// The Good-state crossover can be written as an average of the BPSK bit error
// rate P_b(lambda) = Q(sqrt(2 lambda)) over the instantaneous SNR lambda,
// conditioned on lambda exceeding the quantization threshold lambda_t. Since
// P_b decreases in lambda, p_G <= Q(sqrt(2 lambda_t)); only that bound is
// computed here, not the conditional integral.

#include <cstddef>
#include <optional>
#include <span>

#include "gesim/gechannel.hpp"

namespace gesim {

/// Gaussian tail probability, 0.5 * erfc(x / sqrt(2)).
double q_function(double x);

/// Q(sqrt(2 lambda_t)); lambda_t >= 0 is the linear SNR threshold.
double p_g_bound(double snr_threshold);

/// nu * p_G + (1 - nu) / 2.
double distortion_bound(double nu, double p_good);

struct DistortionModel {
  double d_hat = 0.0;          ///< tolerable distortion
  double snr_threshold = 0.0;  ///< lambda_t
  double p_g_bound = 0.5;      ///< Q(sqrt(2 lambda_t))
  double nu = 0.0;             ///< probability that a covering subset exists
  double d_u = 0.5;            ///< distortion upper bound
  bool meets_threshold = false;  ///< p_g_bound <= d_hat
};

/// Builds the model with p_G taken at its upper bound.
DistortionModel make_distortion_model(double d_hat, double snr_threshold, double nu);

/// (mu/(mu+eps)) (1-eps)^(M-1): probability that one sensor is Good for all M bits.
double single_sensor_coverage(const ChannelParams& params, std::size_t n_bits);

/// F_K(1) = 1 - prod_n (1 - single_sensor_coverage_n).
double fk1_closed_form(std::span<const ChannelParams> params, std::size_t n_bits);

/// N - (N-1) F_K(1) with N = params.size().
double ek_upper_bound(std::span<const ChannelParams> params, std::size_t n_bits);
/// Identical channels.
double ek_upper_bound(const ChannelParams& params, std::size_t n_bits, std::size_t n_sensors);

/// ceil(1 + 1/ln(1/(1-x))) for identical channels, x = single_sensor_coverage.
/// Applies to the E[K] bound's monotonicity, not to the exact E[K]. Values
/// within 1e-9 above an integer round down to it. Throws DomainError for x == 0.
std::size_t n_zero(double mu, double epsilon, std::size_t n_bits);

/// N / (rho_bar + E[K]).
double eta(std::size_t n_sensors, double rho_bar, double ek);

struct EfficiencyReport {
  double rho_bar = 0.0;
  double ek = 0.0;
  double b1 = 0.0;   ///< M N
  double eb2 = 0.0;  ///< M (rho_bar + E[K])
  double eta = 0.0;
};

EfficiencyReport efficiency(std::size_t n_sensors, std::size_t n_bits, double rho_bar, double ek);

struct BoundsResult {
  double x = 0.0;
  double fk1 = 0.0;
  double ek_upper = 0.0;
  std::size_t n0 = 0;
  double eta_lower = 0.0;  ///< N / (rho_bar + ek_upper)
};

/// All bounds for N identical channels.
BoundsResult evaluate_bounds(const ChannelParams& params, std::size_t n_bits, std::size_t n_sensors, double rho_bar);

}  // namespace gesim
