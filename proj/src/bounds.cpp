#include "gesim/bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gesim/error.hpp"

namespace gesim {

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double p_g_bound(double snr_threshold) {
  if (snr_threshold < 0.0) throw DomainError("SNR threshold must be non-negative");
  return q_function(std::sqrt(2.0 * snr_threshold));
}

double distortion_bound(double nu, double p_good) {
  if (nu < 0.0 || nu > 1.0 || p_good < 0.0 || p_good > 1.0) throw DomainError("nu and p_G must lie in [0, 1]");
  return nu * p_good + (1.0 - nu) * 0.5;
}

DistortionModel make_distortion_model(double d_hat, double snr_threshold, double nu) {
  DistortionModel m;
  m.d_hat = d_hat;
  m.snr_threshold = snr_threshold;
  m.p_g_bound = p_g_bound(snr_threshold);
  m.nu = nu;
  m.d_u = distortion_bound(nu, m.p_g_bound);
  m.meets_threshold = m.p_g_bound <= d_hat;
  return m;
}

double single_sensor_coverage(const ChannelParams& params, std::size_t n_bits) {
  if (n_bits == 0) throw DomainError("M must be at least 1");
  return steady_state(params) * std::pow(1.0 - params.epsilon, static_cast<double>(n_bits - 1));
}

double fk1_closed_form(std::span<const ChannelParams> params, std::size_t n_bits) {
  if (params.empty()) throw DomainError("need at least one sensor");
  double none = 1.0;
  for (const auto& p : params) none *= 1.0 - single_sensor_coverage(p, n_bits);
  return 1.0 - none;
}

double ek_upper_bound(std::span<const ChannelParams> params, std::size_t n_bits) {
  const double n = static_cast<double>(params.size());
  return n - (n - 1.0) * fk1_closed_form(params, n_bits);
}

double ek_upper_bound(const ChannelParams& params, std::size_t n_bits, std::size_t n_sensors) {
  if (n_sensors == 0) throw DomainError("need at least one sensor");
  const std::vector<ChannelParams> all(n_sensors, params);
  return ek_upper_bound(all, n_bits);
}

std::size_t n_zero(double mu, double epsilon, std::size_t n_bits) {
  ChannelParams p;
  p.mu = mu;
  p.epsilon = epsilon;
  const double x = single_sensor_coverage(p, n_bits);
  if (!(x > 0.0)) throw DomainError("single-sensor coverage probability is zero; N0 undefined");
  if (x >= 1.0) return 2;  // limit as x -> 1
  const double v = 1.0 + 1.0 / -std::log1p(-x);
  const double nearest = std::round(v);
  const double c = (v > nearest && v - nearest <= 1e-9) ? nearest : std::ceil(v);
  return static_cast<std::size_t>(c);
}

double eta(std::size_t n_sensors, double rho_bar, double ek) {
  if (rho_bar < 0.0) throw DomainError("rho_bar must be non-negative");
  if (ek <= 0.0 && rho_bar <= 0.0) throw DomainError("rho_bar + E[K] must be positive");
  return static_cast<double>(n_sensors) / (rho_bar + ek);
}

EfficiencyReport efficiency(std::size_t n_sensors, std::size_t n_bits, double rho_bar, double ek) {
  EfficiencyReport r;
  r.rho_bar = rho_bar;
  r.ek = ek;
  r.b1 = static_cast<double>(n_bits) * static_cast<double>(n_sensors);
  r.eb2 = static_cast<double>(n_bits) * (rho_bar + ek);
  r.eta = eta(n_sensors, rho_bar, ek);
  return r;
}

BoundsResult evaluate_bounds(const ChannelParams& params, std::size_t n_bits, std::size_t n_sensors, double rho_bar) {
  BoundsResult r;
  r.x = single_sensor_coverage(params, n_bits);
  const std::vector<ChannelParams> all(n_sensors, params);
  r.fk1 = fk1_closed_form(all, n_bits);
  r.ek_upper = ek_upper_bound(all, n_bits);
  r.n0 = n_zero(params.mu, params.epsilon, n_bits);
  r.eta_lower = eta(n_sensors, rho_bar, r.ek_upper);
  return r;
}

}  // namespace gesim
