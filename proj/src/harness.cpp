#include "gesim/harness.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

#include "gesim/csicodec.hpp"
#include "gesim/error.hpp"
#include "gesim/kernels.hpp"
#include "gesim/parallel.hpp"
#include "gesim/rng.hpp"

namespace gesim {

void ExperimentConfig::validate() const {
  if (n_sensors == 0) throw ConfigError("experiment needs at least one sensor");
  if (n_bits == 0) throw ConfigError("experiment needs M >= 1");
  if (trials == 0) throw ConfigError("experiment needs at least one trial");
  if (channels.size() != 1 && channels.size() != n_sensors) {
    throw ConfigError("channel parameters must be shared (one entry) or given per sensor");
  }
  for (const auto& c : channels) c.validate();
  if (!(distortion_threshold >= 0.0 && distortion_threshold <= 0.5)) {
    throw ConfigError("distortion threshold must lie in [0, 0.5]");
  }
}

std::vector<ChannelParams> ExperimentConfig::per_sensor() const {
  if (channels.size() == n_sensors) return channels;
  return std::vector<ChannelParams>(n_sensors, channels.at(0));
}

namespace {

BitVector random_source(std::size_t n_bits, std::uint64_t seed) {
  SplitMix64 gen(seed);
  BitVector bits(n_bits);
  for (auto& w : bits.words()) w = gen();
  bits.trim();
  return bits;
}

std::uint64_t noise_seed(std::uint64_t trial_seed, std::size_t sensor) {
  return derive_seed(derive_seed(trial_seed, stream::kNoise), sensor);
}

Estimate mean_and_error(double sum, double sum_sq, std::size_t n) {
  Estimate e;
  const double nn = static_cast<double>(n);
  e.mean = sum / nn;
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - nn * e.mean * e.mean) / (nn - 1.0));
    e.std_error = std::sqrt(var / nn);
  }
  return e;
}

}  // namespace

TrialChannels simulate_channels(const ExperimentConfig& config, std::uint64_t trial_index) {
  const auto params = config.per_sensor();
  const std::uint64_t trial_seed = derive_seed(config.master_seed, trial_index);
  TrialChannels t;
  t.source = random_source(config.n_bits, derive_seed(trial_seed, stream::kSource));
  t.csi = generate_csi(params, config.n_bits, derive_seed(trial_seed, stream::kStates));
  t.observations.reserve(params.size());
  for (std::size_t n = 0; n < params.size(); ++n) {
    t.observations.push_back(transmit(t.source, t.csi.row(n), params[n], noise_seed(trial_seed, n)));
  }
  return t;
}

BitVector reconstruct(const TrialChannels& channels, const std::vector<std::size_t>& sensors) {
  const std::size_t m_bits = channels.source.size();
  BitVector out(m_bits);
  for (std::size_t m = 0; m < m_bits; ++m) {
    std::size_t good_total = 0, good_ones = 0, all_ones = 0;
    for (std::size_t n : sensors) {
      const bool bit = channels.observations[n].test(m);
      all_ones += bit;
      if (channels.csi.good(n, m)) {
        ++good_total;
        good_ones += bit;
      }
    }
    const bool decoded = good_total > 0 ? 2 * good_ones > good_total : 2 * all_ones > sensors.size();
    if (decoded) out.set(m);
  }
  return out;
}

TrialOutcome run_trial(const ExperimentConfig& config, std::uint64_t trial_index) {
  const auto params = config.per_sensor();
  const std::size_t n_bits = config.n_bits;
  const std::uint64_t trial_seed = derive_seed(config.master_seed, trial_index);

  TrialChannels t;
  t.source = random_source(n_bits, derive_seed(trial_seed, stream::kSource));
  t.csi = generate_csi(params, n_bits, derive_seed(trial_seed, stream::kStates));

  TrialOutcome out;
  // Phase one: every sensor sends its run-length coded CSI; the FC decodes.
  std::vector<BitVector> decoded_rows;
  decoded_rows.reserve(params.size());
  for (const auto& row : t.csi.rows()) {
    const auto code = encode(row);
    out.bits_sent_phase1 += code.encoded_bits.size();
    decoded_rows.push_back(decode(code.encoded_bits, n_bits));
  }
  const CsiMatrix fc_view(std::move(decoded_rows));
  if (!(fc_view == t.csi)) throw std::logic_error("run-length round trip altered the CSI");

  const auto selection = select_min_subset(fc_view, config.selection);
  const auto chosen = selection.subset.indices();
  out.selected_k = chosen.size();
  out.forced = selection.forced_all;
  out.covered = selection.covered;
  out.bits_sent_phase2 = out.selected_k * n_bits;

  // Phase two: only the selected sensors forward their observations.
  t.observations.assign(params.size(), BitVector());
  for (std::size_t n : chosen) {
    t.observations[n] = transmit(t.source, t.csi.row(n), params[n], noise_seed(trial_seed, n));
  }
  const auto estimate = reconstruct(t, chosen);
  out.hamming_distortion = static_cast<double>(kernels::hamming_distance(estimate.words(), t.source.words())) /
                           static_cast<double>(n_bits);
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config, bool keep_outcomes) {
  config.validate();
  const std::size_t trials = config.trials;
  const std::size_t n = config.n_sensors;
  const std::size_t m = config.n_bits;

  std::vector<TrialOutcome> outcomes(trials);
  parallel_for(trials, resolve_thread_count(config.threads),
               [&](std::size_t i) { outcomes[i] = run_trial(config, i); });

  ExperimentReport r;
  r.n_sensors = n;
  r.n_bits = m;
  r.trials = trials;
  r.distortion_threshold = config.distortion_threshold;

  std::vector<std::size_t> covered_at(n + 1, 0);
  double k_sum = 0, k_sq = 0, rho_sum = 0, rho_sq = 0, d_sum = 0, d_sq = 0, cd_sum = 0, cd_sq = 0;
  double b1_sum = 0, b2_sum = 0;
  const double per_sensor_bits = static_cast<double>(n) * static_cast<double>(m);
  for (const auto& o : outcomes) {
    if (!o.forced) ++covered_at[o.selected_k];
    const double k = static_cast<double>(o.selected_k);
    k_sum += k;
    k_sq += k * k;
    const double rho = static_cast<double>(o.bits_sent_phase1) / per_sensor_bits;
    rho_sum += rho;
    rho_sq += rho * rho;
    d_sum += o.hamming_distortion;
    d_sq += o.hamming_distortion * o.hamming_distortion;
    if (o.covered) {
      ++r.covered_trials;
      cd_sum += o.hamming_distortion;
      cd_sq += o.hamming_distortion * o.hamming_distortion;
    }
    b1_sum += static_cast<double>(o.bits_sent_phase1);
    b2_sum += static_cast<double>(o.bits_sent_phase2);
  }

  const double t = static_cast<double>(trials);
  r.raw_cmf.resize(n);
  r.cmf_std_error.resize(n);
  std::size_t running = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    running += covered_at[k];
    const double f = static_cast<double>(running) / t;
    r.raw_cmf[k - 1] = f;
    r.cmf_std_error[k - 1] = std::sqrt(f * (1.0 - f) / t);
  }
  r.cmf = r.raw_cmf;
  r.cmf[n - 1] = 1.0;
  r.pmf.resize(n);
  for (std::size_t k = 1; k <= n; ++k) r.pmf[k - 1] = r.cmf[k - 1] - (k > 1 ? r.cmf[k - 2] : 0.0);

  r.ek = mean_and_error(k_sum, k_sq, trials);
  r.rho_bar = mean_and_error(rho_sum, rho_sq, trials);
  r.distortion = mean_and_error(d_sum, d_sq, trials);
  if (r.covered_trials > 0) r.covered_distortion = mean_and_error(cd_sum, cd_sq, r.covered_trials);
  r.coverage_probability = static_cast<double>(r.covered_trials) / t;
  r.mean_bits_phase1 = b1_sum / t;
  r.mean_bits_phase2 = b2_sum / t;
  r.rho_total = r.mean_bits_phase1 / static_cast<double>(m);
  r.b1 = per_sensor_bits;
  r.eta = static_cast<double>(n) / (r.rho_bar.mean + r.ek.mean);
  r.eta_bits = per_sensor_bits / (r.mean_bits_phase1 + r.mean_bits_phase2);
  if (keep_outcomes) r.outcomes = std::move(outcomes);
  return r;
}

BaselineReport conventional_baseline(const ExperimentConfig& config) {
  config.validate();
  const std::size_t trials = config.trials;
  std::vector<double> distortion(trials);
  std::vector<std::size_t> everyone(config.n_sensors);
  for (std::size_t i = 0; i < everyone.size(); ++i) everyone[i] = i;

  parallel_for(trials, resolve_thread_count(config.threads), [&](std::size_t i) {
    const auto t = simulate_channels(config, i);
    // The conventional receiver has no CSI: plain majority over all copies.
    BitVector estimate(config.n_bits);
    for (std::size_t m = 0; m < config.n_bits; ++m) {
      std::size_t ones = 0;
      for (const auto& obs : t.observations) ones += obs.test(m);
      if (2 * ones > t.observations.size()) estimate.set(m);
    }
    distortion[i] = static_cast<double>(kernels::hamming_distance(estimate.words(), t.source.words())) /
                    static_cast<double>(config.n_bits);
  });

  BaselineReport r;
  r.n_sensors = config.n_sensors;
  r.n_bits = config.n_bits;
  r.trials = trials;
  r.b1 = static_cast<double>(config.n_bits) * static_cast<double>(config.n_sensors);
  double sum = 0, sq = 0;
  for (double d : distortion) {
    sum += d;
    sq += d * d;
  }
  r.distortion = mean_and_error(sum, sq, trials);
  return r;
}

void write_csv(std::ostream& out, const ExperimentReport& report) {
  const auto flags = out.flags();
  out << "k,F_K,F_K_raw,se,f_K\n" << std::setprecision(17);
  for (std::size_t k = 1; k <= report.n_sensors; ++k) {
    out << k << ',' << report.cmf[k - 1] << ',' << report.raw_cmf[k - 1] << ',' << report.cmf_std_error[k - 1] << ','
        << report.pmf[k - 1] << '\n';
  }
  out.flags(flags);
}

}  // namespace gesim
