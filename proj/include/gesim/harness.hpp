#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gesim/bits.hpp"
#include "gesim/gechannel.hpp"
#include "gesim/selection.hpp"

namespace gesim {

struct ExperimentConfig {
  std::size_t n_sensors = 5;
  std::size_t n_bits = 128;
  /// Either one entry shared by all sensors or exactly n_sensors entries.
  std::vector<ChannelParams> channels;
  std::size_t trials = 100'000;
  std::uint64_t master_seed = 1;
  double distortion_threshold = 0.01;
  /// Worker count; 0 resolves through GESIM_THREADS / hardware concurrency.
  /// Results do not depend on it.
  unsigned threads = 0;
  SelectionOptions selection;

  void validate() const;
  std::vector<ChannelParams> per_sensor() const;
};

struct TrialOutcome {
  std::size_t selected_k = 0;
  bool forced = false;
  bool covered = false;
  std::size_t bits_sent_phase1 = 0;  ///< all N sensors' encoded CSI
  std::size_t bits_sent_phase2 = 0;  ///< selected_k * M
  double hamming_distortion = 0.0;
};

/// The realizations of one trial: source block, channel states, and the
/// observation each sensor would forward. Streams are derived from
/// (master_seed, trial_index) so both schemes see the same channels.
struct TrialChannels {
  BitVector source;
  CsiMatrix csi;
  std::vector<BitVector> observations;
};

TrialChannels simulate_channels(const ExperimentConfig& config, std::uint64_t trial_index);

/// Bit-wise reconstruction at the fusion centre from the listed sensors:
/// majority over copies received in the Good state when any exist, otherwise
/// majority over all listed copies; ties decode to 0.
BitVector reconstruct(const TrialChannels& channels, const std::vector<std::size_t>& sensors);

TrialOutcome run_trial(const ExperimentConfig& config, std::uint64_t trial_index);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct ExperimentReport {
  std::size_t n_sensors = 0;
  std::size_t n_bits = 0;
  std::size_t trials = 0;
  std::vector<double> cmf;            ///< forced convention, cmf[N-1] = 1
  std::vector<double> raw_cmf;        ///< fraction of trials covered with K <= k
  std::vector<double> cmf_std_error;  ///< binomial standard error of raw_cmf
  std::vector<double> pmf;
  Estimate ek;
  Estimate rho_bar;           ///< mean per-sensor CSI compression rate
  double rho_total = 0.0;     ///< mean phase-one bits / M (all sensors)
  double eta = 0.0;           ///< N / (rho_bar + E[K])
  double eta_bits = 0.0;      ///< M N / mean(phase-one + phase-two bits)
  double b1 = 0.0;
  double mean_bits_phase1 = 0.0;
  double mean_bits_phase2 = 0.0;
  double coverage_probability = 0.0;
  std::size_t covered_trials = 0;
  Estimate distortion;
  Estimate covered_distortion;
  double distortion_threshold = 0.0;
  std::vector<TrialOutcome> outcomes;  ///< filled only when requested
};

ExperimentReport run_experiment(const ExperimentConfig& config, bool keep_outcomes = false);

struct BaselineReport {
  std::size_t n_sensors = 0;
  std::size_t n_bits = 0;
  std::size_t trials = 0;
  double b1 = 0.0;  ///< M N, every trial
  Estimate distortion;
};

/// All N sensors forward all M observations; majority vote over N copies.
BaselineReport conventional_baseline(const ExperimentConfig& config);

/// Header "k,F_K,F_K_raw,se,f_K".
void write_csv(std::ostream& out, const ExperimentReport& report);

}  // namespace gesim
