#pragma once

// Exact distribution of the selected subset size K.
//
// F_K(k) is the probability that some k-subset of sensors covers all M source
// bits. Writing s_1..s_{N_k} for the k-subsets (lexicographic order), F_K(k) is
// expanded by inclusion-exclusion over nonempty collections w of k-subsets:
//
//   F_K(k) = sum_w (-1)^{|w|+1} P(every subset in w covers all M bits).
//
// Each term is the probability that the joint channel state C_m (one of 2^N
// binary tuples) stays inside the set D_w of tuples that give every subset of
// w a Good sensor, for m = 1..M. With Q the joint transition matrix and X_1
// the steady-state distribution restricted to D_w, the term equals the total
// mass of X_M where X_m = diag(D_w) Q X_{m-1}.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gesim/bits.hpp"
#include "gesim/gechannel.hpp"

namespace gesim {

/// Index of a joint channel state: bit n is sensor n's state (1 = Good).
using StateIndex = std::uint32_t;

struct ExactLimits {
  /// Largest N for the full (untruncated) inclusion-exclusion sum.
  std::size_t max_sensors_full = 5;
  /// Largest N for building the 2^N x 2^N transition matrix.
  std::size_t max_sensors_matrix = 14;
  /// Largest number of collections visited by a truncated (Bonferroni) sum.
  std::size_t max_truncated_collections = std::size_t{1} << 24;
  /// Workers for per-indicator probabilities; 0 resolves as in parallel.hpp.
  unsigned threads = 0;
};

/// Joint transition matrix, q(i, l) = P(C_m = u_i | C_{m-1} = u_l). Columns sum to one.
class TransitionMatrix {
 public:
  TransitionMatrix(std::size_t n_sensors, std::vector<double> column_major);

  std::size_t n_sensors() const noexcept { return n_sensors_; }
  std::size_t dim() const noexcept { return dim_; }
  double operator()(StateIndex to, StateIndex from) const { return data_[from * dim_ + to]; }
  std::span<const double> column_major() const noexcept { return data_; }

 private:
  std::size_t n_sensors_;
  std::size_t dim_;
  std::vector<double> data_;
};

/// Throws CapacityError when N exceeds limits.max_sensors_matrix.
TransitionMatrix build_q(std::span<const ChannelParams> params, const ExactLimits& limits = {});

/// Product of per-sensor steady-state marginals for every joint state.
std::vector<double> steady_state_joint(std::span<const ChannelParams> params);

/// All k-subsets of {0..N-1} as sensor bit masks, in lexicographic order of
/// their sorted index tuples.
std::vector<std::uint32_t> k_subsets(std::size_t n_sensors, std::size_t k);

/// A collection w: strictly increasing positions into k_subsets(n_sensors, k).
struct SubsetCollection {
  std::size_t n_sensors = 0;
  std::size_t k = 0;
  std::vector<std::size_t> members;
};

/// 1 iff every subset named by w contains a sensor that is Good in `state`.
bool indicator_d(const SubsetCollection& w, StateIndex state);

/// indicator_d over all 2^N joint states.
BitVector coverage_indicator(const SubsetCollection& w);

/// Probability that the joint state stays inside `indicator` for all M steps.
double collection_probability(const BitVector& indicator, std::size_t n_bits, std::span<const ChannelParams> params,
                              const TransitionMatrix& q);
double collection_probability(const SubsetCollection& w, std::size_t n_bits, std::span<const ChannelParams> params,
                              const ExactLimits& limits = {});

/// Total mass sum_i X_m(i) for m = 1..M (non-increasing in m).
std::vector<double> coverage_mass_profile(const BitVector& indicator, std::size_t n_bits,
                                          std::span<const ChannelParams> params, const TransitionMatrix& q);

struct CmfValue {
  double value = 0.0;          ///< clamped to [0, 1]
  double raw = 0.0;            ///< signed sum before clamping
  bool clamped = false;        ///< raw left [0, 1] by more than 1e-9
  bool truncated = false;      ///< Bonferroni truncation in effect (a lower bound)
  std::size_t max_depth = 0;   ///< largest |w| included
  std::size_t collections = 0; ///< collections with a nonempty indicator
  std::size_t distinct_terms = 0;
};

struct KDistribution {
  std::size_t n_sensors = 0;
  std::size_t n_bits = 0;
  std::vector<double> cmf;      ///< F_K(1..N) with F_K(N) forced to 1
  std::vector<double> raw_cmf;  ///< F_K(1..N) as computed; raw_cmf[N-1] is P(all N sensors cover)
  std::vector<double> pmf;      ///< f_K(1..N) from the forced cmf
  double expected = 0.0;        ///< E[K] = N - sum_{k<N} F_K(k)
  bool forced = true;
};

/// Shares the transition matrix and a per-indicator probability cache across
/// all k for one (params, M) configuration.
class ExactAnalyzer {
 public:
  ExactAnalyzer(std::span<const ChannelParams> params, std::size_t n_bits, ExactLimits limits = {});

  std::size_t n_sensors() const noexcept { return params_.size(); }
  std::size_t n_bits() const noexcept { return n_bits_; }
  const TransitionMatrix& q() const noexcept { return q_; }

  /// F_K(k). With `bonferroni_pairs` = L, only collections with |w| <= 2L are
  /// summed, which gives a lower bound. Throws CapacityError when the full sum
  /// is requested above limits.max_sensors_full.
  CmfValue cmf(std::size_t k, std::optional<std::size_t> bonferroni_pairs = std::nullopt);

  KDistribution distribution();

  std::size_t cache_size() const noexcept { return cache_.size(); }

 private:
  std::vector<ChannelParams> params_;
  std::size_t n_bits_;
  ExactLimits limits_;
  TransitionMatrix q_;
  std::vector<double> initial_;
  std::map<std::vector<std::uint64_t>, double> cache_;
};

CmfValue cmf_exact(std::size_t k, std::size_t n_bits, std::span<const ChannelParams> params,
                   std::optional<std::size_t> bonferroni_pairs = std::nullopt, const ExactLimits& limits = {});

KDistribution k_distribution(std::size_t n_bits, std::span<const ChannelParams> params,
                             const ExactLimits& limits = {});

/// Header "k,F_K,f_K" then one row per k.
void write_csv(std::ostream& out, const KDistribution& dist);

}  // namespace gesim
