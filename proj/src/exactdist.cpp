#include "gesim/exactdist.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "gesim/error.hpp"
#include "gesim/kernels.hpp"
#include "gesim/parallel.hpp"

namespace gesim {

namespace {

constexpr double kClampReportThreshold = 1e-9;

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void require_params(std::span<const ChannelParams> params) {
  if (params.empty()) throw ConfigError("exact analysis needs at least one sensor");
  for (const auto& p : params) p.validate();
}

std::size_t binomial_saturating(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t num = n - k + i;
    if (r > kMax / num) return kMax;
    r = r * num / i;  // exact: r * num is divisible by i at each step
  }
  return r;
}

void subsets_rec(std::size_t n, std::size_t k, std::size_t first, std::uint32_t mask,
                 std::vector<std::uint32_t>& out) {
  if (k == 0) {
    out.push_back(mask);
    return;
  }
  for (std::size_t j = first; j + k <= n; ++j) subsets_rec(n, k - 1, j + 1, mask | (std::uint32_t{1} << j), out);
}

// Bitmap over joint states of those that give subset `mask` at least one Good sensor.
std::vector<std::uint64_t> subset_indicator_words(std::size_t n_sensors, std::uint32_t mask) {
  const std::size_t dim = std::size_t{1} << n_sensors;
  std::vector<std::uint64_t> words(BitVector::words_for(dim), 0);
  for (std::size_t i = 0; i < dim; ++i) {
    if ((static_cast<std::uint32_t>(i) & mask) != 0) words[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  return words;
}

}  // namespace

TransitionMatrix::TransitionMatrix(std::size_t n_sensors, std::vector<double> column_major)
    : n_sensors_(n_sensors), dim_(std::size_t{1} << n_sensors), data_(std::move(column_major)) {
  if (data_.size() != dim_ * dim_) throw ArgumentError("transition matrix storage has the wrong size");
}

TransitionMatrix build_q(std::span<const ChannelParams> params, const ExactLimits& limits) {
  require_params(params);
  const std::size_t n = params.size();
  if (n > limits.max_sensors_matrix) {
    throw CapacityError("joint transition matrix for N=" + std::to_string(n) + " exceeds the cap of N=" +
                        std::to_string(limits.max_sensors_matrix) + "; use the closed-form bounds instead");
  }
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> data(dim * dim);
  for (std::size_t l = 0; l < dim; ++l) {
    for (std::size_t i = 0; i < dim; ++i) {
      double q = 1.0;
      for (std::size_t s = 0; s < n; ++s) {
        const bool to_good = (i >> s) & 1u;
        const bool from_good = (l >> s) & 1u;
        const auto& p = params[s];
        if (from_good) {
          q *= to_good ? 1.0 - p.epsilon : p.epsilon;
        } else {
          q *= to_good ? p.mu : 1.0 - p.mu;
        }
      }
      data[l * dim + i] = q;
    }
  }
  return TransitionMatrix(n, std::move(data));
}

std::vector<double> steady_state_joint(std::span<const ChannelParams> params) {
  const std::size_t n = params.size();
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> pi(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    double p = 1.0;
    for (std::size_t s = 0; s < n; ++s) {
      const double good = steady_state(params[s]);
      p *= ((i >> s) & 1u) ? good : 1.0 - good;
    }
    pi[i] = p;
  }
  return pi;
}

std::vector<std::uint32_t> k_subsets(std::size_t n_sensors, std::size_t k) {
  if (n_sensors > 31) throw CapacityError("subset enumeration supports at most 31 sensors");
  std::vector<std::uint32_t> out;
  if (k == 0 || k > n_sensors) return out;
  subsets_rec(n_sensors, k, 0, 0, out);
  return out;
}

namespace {

std::vector<std::uint32_t> collection_masks(const SubsetCollection& w) {
  const auto subsets = k_subsets(w.n_sensors, w.k);
  std::vector<std::uint32_t> masks;
  masks.reserve(w.members.size());
  for (std::size_t idx = 0; idx < w.members.size(); ++idx) {
    const std::size_t m = w.members[idx];
    if (m >= subsets.size()) throw ArgumentError("collection member out of range");
    if (idx > 0 && m <= w.members[idx - 1]) throw ArgumentError("collection members must be strictly increasing");
    masks.push_back(subsets[m]);
  }
  if (masks.empty()) throw ArgumentError("collection must name at least one subset");
  return masks;
}

}  // namespace

bool indicator_d(const SubsetCollection& w, StateIndex state) {
  for (std::uint32_t mask : collection_masks(w)) {
    if ((state & mask) == 0) return false;
  }
  return true;
}

BitVector coverage_indicator(const SubsetCollection& w) {
  const auto masks = collection_masks(w);
  const std::size_t dim = std::size_t{1} << w.n_sensors;
  BitVector d(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    bool all = true;
    for (std::uint32_t mask : masks) {
      if ((static_cast<std::uint32_t>(i) & mask) == 0) {
        all = false;
        break;
      }
    }
    d.set(i, all);
  }
  return d;
}

namespace {

// Runs the masked recursion, reporting the mass after each step to `on_step`.
template <class OnStep>
void run_recursion(std::span<const std::uint64_t> indicator, std::size_t n_bits, std::span<const double> initial,
                   const TransitionMatrix& q, OnStep on_step) {
  const std::size_t dim = q.dim();
  std::vector<double> x(dim), y(dim);
  double mass = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    x[i] = ((indicator[i >> 6] >> (i & 63)) & 1u) ? initial[i] : 0.0;
    mass += x[i];
  }
  on_step(mass);
  for (std::size_t m = 1; m < n_bits; ++m) {
    kernels::masked_matvec(q.column_major(), dim, x, indicator, y);
    std::swap(x, y);
    mass = 0.0;
    for (double v : x) mass += v;
    on_step(mass);
  }
}

void check_indicator(const BitVector& indicator, const TransitionMatrix& q, std::span<const ChannelParams> params) {
  if (params.size() != q.n_sensors()) throw ArgumentError("parameter count does not match the transition matrix");
  if (indicator.size() != q.dim()) throw ArgumentError("indicator length must be 2^N");
}

}  // namespace

double collection_probability(const BitVector& indicator, std::size_t n_bits, std::span<const ChannelParams> params,
                              const TransitionMatrix& q) {
  check_indicator(indicator, q, params);
  if (n_bits == 0) throw ConfigError("M must be at least 1");
  const auto initial = steady_state_joint(params);
  double last = 0.0;
  run_recursion(indicator.words(), n_bits, initial, q, [&](double mass) { last = mass; });
  return last;
}

double collection_probability(const SubsetCollection& w, std::size_t n_bits, std::span<const ChannelParams> params,
                              const ExactLimits& limits) {
  if (params.size() != w.n_sensors) throw ArgumentError("parameter count does not match the collection");
  const auto q = build_q(params, limits);
  return collection_probability(coverage_indicator(w), n_bits, params, q);
}

std::vector<double> coverage_mass_profile(const BitVector& indicator, std::size_t n_bits,
                                          std::span<const ChannelParams> params, const TransitionMatrix& q) {
  check_indicator(indicator, q, params);
  const auto initial = steady_state_joint(params);
  std::vector<double> profile;
  profile.reserve(n_bits);
  run_recursion(indicator.words(), n_bits, initial, q, [&](double mass) { profile.push_back(mass); });
  return profile;
}

ExactAnalyzer::ExactAnalyzer(std::span<const ChannelParams> params, std::size_t n_bits, ExactLimits limits)
    : params_(params.begin(), params.end()),
      n_bits_(n_bits),
      limits_(limits),
      q_(build_q(params, limits)),
      initial_(steady_state_joint(params)) {
  if (n_bits_ == 0) throw ConfigError("M must be at least 1");
}

CmfValue ExactAnalyzer::cmf(std::size_t k, std::optional<std::size_t> bonferroni_pairs) {
  const std::size_t n = params_.size();
  if (k == 0 || k > n) throw ArgumentError("k must lie in [1, N]");

  const auto subsets = k_subsets(n, k);
  const std::size_t n_k = subsets.size();

  CmfValue result;
  std::size_t max_depth = n_k;
  if (bonferroni_pairs) {
    if (*bonferroni_pairs == 0) throw ArgumentError("Bonferroni truncation needs L >= 1");
    const std::size_t depth = 2 * *bonferroni_pairs;
    if (depth < n_k) {
      max_depth = depth;
      result.truncated = true;
      std::size_t visits = 0;
      for (std::size_t d = 1; d <= depth; ++d) {
        const std::size_t c = binomial_saturating(n_k, d);
        visits = (c > limits_.max_truncated_collections - visits) ? limits_.max_truncated_collections + 1 : visits + c;
      }
      if (visits > limits_.max_truncated_collections) {
        throw CapacityError("Bonferroni truncation at depth " + std::to_string(depth) +
                            " visits too many collections; lower L");
      }
    }
  }
  if (!result.truncated && n > limits_.max_sensors_full) {
    throw CapacityError("full inclusion-exclusion for N=" + std::to_string(n) + " exceeds the cap of N=" +
                        std::to_string(limits_.max_sensors_full) +
                        "; use the closed-form E[K] bound or Bonferroni truncation");
  }
  result.max_depth = max_depth;

  const std::size_t words = BitVector::words_for(q_.dim());
  std::vector<std::vector<std::uint64_t>> member_indicators;
  member_indicators.reserve(n_k);
  for (std::uint32_t mask : subsets) member_indicators.push_back(subset_indicator_words(n, mask));

  // Collections sharing an indicator share a probability; accumulate the
  // signed multiplicity per distinct indicator. Collections whose indicator
  // is empty contribute zero, and so do all of their supersets.
  std::map<std::vector<std::uint64_t>, std::int64_t> coefficients;
  std::vector<std::vector<std::uint64_t>> stack(max_depth + 1, std::vector<std::uint64_t>(words, 0));
  {
    const std::size_t dim = q_.dim();
    for (std::size_t i = 0; i < dim; ++i) stack[0][i >> 6] |= std::uint64_t{1} << (i & 63);
  }

  auto dfs = [&](auto&& self, std::size_t first, std::size_t depth) -> void {
    const auto& acc = stack[depth];
    auto& next = stack[depth + 1];
    for (std::size_t j = first; j < n_k; ++j) {
      bool empty = true;
      const auto& dj = member_indicators[j];
      for (std::size_t w = 0; w < words; ++w) {
        next[w] = acc[w] & dj[w];
        empty = empty && next[w] == 0;
      }
      if (empty) continue;
      ++result.collections;
      coefficients[next] += ((depth + 1) % 2 == 1) ? 1 : -1;
      if (depth + 1 < max_depth) self(self, j + 1, depth + 1);
    }
  };
  dfs(dfs, 0, 0);

  std::vector<const std::vector<std::uint64_t>*> keys;
  std::vector<std::int64_t> coefs;
  for (const auto& [indicator, coef] : coefficients) {
    if (coef == 0) continue;
    keys.push_back(&indicator);
    coefs.push_back(coef);
  }
  result.distinct_terms = keys.size();

  std::vector<double> probs(keys.size(), 0.0);
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (auto it = cache_.find(*keys[i]); it != cache_.end()) {
      probs[i] = it->second;
    } else {
      missing.push_back(i);
    }
  }
  parallel_for(missing.size(), resolve_thread_count(limits_.threads), [&](std::size_t t) {
    const std::size_t i = missing[t];
    run_recursion(*keys[i], n_bits_, initial_, q_, [&](double mass) { probs[i] = mass; });
  });
  for (std::size_t i : missing) cache_.emplace(*keys[i], probs[i]);

  CompensatedSum sum;
  for (std::size_t i = 0; i < keys.size(); ++i) sum.add(static_cast<double>(coefs[i]) * probs[i]);
  result.raw = sum.value();
  result.value = std::clamp(result.raw, 0.0, 1.0);
  result.clamped = (result.raw < -kClampReportThreshold) || (result.raw > 1.0 + kClampReportThreshold);
  return result;
}

KDistribution ExactAnalyzer::distribution() {
  const std::size_t n = params_.size();
  KDistribution dist;
  dist.n_sensors = n;
  dist.n_bits = n_bits_;
  dist.raw_cmf.resize(n);
  for (std::size_t k = 1; k <= n; ++k) dist.raw_cmf[k - 1] = cmf(k).value;
  dist.cmf = dist.raw_cmf;
  dist.cmf[n - 1] = 1.0;
  dist.pmf.resize(n);
  double below = 0.0;
  double sum_lower = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    dist.pmf[k - 1] = dist.cmf[k - 1] - below;
    below = dist.cmf[k - 1];
    if (k < n) sum_lower += dist.cmf[k - 1];
  }
  dist.expected = static_cast<double>(n) - sum_lower;
  dist.forced = true;
  return dist;
}

CmfValue cmf_exact(std::size_t k, std::size_t n_bits, std::span<const ChannelParams> params,
                   std::optional<std::size_t> bonferroni_pairs, const ExactLimits& limits) {
  ExactAnalyzer analyzer(params, n_bits, limits);
  return analyzer.cmf(k, bonferroni_pairs);
}

KDistribution k_distribution(std::size_t n_bits, std::span<const ChannelParams> params, const ExactLimits& limits) {
  if (params.size() > limits.max_sensors_full) {
    throw CapacityError("exact distribution for N=" + std::to_string(params.size()) + " exceeds the cap of N=" +
                        std::to_string(limits.max_sensors_full) + "; use the closed-form E[K] bound");
  }
  ExactAnalyzer analyzer(params, n_bits, limits);
  return analyzer.distribution();
}

void write_csv(std::ostream& out, const KDistribution& dist) {
  const auto flags = out.flags();
  out << "k,F_K,f_K\n" << std::setprecision(17);
  for (std::size_t k = 1; k <= dist.n_sensors; ++k) {
    out << k << ',' << dist.cmf[k - 1] << ',' << dist.pmf[k - 1] << '\n';
  }
  out.flags(flags);
}

}  // namespace gesim
