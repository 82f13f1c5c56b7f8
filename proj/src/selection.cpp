#include "gesim/selection.hpp"

#include <algorithm>
#include <bit>

#include "gesim/error.hpp"
#include "gesim/kernels.hpp"

namespace gesim {

SensorSubset SensorSubset::from_indices(std::size_t n_sensors, std::initializer_list<std::size_t> indices) {
  return from_indices(n_sensors, std::vector<std::size_t>(indices));
}

SensorSubset SensorSubset::from_indices(std::size_t n_sensors, const std::vector<std::size_t>& indices) {
  BitVector mask(n_sensors);
  for (std::size_t i : indices) {
    if (i >= n_sensors) throw ArgumentError("sensor index out of range");
    mask.set(i);
  }
  return SensorSubset(std::move(mask));
}

std::vector<std::size_t> SensorSubset::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_.test(i)) out.push_back(i);
  }
  return out;
}

bool covers(const CsiMatrix& csi, const SensorSubset& subset) {
  if (subset.n_sensors() != csi.n_sensors()) throw ArgumentError("subset size does not match CSI matrix");
  const std::size_t words = BitVector::words_for(csi.n_bits());
  const std::uint64_t tail = BitVector::tail_mask_for(csi.n_bits());
  std::vector<std::uint64_t> acc(words, 0);
  bool full = false;
  for (std::size_t n : subset.indices()) {
    full = kernels::or_is_full(acc.data(), csi.row(n).words().data(), acc.data(), words, tail);
  }
  return full;
}

namespace {

class ExactSearch {
 public:
  ExactSearch(const CsiMatrix& csi, bool prune)
      : csi_(csi),
        n_(csi.n_sensors()),
        words_(BitVector::words_for(csi.n_bits())),
        tail_(BitVector::tail_mask_for(csi.n_bits())),
        prune_(prune),
        prefix_((n_ + 1) * words_, 0),
        suffix_((n_ + 1) * words_, 0),
        scratch_(words_, 0) {
    // suffix_[j] = OR of rows j..N-1
    for (std::size_t j = n_; j-- > 0;) {
      const auto row = csi_.row(j).words();
      for (std::size_t w = 0; w < words_; ++w) suffix_[j * words_ + w] = suffix_[(j + 1) * words_ + w] | row[w];
    }
  }

  bool all_rows_cover() { return is_full(&suffix_[0]); }

  /// Lexicographically first covering subset of size k, if any.
  bool search(std::size_t k, std::vector<std::size_t>& chosen) {
    chosen.assign(k, 0);
    return extend(0, 0, k, chosen);
  }

 private:
  bool is_full(const std::uint64_t* v) {
    return kernels::or_is_full(v, v, scratch_.data(), words_, tail_);
  }

  bool extend(std::size_t depth, std::size_t first, std::size_t k, std::vector<std::size_t>& chosen) {
    const std::uint64_t* acc = &prefix_[depth * words_];
    for (std::size_t j = first; j + (k - depth) <= n_; ++j) {
      if (prune_ && !kernels::or_is_full(acc, &suffix_[j * words_], scratch_.data(), words_, tail_)) {
        // Later j only see a subset of these rows.
        return false;
      }
      std::uint64_t* next = &prefix_[(depth + 1) * words_];
      const bool full = kernels::or_is_full(acc, csi_.row(j).words().data(), next, words_, tail_);
      chosen[depth] = j;
      if (depth + 1 == k) {
        if (full) return true;
      } else if (extend(depth + 1, j + 1, k, chosen)) {
        return true;
      }
    }
    return false;
  }

  const CsiMatrix& csi_;
  std::size_t n_;
  std::size_t words_;
  std::uint64_t tail_;
  bool prune_;
  std::vector<std::uint64_t> prefix_;
  std::vector<std::uint64_t> suffix_;
  std::vector<std::uint64_t> scratch_;
};

SelectionResult greedy_cover(const CsiMatrix& csi) {
  const std::size_t n = csi.n_sensors();
  BitVector uncovered(csi.n_bits(), true);
  BitVector mask(n);
  while (!uncovered.none()) {
    std::size_t best = n, best_gain = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask.test(j)) continue;
      BitVector gain = uncovered;
      gain &= csi.row(j);
      const std::size_t g = gain.count();
      if (g > best_gain) {
        best_gain = g;
        best = j;
      }
    }
    if (best == n) break;
    mask.set(best);
    BitVector row = csi.row(best);
    for (auto& w : row.words()) w = ~w;
    row.trim();
    uncovered &= row;
  }
  SelectionResult r;
  r.subset = SensorSubset(std::move(mask));
  r.covered = true;
  r.heuristic = true;
  return r;
}

}  // namespace

SelectionResult select_min_subset(const CsiMatrix& csi, const SelectionOptions& options) {
  const std::size_t n = csi.n_sensors();
  if (n == 0 || csi.n_bits() == 0) throw ArgumentError("selection needs N >= 1 and M >= 1");

  ExactSearch search(csi, options.prune);
  SelectionResult result;
  if (!search.all_rows_cover()) {
    result.subset = SensorSubset::all(n);
    result.forced_all = true;
    return result;
  }
  if (options.allow_greedy && n > options.greedy_min_sensors) return greedy_cover(csi);

  std::vector<std::size_t> chosen;
  for (std::size_t k = 1; k <= n; ++k) {
    if (search.search(k, chosen)) {
      result.subset = SensorSubset::from_indices(n, chosen);
      result.covered = true;
      return result;
    }
  }
  // Unreachable: the full set covers.
  throw std::logic_error("selection search failed although the full set covers");
}

BitVector feedback_message(const SelectionResult& result) { return result.subset.mask(); }

}  // namespace gesim
