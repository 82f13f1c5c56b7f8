#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "gesim/bits.hpp"
#include "gesim/gechannel.hpp"

namespace gesim {

/// Subset of sensors as an N-bit mask; bit n set means sensor n (0-based) is selected.
class SensorSubset {
 public:
  SensorSubset() = default;
  explicit SensorSubset(BitVector mask) : mask_(std::move(mask)) {}

  /// Zero-based sensor indices.
  static SensorSubset from_indices(std::size_t n_sensors, std::initializer_list<std::size_t> indices);
  static SensorSubset from_indices(std::size_t n_sensors, const std::vector<std::size_t>& indices);
  static SensorSubset all(std::size_t n_sensors) { return SensorSubset(BitVector(n_sensors, true)); }

  std::size_t n_sensors() const noexcept { return mask_.size(); }
  std::size_t size() const noexcept { return mask_.count(); }
  bool contains(std::size_t sensor) const { return mask_.test(sensor); }
  std::vector<std::size_t> indices() const;
  const BitVector& mask() const noexcept { return mask_; }

  friend bool operator==(const SensorSubset&, const SensorSubset&) = default;

 private:
  BitVector mask_;
};

struct SelectionResult {
  SensorSubset subset;
  bool covered = false;     ///< subset covers every source bit
  bool forced_all = false;  ///< no subset covers; all N sensors requested
  bool heuristic = false;   ///< produced by the greedy fallback, minimality not guaranteed
};

struct SelectionOptions {
  /// Opt-in greedy set cover for N > greedy_min_sensors. It departs from the
  /// exact minimum-size search the subset-size distribution describes.
  bool allow_greedy = false;
  std::size_t greedy_min_sensors = 24;
  /// Skip prefixes whose union with all remaining rows cannot cover. Does not change results.
  bool prune = true;
};

/// True iff the OR of the selected rows is all ones.
bool covers(const CsiMatrix& csi, const SensorSubset& subset);

/// Smallest covering subset, searching sizes k = 1..N and returning the
/// lexicographically first covering k-subset; forced_all when none covers.
SelectionResult select_min_subset(const CsiMatrix& csi, const SelectionOptions& options = {});

/// Phase-two downlink payload: bit n is 1 iff sensor n must transmit.
BitVector feedback_message(const SelectionResult& result);

}  // namespace gesim
