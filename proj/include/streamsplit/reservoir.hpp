#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "streamsplit/core.hpp"
#include "streamsplit/random.hpp"

namespace streamsplit {

/// Algorithm-R reservoir over feature values. Labels are not kept; the
/// candidate splits only depend on where sampled points fall.
class Reservoir {
 public:
  /// Throws ConfigError when capacity is 0.
  Reservoir(std::uint64_t capacity, std::uint64_t seed);

  void offer(FeatureValue x);
  void offer(const LabeledPoint& p) { offer(p.x); }

  std::span<const FeatureValue> items() const { return items_; }
  std::uint64_t capacity() const { return capacity_; }
  std::uint64_t count_seen() const { return count_seen_; }

 private:
  std::uint64_t capacity_;
  std::uint64_t count_seen_ = 0;
  std::vector<FeatureValue> items_;
  CounterRng rng_;
};

/// Sorted, deduplicated split positions in [0, N] that always include 0 and N.
class CandidateSet {
 public:
  explicit CandidateSet(std::vector<std::uint64_t> splits);

  std::span<const std::uint64_t> splits() const { return splits_; }
  std::size_t size() const { return splits_.size(); }
  bool contains(std::uint64_t j) const;

  auto begin() const { return splits_.begin(); }
  auto end() const { return splits_.end(); }

 private:
  std::vector<std::uint64_t> splits_;
};

/// {0, N} together with x and x-1 (for x > 1) for every sampled x.
CandidateSet candidates(std::span<const FeatureValue> sampled, std::uint64_t N);
inline CandidateSet candidates(const Reservoir& r, std::uint64_t N) { return candidates(r.items(), N); }

}  // namespace streamsplit
