#include "streamsplit/reservoir.hpp"

#include <algorithm>

namespace streamsplit {

Reservoir::Reservoir(std::uint64_t capacity, std::uint64_t seed) : capacity_(capacity), rng_(seed) {
  if (capacity == 0) throw ConfigError("reservoir capacity must be at least 1");
}

void Reservoir::offer(FeatureValue x) {
  ++count_seen_;
  if (items_.size() < capacity_) {
    items_.push_back(x);
    return;
  }
  const std::uint64_t slot = rng_.below(count_seen_);
  if (slot < capacity_) items_[slot] = x;
}

CandidateSet::CandidateSet(std::vector<std::uint64_t> splits) : splits_(std::move(splits)) {
  std::sort(splits_.begin(), splits_.end());
  splits_.erase(std::unique(splits_.begin(), splits_.end()), splits_.end());
}

bool CandidateSet::contains(std::uint64_t j) const {
  return std::binary_search(splits_.begin(), splits_.end(), j);
}

CandidateSet candidates(std::span<const FeatureValue> sampled, std::uint64_t N) {
  std::vector<std::uint64_t> s;
  s.reserve(2 * sampled.size() + 2);
  s.push_back(0);
  s.push_back(N);
  for (FeatureValue x : sampled) {
    const auto v = static_cast<std::uint64_t>(x);
    s.push_back(v);
    if (v > 1) s.push_back(v - 1);
  }
  return CandidateSet(std::move(s));
}

}  // namespace streamsplit
