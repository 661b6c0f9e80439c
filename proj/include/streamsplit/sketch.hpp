#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "streamsplit/core.hpp"

namespace streamsplit {

/// Canonical dyadic block at `level`: the feature values
/// [index * 2^level + 1, (index + 1) * 2^level].
struct DyadicInterval {
  std::uint32_t level = 0;
  std::uint64_t index = 0;

  std::uint64_t lo() const { return (index << level) + 1; }
  std::uint64_t hi() const { return (index + 1) << level; }

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

/// Greedy cover of [lo, hi] by maximal aligned blocks of size at most
/// 2^(levels-1). The blocks are disjoint, ordered, and number at most
/// 2 * dyadic_levels(N). Throws ConfigError unless 1 <= lo <= hi <= N.
std::vector<DyadicInterval> dyadic_decompose(std::uint64_t lo, std::uint64_t hi, std::uint64_t N);

/// How each dyadic level stores its counters.
enum class SketchLayout : std::uint32_t {
  /// rows x width hashed counters on every level.
  hashed = 0,
  /// A level whose bucket count fits in rows x width keeps one exact counter
  /// per bucket instead. Never larger or less accurate than `hashed`.
  adaptive = 1,
};

/// Pairwise-independent multiply-add-shift hash over 64-bit keys,
/// reduced to [0, width) by a multiply-high.
struct RowHash {
  unsigned __int128 a = 1;
  unsigned __int128 b = 0;

  std::uint64_t operator()(std::uint64_t key, std::uint64_t width) const {
    const auto h = static_cast<std::uint64_t>((a * key + b) >> 64);
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(h) * width) >> 64);
  }
};

/// Count-Min tables over the dyadic levels of [1, N]. Insertion-only:
/// range estimates never undershoot the true weighted sum.
class DyadicCmSketch {
 public:
  DyadicCmSketch(std::uint64_t N, std::uint32_t rows, std::uint64_t width, std::uint64_t seed,
                 std::uint64_t sketch_id, SketchLayout layout = SketchLayout::adaptive);

  /// Sized from derived parameters (levels, rows, width).
  static DyadicCmSketch from_params(const DerivedParams& params, std::uint64_t N, std::uint64_t seed,
                                    std::uint64_t sketch_id, SketchLayout layout = SketchLayout::adaptive);

  void update(std::uint64_t x, std::uint64_t weight);

  /// Sum of per-block point estimates over dyadic_decompose(lo, hi, N).
  std::uint64_t range_query(std::uint64_t lo, std::uint64_t hi) const;

  /// Estimate for a single canonical block.
  std::uint64_t block_estimate(const DyadicInterval& block) const;

  std::uint64_t domain_size() const { return N_; }
  std::uint32_t levels() const { return static_cast<std::uint32_t>(levels_.size()); }
  std::uint32_t rows() const { return rows_; }
  std::uint64_t width() const { return width_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t sketch_id() const { return sketch_id_; }
  SketchLayout layout() const { return layout_; }
  bool level_is_exact(std::uint32_t level) const { return levels_.at(level).exact; }

  /// Exact running total of all applied weights.
  std::uint64_t total_weight() const { return total_weight_; }

  /// Number of allocated counters.
  std::uint64_t counter_count() const;

  /// Counters incremented by one update.
  std::uint64_t counters_touched_per_update() const;

  /// Versioned little-endian dump; see docs/FORMATS.md.
  void save(std::ostream& out) const;
  static DyadicCmSketch load(std::istream& in);

  friend bool operator==(const DyadicCmSketch& a, const DyadicCmSketch& b);

 private:
  struct Level {
    std::uint64_t buckets = 0;
    bool exact = false;
    std::uint32_t rows = 0;
    std::uint64_t width = 0;
    std::vector<std::uint64_t> counters;
    std::vector<RowHash> hashes;
  };

  void build_levels();

  std::uint64_t N_;
  std::uint32_t rows_;
  std::uint64_t width_;
  std::uint64_t seed_;
  std::uint64_t sketch_id_;
  SketchLayout layout_;
  std::uint64_t total_weight_ = 0;
  std::vector<Level> levels_;
};

}  // namespace streamsplit
