#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "streamsplit/core.hpp"
#include "streamsplit/rational.hpp"

namespace streamsplit {

enum class LossKind { mse, gini, misclassification };

std::string_view to_string(LossKind kind);
LabelMode label_mode_for(LossKind kind);

/// Exact per-range statistics. In regression mode `plus`/`minus` are 0; in
/// classification mode `s` and `q` hold the re-encoded (0/1) moments, so
/// s = q = plus.
struct RangeMoments {
  std::int64_t n = 0;
  std::int64_t s = 0;
  std::int64_t q = 0;
  std::int64_t plus = 0;
  std::int64_t minus = 0;

  RangeMoments& operator+=(const RangeMoments& o);
  RangeMoments& operator-=(const RangeMoments& o);
  friend bool operator==(const RangeMoments&, const RangeMoments&) = default;
};

/// Exact aggregation of a stream by feature value. Linear space by design.
/// Values are collected densely for N <= 2^20 and in a sorted map otherwise;
/// finalize() compacts both into prefix sums over the distinct values.
class AggregatedStream {
 public:
  static constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 20;

  AggregatedStream(std::uint64_t N, LabelMode mode);

  static AggregatedStream from_points(std::span<const LabeledPoint> points, std::uint64_t N, LabelMode mode);

  /// Accepts elements until finalize(). Feature must be in [1,N]; label is
  /// checked against the mode (classification requires +-1, regression >= 0).
  void add(const LabeledPoint& p);
  void finalize();
  bool finalized() const { return finalized_; }

  std::uint64_t N() const { return N_; }
  LabelMode mode() const { return mode_; }
  std::uint64_t m() const { return total_.n; }
  /// Total label weight (regression: sum of y; classification: sum of (y+1)/2).
  std::int64_t W() const { return total_.s; }
  const RangeMoments& total() const { return total_; }

  /// Statistics over [1, j]; j may be 0 (empty) or up to N.
  RangeMoments prefix(std::uint64_t j) const;
  /// Statistics over [lo, hi]; empty when lo > hi.
  RangeMoments range(std::uint64_t lo, std::uint64_t hi) const;

  /// Distinct feature values present, ascending.
  std::span<const std::uint64_t> distinct_values() const { return values_; }
  /// Per-value statistics aligned with distinct_values().
  std::span<const RangeMoments> per_value() const { return per_value_; }

 private:
  void require_finalized() const;

  std::uint64_t N_;
  LabelMode mode_;
  bool finalized_ = false;
  RangeMoments total_;
  std::vector<RangeMoments> dense_;
  std::map<std::uint64_t, RangeMoments> sparse_;
  std::vector<std::uint64_t> values_;
  std::vector<RangeMoments> per_value_;
  std::vector<RangeMoments> prefix_;  // prefix_[t] = sum of per_value_[0..t)
};

/// q - s^2/n for n > 0, else 0.
Rational sse_of(const RangeMoments& r);

Rational exact_sse(const AggregatedStream& agg, std::uint64_t lo, std::uint64_t hi);

struct MseSplitDetail {
  Rational loss;
  /// Side means; nullopt marks an empty side.
  std::optional<Rational> left_mean;
  std::optional<Rational> right_mean;
};

/// (SSE([1,j]) + SSE([j+1,N])) / m. Throws EmptyStreamError on m = 0.
Rational exact_mse_loss(const AggregatedStream& agg, std::uint64_t j);
MseSplitDetail exact_mse_detail(const AggregatedStream& agg, std::uint64_t j);

/// 2ab/(m(a+b)) + 2cd/(m(c+d)), empty sides contribute 0.
Rational exact_gini_loss(const AggregatedStream& agg, std::uint64_t j);

/// (min(f-, f+) on the left + min(f-, f+) on the right) / m.
Rational exact_mis_loss(const AggregatedStream& agg, std::uint64_t j);

Rational exact_loss(const AggregatedStream& agg, LossKind kind, std::uint64_t j);

struct OptResult {
  Split split;
  Rational loss;
};

/// Smallest minimizing split over [0, N] and its exact loss.
OptResult exact_opt(const AggregatedStream& agg, LossKind kind);

/// Loss for every j in [0, N]. Only sensible for modest N.
std::vector<Rational> exact_loss_curve(const AggregatedStream& agg, LossKind kind);

// Multiset algebra over rational labels.

/// sum (y - a)^2.
Rational sum_squared_deviation(std::span<const Rational> ys, const Rational& a);
Rational mean_of(std::span<const Rational> ys);
/// sum (y - mean)^2; 0 for an empty multiset.
Rational multiset_sse(std::span<const Rational> ys);
/// Increase in SSE when a block of `block` copies of `v` joins a multiset of
/// size `size` and mean `mu`: size*block/(size+block) * (mu - v)^2.
Rational block_merge_increase(std::uint64_t size, const Rational& mu, std::uint64_t block, const Rational& v);

}  // namespace streamsplit
