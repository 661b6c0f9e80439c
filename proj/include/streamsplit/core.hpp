#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "streamsplit/errors.hpp"
#include "streamsplit/rational.hpp"

namespace streamsplit {

using FeatureValue = std::int64_t;
using Label = std::int64_t;

/// One stream element. The feature lives in [1, N]; the label in [0, M]
/// (regression) or {-1, +1} (classification).
struct LabeledPoint {
  FeatureValue x = 1;
  Label y = 0;

  friend bool operator==(const LabeledPoint&, const LabeledPoint&) = default;
};

enum class LabelMode { regression, classification };

std::string_view to_string(LabelMode mode);

/// Threshold j: points with x <= j go left, x > j go right. 0 <= j <= N.
struct Split {
  std::uint64_t j = 0;

  friend auto operator<=>(const Split&, const Split&) = default;
};

struct ProblemConfig {
  std::uint64_t N = 1;
  std::uint64_t M = 1;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  std::uint32_t failure_exponent = 3;
};

/// Sizes derived from a ProblemConfig. tau and beta are exact rationals of
/// the (binary) epsilon value.
struct DerivedParams {
  Rational tau;
  Rational beta;
  std::uint64_t K = 0;      // reservoir capacity
  std::uint64_t k = 0;      // sketch accuracy, ceil(1/beta)
  std::uint32_t levels = 0; // dyadic levels
  std::uint32_t rows = 0;   // CM rows per level
  std::uint64_t width = 0;  // CM counters per row per level

  double tau_value() const { return tau.get_d(); }
  double beta_value() const { return beta.get_d(); }

  friend bool operator==(const DerivedParams&, const DerivedParams&) = default;
};

/// Largest derived count we are willing to report; anything beyond could
/// never be allocated.
inline constexpr std::uint64_t kMaxDerivedCount = std::uint64_t{1} << 62;

/// Throws ConfigError unless 0 < epsilon < 1, N >= 1, failure_exponent >= 1.
void validate_config(const ProblemConfig& cfg);

/// tau = eps/(16 M^2), beta = eps/(32 M^2), K = max(ceil(4 ln(max(N,2))/tau), 16),
/// k = ceil(1/beta), levels = floor(log2 N) + 1, rows = ceil(c log2(max(N,2))),
/// width = ceil(e * k * 2 * levels).
///
/// Requires M >= 1; a config whose derived counts exceed kMaxDerivedCount is
/// rejected with ConfigError rather than wrapped.
DerivedParams derive_params(const ProblemConfig& cfg);

/// floor(log2(max(N,1))) + 1.
std::uint32_t dyadic_levels(std::uint64_t N);

/// Throws ValidationError (carrying `index` and the offending value) if `p`
/// breaks the LabeledPoint invariants for `mode`.
void validate_stream_element(const LabeledPoint& p, const ProblemConfig& cfg, LabelMode mode,
                             std::size_t index = 0);

/// Maps y in {-1,+1} to (y+1)/2 in {0,1}.
inline LabeledPoint reencode_to_unit(const LabeledPoint& p) { return {p.x, (p.y + 1) / 2}; }

std::vector<LabeledPoint> reencode_to_unit(std::span<const LabeledPoint> points);

}  // namespace streamsplit
