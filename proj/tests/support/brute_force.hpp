#pragma once

// Test-only reference implementations. They recompute everything from raw
// points with Boost's rationals so they share no code with the library's
// GMP-based oracle.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "streamsplit/core.hpp"
#include "streamsplit/rational.hpp"

namespace brute {

using BigQ = boost::multiprecision::cpp_rational;
using BigF = boost::multiprecision::cpp_bin_float_50;
using streamsplit::LabeledPoint;

inline streamsplit::Rational to_gmp(const BigQ& q) {
  return streamsplit::Rational(boost::multiprecision::numerator(q).str() + "/" +
                               boost::multiprecision::denominator(q).str());
}

inline BigQ side_sse(const std::vector<std::int64_t>& ys) {
  if (ys.empty()) return BigQ(0);
  BigQ mean(0);
  for (auto y : ys) mean += y;
  mean /= static_cast<std::int64_t>(ys.size());
  BigQ total(0);
  for (auto y : ys) {
    const BigQ d = BigQ(y) - mean;
    total += d * d;
  }
  return total;
}

inline void split_labels(const std::vector<LabeledPoint>& pts, std::uint64_t j, std::vector<std::int64_t>& left,
                         std::vector<std::int64_t>& right) {
  for (const auto& p : pts) (static_cast<std::uint64_t>(p.x) <= j ? left : right).push_back(p.y);
}

/// Sum of squared deviations from each side's mean, over m.
inline BigQ mse_loss(const std::vector<LabeledPoint>& pts, std::uint64_t j) {
  std::vector<std::int64_t> left, right;
  split_labels(pts, j, left, right);
  return (side_sse(left) + side_sse(right)) / static_cast<std::int64_t>(pts.size());
}

/// Side-weighted impurity 1 - p+^2 - p-^2 for +-1 labels.
inline BigQ gini_loss(const std::vector<LabeledPoint>& pts, std::uint64_t j) {
  std::vector<std::int64_t> left, right;
  split_labels(pts, j, left, right);
  const auto m = static_cast<std::int64_t>(pts.size());
  BigQ total(0);
  for (const auto* side : {&left, &right}) {
    if (side->empty()) continue;
    const auto n = static_cast<std::int64_t>(side->size());
    const auto plus = std::count(side->begin(), side->end(), 1);
    const BigQ p(plus, n);
    const BigQ q(n - plus, n);
    total += BigQ(n, m) * (BigQ(1) - p * p - q * q);
  }
  return total;
}

/// Fraction of points that disagree with their side's majority.
inline BigQ mis_loss(const std::vector<LabeledPoint>& pts, std::uint64_t j) {
  std::vector<std::int64_t> left, right;
  split_labels(pts, j, left, right);
  std::int64_t wrong = 0;
  for (const auto* side : {&left, &right}) {
    const auto plus = std::count(side->begin(), side->end(), 1);
    wrong += std::min<std::int64_t>(plus, static_cast<std::int64_t>(side->size()) - plus);
  }
  return BigQ(wrong, static_cast<std::int64_t>(pts.size()));
}

/// Smallest argmin over every j in [0, N].
template <class Loss>
std::pair<std::uint64_t, BigQ> opt(const std::vector<LabeledPoint>& pts, std::uint64_t N, Loss loss) {
  std::uint64_t best_j = 0;
  BigQ best = loss(pts, 0);
  for (std::uint64_t j = 1; j <= N; ++j) {
    const BigQ l = loss(pts, j);
    if (l < best) {
      best = l;
      best_j = j;
    }
  }
  return {best_j, best};
}

/// Weighted sum of updates with lo <= x <= hi, replayed from the log.
inline std::uint64_t range_sum(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& log, std::uint64_t lo,
                               std::uint64_t hi) {
  std::uint64_t total = 0;
  for (const auto& [x, w] : log) {
    if (x >= lo && x <= hi) total += w;
  }
  return total;
}

/// Reservoir size computed with 50-digit floats straight from the formula.
inline std::uint64_t reservoir_size(std::uint64_t N, std::uint64_t M, double epsilon) {
  const BigF n = BigF(std::max<std::uint64_t>(N, 2));
  const BigF tau = BigF(epsilon) / (BigF(16) * BigF(M) * BigF(M));
  const BigF k = ceil(BigF(4) * log(n) / tau);
  return std::max<std::uint64_t>(k.convert_to<std::uint64_t>(), 16);
}

inline std::uint64_t width(std::uint64_t k, std::uint32_t levels) {
  const BigF w = ceil(boost::math::constants::e<BigF>() * BigF(k) * BigF(2 * levels));
  return w.convert_to<std::uint64_t>();
}

inline std::uint32_t rows(std::uint64_t N, std::uint32_t c) {
  const BigF r = ceil(BigF(c) * log2(BigF(std::max<std::uint64_t>(N, 2))));
  return r.convert_to<std::uint32_t>();
}

/// Random stream for tests: regression labels in [0, M], or +-1.
inline std::vector<LabeledPoint> random_stream(std::mt19937_64& rng, std::size_t m, std::uint64_t N,
                                               std::int64_t M, bool classification) {
  std::uniform_int_distribution<std::int64_t> xd(1, static_cast<std::int64_t>(N));
  std::uniform_int_distribution<std::int64_t> yd(0, M);
  std::bernoulli_distribution coin(0.5);
  std::vector<LabeledPoint> pts(m);
  for (auto& p : pts) {
    p.x = xd(rng);
    p.y = classification ? (coin(rng) ? 1 : -1) : yd(rng);
  }
  return pts;
}

}  // namespace brute
