#include "streamsplit/oracle.hpp"

#include <algorithm>
#include <string>

namespace streamsplit {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw ConfigError("exact aggregate overflows 64 bits");
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw ConfigError("exact aggregate overflows 64 bits");
  return out;
}

void check_split(const AggregatedStream& agg, std::uint64_t j) {
  if (j > agg.N()) throw ConfigError("split " + std::to_string(j) + " outside [0, " + std::to_string(agg.N()) + "]");
  if (agg.m() == 0) throw EmptyStreamError();
}

void require_classification(const AggregatedStream& agg) {
  if (agg.mode() != LabelMode::classification) {
    throw ConfigError("classification loss requested on a regression aggregation");
  }
}

Rational gini_term(std::int64_t a, std::int64_t b) {
  if (a + b == 0) return Rational(0);
  return Rational(2 * rational_from_int(a) * rational_from_int(b) / rational_from_int(a + b));
}

}  // namespace

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::mse: return "mse";
    case LossKind::gini: return "gini";
    case LossKind::misclassification: return "mis";
  }
  return "?";
}

LabelMode label_mode_for(LossKind kind) {
  return kind == LossKind::mse ? LabelMode::regression : LabelMode::classification;
}

RangeMoments& RangeMoments::operator+=(const RangeMoments& o) {
  n = checked_add(n, o.n);
  s = checked_add(s, o.s);
  q = checked_add(q, o.q);
  plus = checked_add(plus, o.plus);
  minus = checked_add(minus, o.minus);
  return *this;
}

RangeMoments& RangeMoments::operator-=(const RangeMoments& o) {
  n -= o.n;
  s -= o.s;
  q -= o.q;
  plus -= o.plus;
  minus -= o.minus;
  return *this;
}

AggregatedStream::AggregatedStream(std::uint64_t N, LabelMode mode) : N_(N), mode_(mode) {
  if (N == 0) throw ConfigError("N must be at least 1");
  if (N <= kDenseLimit) dense_.resize(N);
}

AggregatedStream AggregatedStream::from_points(std::span<const LabeledPoint> points, std::uint64_t N,
                                               LabelMode mode) {
  AggregatedStream agg(N, mode);
  for (const auto& p : points) agg.add(p);
  agg.finalize();
  return agg;
}

void AggregatedStream::add(const LabeledPoint& p) {
  if (finalized_) throw ConfigError("aggregation already finalized");
  const std::size_t index = static_cast<std::size_t>(total_.n);
  if (p.x < 1 || static_cast<std::uint64_t>(p.x) > N_) {
    throw ValidationError(ValidationError::Field::feature, index, p.x,
                          "element " + std::to_string(index) + ": feature " + std::to_string(p.x) +
                              " outside [1, " + std::to_string(N_) + "]");
  }
  RangeMoments d;
  d.n = 1;
  if (mode_ == LabelMode::classification) {
    if (p.y != 1 && p.y != -1) {
      throw ValidationError(ValidationError::Field::label, index, p.y,
                            "element " + std::to_string(index) + ": label " + std::to_string(p.y) +
                                " is not -1 or +1");
    }
    const std::int64_t z = (p.y + 1) / 2;
    d.s = z;
    d.q = z;
    d.plus = z;
    d.minus = 1 - z;
  } else {
    if (p.y < 0) {
      throw ValidationError(ValidationError::Field::label, index, p.y,
                            "element " + std::to_string(index) + ": negative label " + std::to_string(p.y));
    }
    d.s = p.y;
    d.q = checked_mul(p.y, p.y);
  }
  const auto x = static_cast<std::uint64_t>(p.x);
  if (!dense_.empty()) {
    dense_[x - 1] += d;
  } else {
    sparse_[x] += d;
  }
  total_ += d;
}

void AggregatedStream::finalize() {
  if (finalized_) return;
  finalized_ = true;
  if (!dense_.empty()) {
    for (std::uint64_t v = 0; v < dense_.size(); ++v) {
      if (dense_[v].n == 0) continue;
      values_.push_back(v + 1);
      per_value_.push_back(dense_[v]);
    }
    dense_.clear();
    dense_.shrink_to_fit();
  } else {
    for (const auto& [v, mom] : sparse_) {
      values_.push_back(v);
      per_value_.push_back(mom);
    }
    sparse_.clear();
  }
  prefix_.assign(per_value_.size() + 1, RangeMoments{});
  for (std::size_t t = 0; t < per_value_.size(); ++t) {
    prefix_[t + 1] = prefix_[t];
    prefix_[t + 1] += per_value_[t];
  }
}

void AggregatedStream::require_finalized() const {
  if (!finalized_) throw ConfigError("aggregation must be finalized before querying");
}

RangeMoments AggregatedStream::prefix(std::uint64_t j) const {
  require_finalized();
  const auto it = std::upper_bound(values_.begin(), values_.end(), j);
  return prefix_[static_cast<std::size_t>(it - values_.begin())];
}

RangeMoments AggregatedStream::range(std::uint64_t lo, std::uint64_t hi) const {
  if (lo > hi) return {};
  RangeMoments r = prefix(hi);
  if (lo > 0) r -= prefix(lo - 1);
  return r;
}

Rational sse_of(const RangeMoments& r) {
  if (r.n == 0) return Rational(0);
  const Rational s = rational_from_int(r.s);
  Rational out = rational_from_int(r.q) - s * s / rational_from_int(r.n);
  out.canonicalize();
  return out;
}

Rational exact_sse(const AggregatedStream& agg, std::uint64_t lo, std::uint64_t hi) {
  if (hi > agg.N()) throw ConfigError("range end outside the domain");
  return sse_of(agg.range(lo, hi));
}

MseSplitDetail exact_mse_detail(const AggregatedStream& agg, std::uint64_t j) {
  check_split(agg, j);
  const RangeMoments left = agg.prefix(j);
  RangeMoments right = agg.total();
  right -= left;
  MseSplitDetail d;
  d.loss = (sse_of(left) + sse_of(right)) / rational_from_uint(agg.m());
  d.loss.canonicalize();
  if (left.n > 0) d.left_mean = Rational(rational_from_int(left.s) / rational_from_int(left.n));
  if (right.n > 0) d.right_mean = Rational(rational_from_int(right.s) / rational_from_int(right.n));
  return d;
}

Rational exact_mse_loss(const AggregatedStream& agg, std::uint64_t j) { return exact_mse_detail(agg, j).loss; }

Rational exact_gini_loss(const AggregatedStream& agg, std::uint64_t j) {
  require_classification(agg);
  check_split(agg, j);
  const RangeMoments left = agg.prefix(j);
  RangeMoments right = agg.total();
  right -= left;
  Rational out = (gini_term(left.plus, left.minus) + gini_term(right.plus, right.minus)) /
                 rational_from_uint(agg.m());
  out.canonicalize();
  return out;
}

Rational exact_mis_loss(const AggregatedStream& agg, std::uint64_t j) {
  require_classification(agg);
  check_split(agg, j);
  const RangeMoments left = agg.prefix(j);
  RangeMoments right = agg.total();
  right -= left;
  const std::int64_t wrong = std::min(left.plus, left.minus) + std::min(right.plus, right.minus);
  Rational out(rational_from_int(wrong) / rational_from_uint(agg.m()));
  out.canonicalize();
  return out;
}

Rational exact_loss(const AggregatedStream& agg, LossKind kind, std::uint64_t j) {
  switch (kind) {
    case LossKind::mse: return exact_mse_loss(agg, j);
    case LossKind::gini: return exact_gini_loss(agg, j);
    case LossKind::misclassification: return exact_mis_loss(agg, j);
  }
  throw ConfigError("unknown loss kind");
}

OptResult exact_opt(const AggregatedStream& agg, LossKind kind) {
  if (agg.m() == 0) throw EmptyStreamError();
  // The loss is constant on [v, next distinct value), so the smallest
  // minimizer is 0 or one of the distinct feature values.
  OptResult best{Split{0}, exact_loss(agg, kind, 0)};
  for (std::uint64_t v : agg.distinct_values()) {
    Rational l = exact_loss(agg, kind, v);
    if (l < best.loss) best = {Split{v}, std::move(l)};
  }
  return best;
}

std::vector<Rational> exact_loss_curve(const AggregatedStream& agg, LossKind kind) {
  std::vector<Rational> curve;
  curve.reserve(static_cast<std::size_t>(agg.N() + 1));
  for (std::uint64_t j = 0; j <= agg.N(); ++j) curve.push_back(exact_loss(agg, kind, j));
  return curve;
}

Rational sum_squared_deviation(std::span<const Rational> ys, const Rational& a) {
  Rational total(0);
  for (const auto& y : ys) {
    const Rational d = y - a;
    total += d * d;
  }
  return total;
}

Rational mean_of(std::span<const Rational> ys) {
  if (ys.empty()) throw EmptyStreamError();
  Rational total(0);
  for (const auto& y : ys) total += y;
  return total / rational_from_uint(ys.size());
}

Rational multiset_sse(std::span<const Rational> ys) {
  if (ys.empty()) return Rational(0);
  return sum_squared_deviation(ys, mean_of(ys));
}

Rational block_merge_increase(std::uint64_t size, const Rational& mu, std::uint64_t block, const Rational& v) {
  if (size + block == 0) return Rational(0);
  const Rational d = mu - v;
  return rational_from_uint(size) * rational_from_uint(block) / rational_from_uint(size + block) * d * d;
}

}  // namespace streamsplit
