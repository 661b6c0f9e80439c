#include "streamsplit/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace streamsplit {

namespace {

constexpr std::uint64_t kMaxBlockCount = std::uint64_t{1} << 20;

std::uint64_t anchor_size(InstanceKind kind, std::uint64_t n) {
  return kind == InstanceKind::misclassification ? 4 * n * n : 100 * n * n;
}

Label alice_label(InstanceKind kind, std::uint8_t bit) {
  if (kind == InstanceKind::regression) return bit;
  return bit ? 1 : -1;
}

Label low_anchor_label(InstanceKind kind) { return kind == InstanceKind::regression ? 0 : -1; }

Rational ratio(std::uint64_t p, std::uint64_t q) { return Rational(rational_from_uint(p) / rational_from_uint(q)); }

Rational abs_value(const Rational& r) { return r < 0 ? Rational(-r) : r; }

CheckRecord make_check(std::string name, std::string relation, Rational lhs, Rational rhs,
                       std::optional<std::uint64_t> j = std::nullopt) {
  bool pass = false;
  if (relation == ">=") pass = lhs >= rhs;
  else if (relation == "<=") pass = lhs <= rhs;
  else if (relation == ">") pass = lhs > rhs;
  else if (relation == "==") pass = lhs == rhs;
  return CheckRecord{std::move(name), std::move(relation), std::move(lhs), std::move(rhs), j, pass};
}

void require_kind(const HardInstance& inst, InstanceKind kind) {
  if (inst.kind != kind) {
    throw ConfigError("instance kind is " + std::string(to_string(inst.kind)) + ", expected " +
                      std::string(to_string(kind)));
  }
}

/// Bounds shared by every construction: far splits stay above `far`, both
/// near splits below `near`, |L(j+) - L(j-)| beats `gap` (strictly or
/// exactly), and the exact argmin lands on the expected side.
struct SeparationBounds {
  Rational far;
  Rational near;
  Rational gap;
  bool gap_exact = false;
};

void add_separation_checks(const HardInstance& inst, const std::vector<Rational>& curve,
                           const SeparationBounds& bounds, VerificationReport& report) {
  std::optional<std::uint64_t> far_j;
  for (std::uint64_t j = 0; j < curve.size(); ++j) {
    if (j == inst.j_minus || j == inst.j_plus) continue;
    if (!far_j || curve[j] < curve[*far_j]) far_j = j;
  }
  if (far_j) report.checks.push_back(make_check("far_splits", ">=", curve[*far_j], bounds.far, far_j));

  report.checks.push_back(make_check("near_split_j_minus", "<=", curve[inst.j_minus], bounds.near, inst.j_minus));
  report.checks.push_back(make_check("near_split_j_plus", "<=", curve[inst.j_plus], bounds.near, inst.j_plus));

  const Rational gap = abs_value(curve[inst.j_plus] - curve[inst.j_minus]);
  report.checks.push_back(make_check("gap", bounds.gap_exact ? "==" : ">", gap, bounds.gap));

  std::uint64_t argmin = 0;
  for (std::uint64_t j = 1; j < curve.size(); ++j) {
    if (curve[j] < curve[argmin]) argmin = j;
  }
  report.checks.push_back(make_check("minimizer_reveals_bit", "==", rational_from_uint(argmin),
                                     rational_from_uint(inst.expected_minimizer()), argmin));
}

void add_length_check(const HardInstance& inst, VerificationReport& report) {
  report.checks.push_back(make_check("stream_length", "==", rational_from_uint(inst.stream.size()),
                                     rational_from_uint(inst.m)));
}

void check_instance_shape(const HardInstance& inst) {
  if (inst.n == 0 || inst.i < 1 || inst.i > inst.n || inst.z.size() != inst.n) {
    throw ConfigError("instance metadata is inconsistent");
  }
  if (inst.j_minus != 2 * inst.i - 1 || inst.j_plus != 2 * inst.i || inst.N != 2 * inst.n + 1) {
    throw ConfigError("instance splits do not match its index");
  }
}

}  // namespace

std::string_view to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::regression: return "reg";
    case InstanceKind::misclassification: return "mis";
    case InstanceKind::gini: return "gini";
  }
  return "?";
}

InstanceKind parse_instance_kind(std::string_view text) {
  if (text == "reg" || text == "regression") return InstanceKind::regression;
  if (text == "mis" || text == "misclassification") return InstanceKind::misclassification;
  if (text == "gini") return InstanceKind::gini;
  throw ConfigError("unknown instance kind '" + std::string(text) + "'");
}

LossKind loss_for(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::regression: return LossKind::mse;
    case InstanceKind::misclassification: return LossKind::misclassification;
    case InstanceKind::gini: return LossKind::gini;
  }
  return LossKind::mse;
}

LabelMode label_mode_for(InstanceKind kind) {
  return kind == InstanceKind::regression ? LabelMode::regression : LabelMode::classification;
}

std::uint64_t regression_block_count(double epsilon_prime) {
  if (!(epsilon_prime > 0.0)) throw ConfigError("epsilon' must be positive");
  return static_cast<std::uint64_t>(std::floor(1.0 / (1000.0 * epsilon_prime)));
}

std::uint64_t misclassification_block_count(double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  return static_cast<std::uint64_t>(std::floor(1.0 / (100.0 * epsilon)));
}

HardInstance describe_instance(InstanceKind kind, std::uint64_t n, std::span<const std::uint8_t> z, std::uint64_t i) {
  if (n == 0 || n > kMaxBlockCount) throw ConfigError("block count n must lie in [1, 2^20]");
  if (z.size() != n) {
    throw ConfigError("bit vector has length " + std::to_string(z.size()) + ", expected " + std::to_string(n));
  }
  if (std::any_of(z.begin(), z.end(), [](std::uint8_t b) { return b > 1; })) {
    throw ConfigError("bit vector entries must be 0 or 1");
  }
  if (i < 1 || i > n) throw ConfigError("index i must lie in [1, " + std::to_string(n) + "]");
  HardInstance inst;
  inst.kind = kind;
  inst.n = n;
  inst.z.assign(z.begin(), z.end());
  inst.i = i;
  inst.B = n;
  inst.T = anchor_size(kind, n);
  inst.N = 2 * n + 1;
  inst.m = n * inst.B + 2 * inst.T;
  inst.j_minus = 2 * i - 1;
  inst.j_plus = 2 * i;
  return inst;
}

InstanceStream::InstanceStream(InstanceKind kind, std::uint64_t n, std::vector<std::uint8_t> z, std::uint64_t i)
    : kind_(kind), n_(n), z_(std::move(z)), i_(i) {
  const HardInstance shape = describe_instance(kind, n, z_, i);
  B_ = shape.B;
  T_ = shape.T;
  m_ = shape.m;
}

std::optional<LabeledPoint> InstanceStream::next() {
  if (pos_ >= m_) return std::nullopt;
  const std::uint64_t t = pos_++;
  const std::uint64_t alice = n_ * B_;
  if (t < alice) {
    const std::uint64_t k = t / B_ + 1;
    return LabeledPoint{static_cast<FeatureValue>(2 * k), alice_label(kind_, z_[k - 1])};
  }
  if (t - alice < T_) return LabeledPoint{static_cast<FeatureValue>(2 * i_ - 1), low_anchor_label(kind_)};
  return LabeledPoint{static_cast<FeatureValue>(2 * i_ + 1), 1};
}

HardInstance gen_instance(InstanceKind kind, std::uint64_t n, std::span<const std::uint8_t> z, std::uint64_t i) {
  HardInstance inst = describe_instance(kind, n, z, i);
  InstanceStream src(kind, n, inst.z, i);
  inst.stream.reserve(static_cast<std::size_t>(inst.m));
  while (auto p = src.next()) inst.stream.push_back(*p);
  return inst;
}

HardInstance gen_regression_instance(std::uint64_t n, std::span<const std::uint8_t> z, std::uint64_t i) {
  return gen_instance(InstanceKind::regression, n, z, i);
}

HardInstance gen_misclassification_instance(std::uint64_t n, std::span<const std::uint8_t> z, std::uint64_t i) {
  return gen_instance(InstanceKind::misclassification, n, z, i);
}

HardInstance gen_gini_instance(std::uint64_t n, std::span<const std::uint8_t> z, std::uint64_t i) {
  return gen_instance(InstanceKind::gini, n, z, i);
}

bool VerificationReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

const CheckRecord* VerificationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<std::string> VerificationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.pass) out.push_back(c.name);
  }
  return out;
}

VerificationReport verify_regression_instance(const HardInstance& inst) {
  require_kind(inst, InstanceKind::regression);
  check_instance_shape(inst);
  VerificationReport report{InstanceKind::regression, {}};
  add_length_check(inst, report);

  const auto agg = AggregatedStream::from_points(inst.stream, inst.N, LabelMode::regression);
  const auto curve = exact_loss_curve(agg, LossKind::mse);
  add_separation_checks(inst, curve, {ratio(50, 201), ratio(1, 201), ratio(1, 804 * inst.n), false}, report);

  // Side means around the block at x = 2i.
  const std::uint64_t mid = 2 * inst.i;
  const RangeMoments left = agg.range(1, mid - 1);
  const RangeMoments right = agg.range(mid + 1, inst.N);
  const Rational mu = left.n > 0 ? Rational(rational_from_int(left.s) / rational_from_int(left.n)) : Rational(1);
  const Rational gamma = right.n > 0 ? Rational(rational_from_int(right.s) / rational_from_int(right.n)) : Rational(0);
  report.checks.push_back(make_check("left_mean_bound", "<=", mu, ratio(1, 101)));
  report.checks.push_back(make_check("right_mean_bound", ">=", gamma, ratio(100, 101)));

  // L(j+) - L(j-) recomputed by merging the middle block into either side.
  const Rational v(inst.z[inst.i - 1]);
  const auto a = static_cast<std::uint64_t>(left.n);
  const auto b = static_cast<std::uint64_t>(right.n);
  const Rational predicted =
      (block_merge_increase(a, mu, inst.B, v) - block_merge_increase(b, gamma, inst.B, v)) / rational_from_uint(inst.m);
  report.checks.push_back(
      make_check("block_merge_gap", "==", Rational(curve[inst.j_plus] - curve[inst.j_minus]), predicted));
  return report;
}

VerificationReport verify_misclassification_instance(const HardInstance& inst) {
  require_kind(inst, InstanceKind::misclassification);
  check_instance_shape(inst);
  VerificationReport report{InstanceKind::misclassification, {}};
  add_length_check(inst, report);

  const auto agg = AggregatedStream::from_points(inst.stream, inst.N, LabelMode::classification);
  const auto curve = exact_loss_curve(agg, LossKind::misclassification);
  add_separation_checks(inst, curve, {ratio(4, 9), ratio(1, 9), ratio(1, 9 * inst.n), true}, report);

  const Rational step = ratio(inst.B, inst.m);
  const Rational expected = inst.z[inst.i - 1] ? step : Rational(-step);
  report.checks.push_back(
      make_check("gap_direction", "==", Rational(curve[inst.j_plus] - curve[inst.j_minus]), expected));
  return report;
}

VerificationReport verify_gini_instance(const HardInstance& inst) {
  require_kind(inst, InstanceKind::gini);
  check_instance_shape(inst);
  VerificationReport report{InstanceKind::gini, {}};
  add_length_check(inst, report);

  const auto gini_agg = AggregatedStream::from_points(inst.stream, inst.N, LabelMode::classification);
  const auto unit = reencode_to_unit(inst.stream);
  const auto mse_agg = AggregatedStream::from_points(unit, inst.N, LabelMode::regression);
  const auto gini = exact_loss_curve(gini_agg, LossKind::gini);
  const auto mse = exact_loss_curve(mse_agg, LossKind::mse);

  std::uint64_t witness = inst.j_minus;
  for (std::uint64_t j = 0; j < gini.size(); ++j) {
    if (gini[j] != 2 * mse[j]) {
      witness = j;
      break;
    }
  }
  report.checks.push_back(make_check("gini_equals_twice_mse", "==", gini[witness], Rational(2 * mse[witness]), witness));

  const Rational gini_gap = abs_value(gini[inst.j_plus] - gini[inst.j_minus]);
  const Rational mse_gap = abs_value(mse[inst.j_plus] - mse[inst.j_minus]);
  report.checks.push_back(make_check("gap_doubling", "==", gini_gap, Rational(2 * mse_gap)));

  add_separation_checks(inst, gini, {ratio(100, 201), ratio(2, 201), ratio(1, 402 * inst.n), false}, report);
  return report;
}

VerificationReport verify_instance(const HardInstance& inst) {
  switch (inst.kind) {
    case InstanceKind::regression: return verify_regression_instance(inst);
    case InstanceKind::misclassification: return verify_misclassification_instance(inst);
    case InstanceKind::gini: return verify_gini_instance(inst);
  }
  throw ConfigError("unknown instance kind");
}

}  // namespace streamsplit
