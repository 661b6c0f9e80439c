#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "streamsplit/core.hpp"
#include "streamsplit/oracle.hpp"
#include "streamsplit/rational.hpp"

namespace streamsplit {

enum class InstanceKind { regression, misclassification, gini };

std::string_view to_string(InstanceKind kind);
/// Accepts "reg"/"regression", "mis"/"misclassification", "gini".
InstanceKind parse_instance_kind(std::string_view text);
LossKind loss_for(InstanceKind kind);
LabelMode label_mode_for(InstanceKind kind);

/// Block-count helpers from a target additive error.
std::uint64_t regression_block_count(double epsilon_prime);  // floor(1/(1000 eps'))
std::uint64_t misclassification_block_count(double epsilon);  // floor(1/(100 eps))

/// A fully materialized lower-bound stream: Alice's n blocks of B copies of
/// (2k, label(z_k)) followed by Bob's two anchors of T copies each at 2i-1 and
/// 2i+1. The regression and Gini variants use T = 100 n^2 (m = 201 n^2), the
/// misclassification variant T = 4 n^2 (m = 9 n^2).
struct HardInstance {
  InstanceKind kind = InstanceKind::regression;
  std::uint64_t n = 0;
  std::vector<std::uint8_t> z;
  std::uint64_t i = 0;
  std::uint64_t B = 0;
  std::uint64_t T = 0;
  std::uint64_t N = 0;
  std::uint64_t m = 0;
  std::uint64_t j_minus = 0;
  std::uint64_t j_plus = 0;
  std::vector<LabeledPoint> stream;

  /// j_minus when z_i = 1, j_plus otherwise.
  std::uint64_t expected_minimizer() const { return z.at(i - 1) ? j_minus : j_plus; }
  std::uint64_t alice_points() const { return n * B; }
};

/// Element-by-element view of an instance without materializing it.
class InstanceStream {
 public:
  InstanceStream(InstanceKind kind, std::uint64_t n, std::vector<std::uint8_t> z, std::uint64_t i);

  std::optional<LabeledPoint> next();
  std::uint64_t size() const { return m_; }
  void reset() { pos_ = 0; }

 private:
  InstanceKind kind_;
  std::uint64_t n_;
  std::vector<std::uint8_t> z_;
  std::uint64_t i_;
  std::uint64_t B_;
  std::uint64_t T_;
  std::uint64_t m_;
  std::uint64_t pos_ = 0;
};

/// Shape-only instance (no stream) for (kind, n, z, i); validates inputs.
HardInstance describe_instance(InstanceKind kind, std::uint64_t n, std::span<const std::uint8_t> z, std::uint64_t i);

HardInstance gen_regression_instance(std::uint64_t n, std::span<const std::uint8_t> z, std::uint64_t i);
HardInstance gen_misclassification_instance(std::uint64_t n, std::span<const std::uint8_t> z, std::uint64_t i);
/// The regression construction with labels re-encoded 0 -> -1, 1 -> +1.
HardInstance gen_gini_instance(std::uint64_t n, std::span<const std::uint8_t> z, std::uint64_t i);
HardInstance gen_instance(InstanceKind kind, std::uint64_t n, std::span<const std::uint8_t> z, std::uint64_t i);

/// One verified inequality: `lhs relation rhs`, both exact.
struct CheckRecord {
  std::string name;
  std::string relation;  // ">=", "<=", ">", "=="
  Rational lhs;
  Rational rhs;
  std::optional<std::uint64_t> j;  // split the value was taken at, if any
  bool pass = false;
};

struct VerificationReport {
  InstanceKind kind = InstanceKind::regression;
  std::vector<CheckRecord> checks;

  bool passed() const;
  const CheckRecord* find(std::string_view name) const;
  /// Names of the failing checks.
  std::vector<std::string> failures() const;
};

/// Far splits >= 50/201, both near splits <= 1/201, gap > 1/(804n), side
/// means mu <= 1/101 and gamma >= 100/101, the gap agrees with the
/// block-merge formula, and the minimizer is j- iff z_i = 1.
VerificationReport verify_regression_instance(const HardInstance& inst);

/// Far splits >= 4/9, near <= 1/9, gap exactly 1/(9n) with the sign set by
/// z_i, and the minimizer is j- iff z_i = 1.
VerificationReport verify_misclassification_instance(const HardInstance& inst);

/// Gini = 2 * MSE (re-encoded) at every split, Gini gap = 2 * MSE gap, and the
/// doubled regression bounds (far >= 100/201, near <= 2/201,
/// gap > 1/(402n)) with the same minimizer rule.
VerificationReport verify_gini_instance(const HardInstance& inst);

VerificationReport verify_instance(const HardInstance& inst);

}  // namespace streamsplit
