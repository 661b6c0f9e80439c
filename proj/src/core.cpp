#include "streamsplit/core.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace streamsplit {

namespace {

std::uint64_t checked_ceil(long double value, const char* what) {
  const long double c = std::ceil(value);
  if (!std::isfinite(c) || c > static_cast<long double>(kMaxDerivedCount)) {
    throw ConfigError(std::string("derived ") + what + " is too large to allocate");
  }
  return static_cast<std::uint64_t>(c);
}

}  // namespace

std::string_view to_string(LabelMode mode) {
  return mode == LabelMode::regression ? "regression" : "classification";
}

std::uint32_t dyadic_levels(std::uint64_t N) {
  return static_cast<std::uint32_t>(std::bit_width(N == 0 ? std::uint64_t{1} : N));
}

void validate_config(const ProblemConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    throw ConfigError("epsilon must lie in (0,1), got " + std::to_string(cfg.epsilon));
  }
  if (cfg.N == 0) throw ConfigError("N must be at least 1");
  if (cfg.failure_exponent == 0) throw ConfigError("failure exponent must be at least 1");
}

DerivedParams derive_params(const ProblemConfig& cfg) {
  validate_config(cfg);
  if (cfg.M == 0) throw ConfigError("derive_params requires M >= 1");

  const Rational eps(cfg.epsilon);  // exact value of the double
  const mpz_class M(static_cast<unsigned long>(cfg.M));
  const mpz_class M2 = M * M;

  DerivedParams p;
  p.tau = eps / Rational(16 * M2);
  p.beta = eps / Rational(32 * M2);
  p.tau.canonicalize();
  p.beta.canonicalize();

  // k = ceil(1/beta) = ceil(den/num), exact.
  mpz_class k;
  mpz_cdiv_q(k.get_mpz_t(), p.beta.get_den_mpz_t(), p.beta.get_num_mpz_t());
  if (k > mpz_class(static_cast<unsigned long>(kMaxDerivedCount))) {
    throw ConfigError("derived k is too large to allocate");
  }
  p.k = k.get_ui();

  const long double m_sq = static_cast<long double>(cfg.M) * static_cast<long double>(cfg.M);
  const long double inv_tau = 16.0L * m_sq / static_cast<long double>(cfg.epsilon);
  const long double n_floor2 = static_cast<long double>(std::max<std::uint64_t>(cfg.N, 2));
  p.K = std::max<std::uint64_t>(checked_ceil(4.0L * std::log(n_floor2) * inv_tau, "K"), 16);

  p.levels = dyadic_levels(cfg.N);
  const long double rows = std::ceil(static_cast<long double>(cfg.failure_exponent) * std::log2(n_floor2));
  p.rows = static_cast<std::uint32_t>(checked_ceil(rows, "rows"));
  p.width = checked_ceil(std::numbers::e_v<long double> * static_cast<long double>(p.k) * 2.0L *
                             static_cast<long double>(p.levels),
                         "width");
  return p;
}

void validate_stream_element(const LabeledPoint& p, const ProblemConfig& cfg, LabelMode mode,
                             std::size_t index) {
  if (p.x < 1 || static_cast<std::uint64_t>(p.x) > cfg.N) {
    throw ValidationError(ValidationError::Field::feature, index, p.x,
                          "element " + std::to_string(index) + ": feature " + std::to_string(p.x) +
                              " outside [1, " + std::to_string(cfg.N) + "]");
  }
  if (mode == LabelMode::regression) {
    if (p.y < 0 || static_cast<std::uint64_t>(p.y) > cfg.M) {
      throw ValidationError(ValidationError::Field::label, index, p.y,
                            "element " + std::to_string(index) + ": label " + std::to_string(p.y) +
                                " outside [0, " + std::to_string(cfg.M) + "]");
    }
  } else if (p.y != 1 && p.y != -1) {
    throw ValidationError(ValidationError::Field::label, index, p.y,
                          "element " + std::to_string(index) + ": label " + std::to_string(p.y) +
                              " is not -1 or +1");
  }
}

std::vector<LabeledPoint> reencode_to_unit(std::span<const LabeledPoint> points) {
  std::vector<LabeledPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(reencode_to_unit(p));
  return out;
}

}  // namespace streamsplit
