#include <gtest/gtest.h>

#include "brute_force.hpp"
#include "streamsplit/core.hpp"

namespace ss = streamsplit;

namespace {

ss::ProblemConfig cfg(std::uint64_t N, std::uint64_t M, double eps) {
  ss::ProblemConfig c;
  c.N = N;
  c.M = M;
  c.epsilon = eps;
  return c;
}

}  // namespace

TEST(DeriveParams, HalfEpsilonUnitLabels) {
  const auto p = ss::derive_params(cfg(2, 1, 0.5));
  EXPECT_EQ(p.tau, ss::Rational(1, 32));
  EXPECT_EQ(p.beta, ss::Rational(1, 64));
  EXPECT_EQ(p.k, 64u);
  EXPECT_EQ(p.levels, 2u);
  EXPECT_EQ(p.rows, 3u);
}

TEST(DeriveParams, SinglePointDomainHasOneLevel) {
  EXPECT_EQ(ss::derive_params(cfg(1, 1, 0.5)).levels, 1u);
}

TEST(DeriveParams, ReservoirSizeMatchesHighPrecision) {
  const auto p = ss::derive_params(cfg(1024, 4, 0.1));
  EXPECT_EQ(p.tau, ss::Rational(0.1) / 256);
  EXPECT_EQ(p.K, brute::reservoir_size(1024, 4, 0.1));
  EXPECT_EQ(p.K, 70979u);  // frozen from the 50-digit evaluation
  EXPECT_EQ(p.k, 5120u);
  EXPECT_EQ(p.levels, 11u);
  EXPECT_EQ(p.rows, 30u);
  EXPECT_EQ(p.width, brute::width(p.k, p.levels));
  EXPECT_EQ(p.width, 306188u);
}

TEST(DeriveParams, AgreesWithHighPrecisionOnAGrid) {
  for (std::uint64_t N : {1ull, 2ull, 3ull, 7ull, 100ull, 1000ull, 4096ull, 1000003ull}) {
    for (std::uint64_t M : {1ull, 2ull, 4ull, 17ull}) {
      for (double eps : {0.9, 0.5, 0.2, 0.1, 0.05, 0.013}) {
        for (std::uint32_t c : {1u, 3u}) {
          auto config = cfg(N, M, eps);
          config.failure_exponent = c;
          const auto p = ss::derive_params(config);
          SCOPED_TRACE(::testing::Message() << "N=" << N << " M=" << M << " eps=" << eps);
          EXPECT_EQ(p.K, brute::reservoir_size(N, M, eps));
          EXPECT_EQ(p.rows, brute::rows(N, c));
          EXPECT_EQ(p.width, brute::width(p.k, p.levels));
          EXPECT_GE(ss::Rational(p.k), 1 / p.beta);
          EXPECT_LT(ss::Rational(p.k) - 1, 1 / p.beta);
          EXPECT_EQ(p.tau, 2 * p.beta);
        }
      }
    }
  }
}

TEST(DeriveParams, FloorOfSixteenOnTinyDomains) {
  EXPECT_EQ(ss::derive_params(cfg(1, 1, 0.99)).K, std::max<std::uint64_t>(16, brute::reservoir_size(1, 1, 0.99)));
  EXPECT_GE(ss::derive_params(cfg(2, 1, 0.99)).K, 16u);
}

TEST(DeriveParams, DeterministicAndMonotoneInEpsilon) {
  EXPECT_EQ(ss::derive_params(cfg(500, 3, 0.1)), ss::derive_params(cfg(500, 3, 0.1)));
  std::uint64_t prev_K = 0;
  std::uint64_t prev_k = 0;
  for (double eps : {0.9, 0.7, 0.4, 0.2, 0.1, 0.05, 0.02}) {
    const auto p = ss::derive_params(cfg(500, 3, eps));
    EXPECT_GE(p.K, prev_K);
    EXPECT_GE(p.k, prev_k);
    prev_K = p.K;
    prev_k = p.k;
  }
}

TEST(DeriveParams, RejectsBadConfigs) {
  EXPECT_THROW(ss::derive_params(cfg(10, 1, 0.0)), ss::ConfigError);
  EXPECT_THROW(ss::derive_params(cfg(10, 1, 1.0)), ss::ConfigError);
  EXPECT_THROW(ss::derive_params(cfg(10, 1, -0.5)), ss::ConfigError);
  EXPECT_THROW(ss::derive_params(cfg(0, 1, 0.5)), ss::ConfigError);
  EXPECT_THROW(ss::derive_params(cfg(10, 0, 0.5)), ss::ConfigError);
  auto c = cfg(10, 1, 0.5);
  c.failure_exponent = 0;
  EXPECT_THROW(ss::derive_params(c), ss::ConfigError);
}

TEST(DeriveParams, HugeInputsAreRejectedNotWrapped) {
  const std::uint64_t big = std::uint64_t{1} << 63;
  EXPECT_THROW(ss::derive_params(cfg(big, big, 0.5)), ss::ConfigError);
  const auto p = ss::derive_params(cfg(big, 1, 0.5));
  EXPECT_EQ(p.levels, 64u);
  EXPECT_EQ(p.rows, 3u * 63u);
}

TEST(Validate, AcceptsInRangeRegressionPoint) {
  EXPECT_NO_THROW(ss::validate_stream_element({5, 2}, cfg(10, 3, 0.1), ss::LabelMode::regression));
}

TEST(Validate, RejectsFeatureOutsideDomain) {
  try {
    ss::validate_stream_element({0, 1}, cfg(10, 3, 0.1), ss::LabelMode::regression, 7);
    FAIL();
  } catch (const ss::ValidationError& e) {
    EXPECT_EQ(e.field(), ss::ValidationError::Field::feature);
    EXPECT_EQ(e.index(), 7u);
    EXPECT_EQ(e.value(), 0);
  }
  EXPECT_THROW(ss::validate_stream_element({11, 1}, cfg(10, 3, 0.1), ss::LabelMode::regression),
               ss::ValidationError);
}

TEST(Validate, ClassificationNeedsPlusMinusOne) {
  try {
    ss::validate_stream_element({3, 0}, cfg(10, 1, 0.1), ss::LabelMode::classification, 2);
    FAIL();
  } catch (const ss::ValidationError& e) {
    EXPECT_EQ(e.field(), ss::ValidationError::Field::label);
    EXPECT_EQ(e.index(), 2u);
  }
  EXPECT_NO_THROW(ss::validate_stream_element({3, -1}, cfg(10, 1, 0.1), ss::LabelMode::classification));
}

TEST(Validate, RegressionLabelBounds) {
  EXPECT_THROW(ss::validate_stream_element({3, 4}, cfg(10, 3, 0.1), ss::LabelMode::regression),
               ss::ValidationError);
  EXPECT_THROW(ss::validate_stream_element({3, -1}, cfg(10, 3, 0.1), ss::LabelMode::regression),
               ss::ValidationError);
}

TEST(Reencode, MapsToUnitInterval) {
  EXPECT_EQ(ss::reencode_to_unit(ss::LabeledPoint{4, -1}), (ss::LabeledPoint{4, 0}));
  EXPECT_EQ(ss::reencode_to_unit(ss::LabeledPoint{4, 1}), (ss::LabeledPoint{4, 1}));
}

TEST(Rational, FractionStrings) {
  EXPECT_EQ(ss::to_fraction_string(ss::Rational(8, 3)), "8/3");
  EXPECT_EQ(ss::to_fraction_string(ss::Rational(0)), "0/1");
  EXPECT_EQ(ss::to_fraction_string(ss::Rational(-4, 2)), "-2/1");
  EXPECT_EQ(ss::parse_fraction("50/201"), ss::Rational(50, 201));
  EXPECT_EQ(ss::parse_fraction("7"), ss::Rational(7));
  EXPECT_THROW(ss::parse_fraction("x/2"), ss::FormatError);
  EXPECT_THROW(ss::parse_fraction("1/0"), ss::FormatError);
  EXPECT_EQ(ss::rational_from_int(INT64_MIN), ss::Rational("-9223372036854775808"));
  EXPECT_EQ(ss::rational_from_uint(UINT64_MAX), ss::Rational("18446744073709551615"));
}
