#include <gtest/gtest.h>

#include <algorithm>

#include "streamsplit/bench.hpp"

namespace ss = streamsplit;

namespace {

ss::SyntheticStreamSpec spec(ss::GeneratorKind kind, std::uint64_t m, std::uint64_t N, std::uint64_t M,
                             std::uint64_t seed = 1) {
  ss::SyntheticStreamSpec s;
  s.kind = kind;
  s.m = m;
  s.N = N;
  s.M = M;
  s.seed = seed;
  return s;
}

ss::ProblemConfig cfg(std::uint64_t N, std::uint64_t M, double eps) {
  ss::ProblemConfig c;
  c.N = N;
  c.M = M;
  c.epsilon = eps;
  return c;
}

}  // namespace

TEST(Generate, DeterministicPerSeed) {
  for (auto kind : {ss::GeneratorKind::uniform, ss::GeneratorKind::two_cluster, ss::GeneratorKind::zipf}) {
    EXPECT_EQ(ss::generate(spec(kind, 300, 50, 3, 9)), ss::generate(spec(kind, 300, 50, 3, 9)));
    EXPECT_NE(ss::generate(spec(kind, 300, 50, 3, 9)), ss::generate(spec(kind, 300, 50, 3, 10)));
  }
}

TEST(Generate, EmptyUniformStream) { EXPECT_TRUE(ss::generate(spec(ss::GeneratorKind::uniform, 0, 10, 2)).empty()); }

TEST(Generate, StreamsAlwaysValidate) {
  for (auto kind : {ss::GeneratorKind::uniform, ss::GeneratorKind::two_cluster, ss::GeneratorKind::zipf}) {
    for (auto mode : {ss::LabelMode::regression, ss::LabelMode::classification}) {
      auto s = spec(kind, 1000, 77, 5);
      s.mode = mode;
      s.noise = 0.1;
      const auto c = cfg(77, 5, 0.5);
      std::size_t t = 0;
      for (const auto& p : ss::generate(s)) EXPECT_NO_THROW(ss::validate_stream_element(p, c, mode, t++));
    }
  }
}

TEST(Generate, TwoClusterIsSeparableAtHalf) {
  const auto s = spec(ss::GeneratorKind::two_cluster, 2000, 100, 4);
  const auto pts = ss::generate(s);
  for (const auto& p : pts) EXPECT_EQ(p.y, p.x <= 50 ? 0 : 4);
  const auto agg = ss::AggregatedStream::from_points(pts, 100, ss::LabelMode::regression);
  const auto opt = ss::exact_opt(agg, ss::LossKind::mse);
  EXPECT_EQ(opt.split.j, 50u);
  EXPECT_EQ(opt.loss, 0);
}

TEST(Generate, PlantedIntervalHoldsMoreThanTheFraction) {
  auto s = spec(ss::GeneratorKind::planted_heavy_interval, 10000, 1000, 2);
  s.interval_lo = 300;
  s.interval_hi = 310;
  s.planted_fraction = 0.004;
  const auto pts = ss::generate(s);
  const auto inside = std::count_if(pts.begin(), pts.end(), [](const auto& p) { return p.x > 300 && p.x <= 310; });
  EXPECT_EQ(static_cast<std::uint64_t>(inside), ss::planted_count(s));
  EXPECT_GT(static_cast<double>(inside), 0.004 * 10000);
  s.interval_hi = 300;
  EXPECT_THROW(ss::generate(s), ss::ConfigError);
}

TEST(Measure, SeparableStreamHasZeroRegret) {
  const auto m = ss::measure(spec(ss::GeneratorKind::two_cluster, 5000, 200, 4), cfg(200, 4, 0.2), ss::LossKind::mse);
  EXPECT_EQ(m.regret, 0);
  EXPECT_TRUE(m.success);
  EXPECT_EQ(m.m, 5000u);
  EXPECT_GT(m.counters_per_update, 0u);
}

TEST(Measure, ConstantLabelsHaveZeroRegret) {
  const auto m = ss::measure(spec(ss::GeneratorKind::uniform, 1000, 40, 0), cfg(40, 0, 0.2), ss::LossKind::mse);
  EXPECT_EQ(m.regret, 0);
  EXPECT_EQ(m.j_hat.j, 0u);
}

TEST(Measure, ReservoirHoldingEverythingAlwaysSucceeds) {
  // K >= m: every distinct x and x - 1 is a candidate.
  const auto c = cfg(64, 2, 0.3);
  ASSERT_GE(ss::derive_params(c).K, 500u);
  const auto trials = ss::run_trials(spec(ss::GeneratorKind::uniform, 500, 64, 2), c, ss::LossKind::mse, 20);
  EXPECT_EQ(ss::summarize(trials, 0.3).success_rate, 1.0);
}

TEST(Measure, GiniNeedsClassificationStream) {
  EXPECT_THROW(ss::measure(spec(ss::GeneratorKind::uniform, 10, 10, 1), cfg(10, 1, 0.2), ss::LossKind::gini),
               ss::ConfigError);
  auto s = spec(ss::GeneratorKind::two_cluster, 2000, 30, 1);
  s.mode = ss::LabelMode::classification;
  const auto m = ss::measure(s, cfg(30, 1, 0.2), ss::LossKind::gini);
  EXPECT_TRUE(m.success);
}

TEST(MeasureInstance, RegressionInstanceRecoversTheBit) {
  const std::vector<std::uint8_t> z{1, 0, 0, 1, 1};
  for (std::uint64_t i = 1; i <= 5; ++i) {
    const auto inst = ss::gen_regression_instance(5, z, i);
    const auto r = ss::measure_instance(inst, cfg(inst.N, 1, 2e-4));
    EXPECT_TRUE(r.success);
    EXPECT_TRUE(r.bit_recovered);
  }
}

TEST(RunTrials, ThreadCountDoesNotChangeResults) {
  const auto s = spec(ss::GeneratorKind::uniform, 2000, 100, 3, 42);
  const auto c = cfg(100, 3, 0.3);
  const auto a = ss::run_trials(s, c, ss::LossKind::mse, 6, 1);
  const auto b = ss::run_trials(s, c, ss::LossKind::mse, 6, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t t = 0; t < a.size(); ++t) {
    EXPECT_EQ(a[t].j_hat, b[t].j_hat);
    EXPECT_EQ(a[t].regret, b[t].regret);
  }
}

TEST(RunTrials, WorkerErrorsPropagate) {
  auto s = spec(ss::GeneratorKind::planted_heavy_interval, 100, 10, 1);
  s.interval_lo = 5;
  s.interval_hi = 5;  // empty interval
  EXPECT_THROW(ss::run_trials(s, cfg(10, 1, 0.3), ss::LossKind::mse, 4, 2), ss::ConfigError);
}

TEST(Summarize, AggregatesRates) {
  std::vector<ss::TrialMetrics> t(4);
  t[0].success = t[1].success = t[2].success = true;
  t[3].regret_value = 0.5;
  t[0].space_cells = 10;
  t[3].space_cells = 30;
  const auto s = ss::summarize(t, 0.1);
  EXPECT_EQ(s.successes, 3u);
  EXPECT_DOUBLE_EQ(s.success_rate, 0.75);
  EXPECT_DOUBLE_EQ(s.max_regret, 0.5);
  EXPECT_DOUBLE_EQ(s.mean_cells, 10.0);
  EXPECT_EQ(s.max_cells, 30u);
}

TEST(HashedSpaceCells, Formula) {
  const auto p = ss::derive_params(cfg(16, 1, 0.5));
  EXPECT_EQ(ss::hashed_space_cells(p), 3ull * p.levels * p.rows * p.width + p.K);
}
