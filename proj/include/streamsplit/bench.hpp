#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "streamsplit/adversary.hpp"
#include "streamsplit/core.hpp"
#include "streamsplit/oracle.hpp"
#include "streamsplit/splitter.hpp"

namespace streamsplit {

enum class GeneratorKind { uniform, two_cluster, planted_heavy_interval, zipf };

std::string_view to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(std::string_view text);

struct SyntheticStreamSpec {
  std::uint64_t m = 0;
  std::uint64_t N = 1;
  std::uint64_t M = 1;
  GeneratorKind kind = GeneratorKind::uniform;
  std::uint64_t seed = 0;
  LabelMode mode = LabelMode::regression;
  /// two-cluster: chance that a label is drawn uniformly instead of from
  /// its cluster.
  double noise = 0.0;
  /// planted-heavy-interval: floor(planted_fraction * m) + 1 points land in
  /// (interval_lo, interval_hi], the rest outside it.
  std::uint64_t interval_lo = 0;
  std::uint64_t interval_hi = 0;
  double planted_fraction = 0.0;
  double zipf_exponent = 1.1;
};

/// Number of points a planted-heavy-interval spec puts inside its interval.
std::uint64_t planted_count(const SyntheticStreamSpec& spec);

/// Deterministic per seed. two-cluster puts the low label (0 or -1) on
/// [1, N/2] and the high label (M or +1) on (N/2, N].
std::vector<LabeledPoint> generate(const SyntheticStreamSpec& spec);

struct TrialMetrics {
  Split j_hat;
  Split opt_split;
  double est_loss = 0.0;
  Rational regret;  // exact L(j_hat) - OPT
  double regret_value = 0.0;
  bool success = false;  // regret <= epsilon
  std::uint64_t m = 0;
  std::uint64_t space_cells = 0;
  std::uint64_t counters_per_update = 0;
  double pass_seconds = 0.0;
  double ns_per_update = 0.0;
};

/// Runs the streaming splitter (mse or gini) and the exact oracle on one
/// generated stream. Misclassification has no streaming estimator here.
TrialMetrics measure(const SyntheticStreamSpec& spec, const ProblemConfig& cfg, LossKind loss,
                     SplitterOptions options = {});

struct InstanceTrial {
  Split j_hat;
  bool success = false;        // regret <= epsilon
  bool bit_recovered = false;  // j_hat is the expected minimizer
};

/// Streams a regression or Gini hard instance through the splitter.
InstanceTrial measure_instance(const HardInstance& inst, const ProblemConfig& cfg, SplitterOptions options = {});

struct TrialSummary {
  double epsilon = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double success_rate = 0.0;
  double mean_regret = 0.0;
  double max_regret = 0.0;
  double mean_cells = 0.0;
  std::uint64_t max_cells = 0;
  double mean_counters_per_update = 0.0;
  double mean_ns_per_update = 0.0;
};

TrialSummary summarize(std::span<const TrialMetrics> trials, double epsilon);

/// `trials` runs with stream seed derive_seed(spec.seed, {t}) and splitter
/// seed derive_seed(cfg.seed, {t}). Results are indexed by t and do not
/// depend on `threads`.
std::vector<TrialMetrics> run_trials(const SyntheticStreamSpec& spec, const ProblemConfig& cfg, LossKind loss,
                                     std::uint64_t trials, unsigned threads = 1, SplitterOptions options = {});

/// 3 * levels * rows * width + K: the cell count of a fully hashed splitter.
std::uint64_t hashed_space_cells(const DerivedParams& params);

}  // namespace streamsplit
