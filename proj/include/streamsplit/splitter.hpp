#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>

#include "streamsplit/core.hpp"
#include "streamsplit/reservoir.hpp"
#include "streamsplit/sketch.hpp"

namespace streamsplit {

/// Labels above this are rejected: y^2 weights times m <= 2^40 elements must
/// fit the 64-bit counters.
inline constexpr std::uint64_t kMaxSketchLabel = 1024;
inline constexpr std::uint64_t kMaxStreamLength = std::uint64_t{1} << 40;

/// Three coupled range sketches over (x,1), (x,y) and (x,y^2) plus the exact
/// element count m.
class RegressionSketchBank {
 public:
  RegressionSketchBank(const ProblemConfig& cfg, const DerivedParams& params,
                       SketchLayout layout = SketchLayout::adaptive);

  /// Caller validates the point (regression mode, label <= kMaxSketchLabel).
  void add(const LabeledPoint& p);

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  /// Estimated SSE of the feature range [lo, hi]; 0 when lo > hi or the
  /// count estimate is 0. Throws ConfigError before freeze().
  double sse_hat(std::uint64_t lo, std::uint64_t hi) const;

  /// (sse_hat([1,j]) + sse_hat([j+1,N])) / m; 0 on an empty stream.
  double loss_hat(std::uint64_t j) const;

  const DyadicCmSketch& counts() const { return cnt_; }
  const DyadicCmSketch& sums() const { return sum_; }
  const DyadicCmSketch& squares() const { return sq_; }
  std::uint64_t m() const { return m_; }
  std::uint64_t domain_size() const { return N_; }
  double beta() const { return beta_; }

  std::uint64_t counter_count() const;
  std::uint64_t counters_touched_per_update() const;

  /// Dumps all three sketches behind a small header; see docs/FORMATS.md.
  void save(std::ostream& out) const;
  static RegressionSketchBank load(std::istream& in);

 private:
  RegressionSketchBank(std::uint64_t N, double beta, std::uint64_t m, DyadicCmSketch cnt, DyadicCmSketch sum,
                       DyadicCmSketch sq);

  std::uint64_t N_;
  double beta_;
  std::uint64_t m_ = 0;
  bool frozen_ = false;
  DyadicCmSketch cnt_;
  DyadicCmSketch sum_;
  DyadicCmSketch sq_;
};

struct SplitResult {
  Split j_hat;
  double est_loss = 0.0;
  std::uint64_t m = 0;
  /// Sketch counters plus reservoir capacity.
  std::uint64_t space_cells = 0;
  std::size_t candidate_count = 0;
};

struct SplitterOptions {
  SketchLayout layout = SketchLayout::adaptive;
  /// Threads used to score candidates after the pass. The result does not
  /// depend on this.
  unsigned eval_threads = 1;
};

/// One-pass regression split estimator. push() every element, then finish().
class StreamingSplitter {
 public:
  explicit StreamingSplitter(const ProblemConfig& cfg, SplitterOptions options = {});

  /// Validates (throws ValidationError with the element index) and ingests.
  void push(const LabeledPoint& p);

  /// Ends the pass and returns the argmin of the estimated loss over the
  /// candidate set (smallest j on ties). May only be called once.
  SplitResult finish();

  /// True when M^2 <= epsilon/16 and the answer is j = 0 without sketching.
  bool trivial() const { return !bank_.has_value(); }

  const ProblemConfig& config() const { return cfg_; }
  const std::optional<DerivedParams>& params() const { return params_; }
  const RegressionSketchBank& bank() const { return bank_.value(); }
  const Reservoir& reservoir() const { return reservoir_.value(); }
  std::uint64_t m() const { return m_; }
  std::uint64_t space_cells() const;

 private:
  ProblemConfig cfg_;
  SplitterOptions options_;
  std::optional<DerivedParams> params_;
  std::optional<RegressionSketchBank> bank_;
  std::optional<Reservoir> reservoir_;
  std::uint64_t m_ = 0;
  bool finished_ = false;
};

/// Gini split estimator: re-encodes y in {-1,+1} to (y+1)/2 and runs the
/// regression estimator with M = 1 and error epsilon/2; est_loss is doubled.
class GiniSplitter {
 public:
  explicit GiniSplitter(const ProblemConfig& cfg, SplitterOptions options = {});

  void push(const LabeledPoint& p);
  SplitResult finish();

  const StreamingSplitter& inner() const { return inner_; }

 private:
  static ProblemConfig inner_config(const ProblemConfig& cfg);

  ProblemConfig cfg_;
  StreamingSplitter inner_;
};

SplitResult run_regression(std::span<const LabeledPoint> stream, const ProblemConfig& cfg,
                           SplitterOptions options = {});
SplitResult run_gini(std::span<const LabeledPoint> stream, const ProblemConfig& cfg, SplitterOptions options = {});

}  // namespace streamsplit
