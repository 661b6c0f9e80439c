#include "streamsplit/splitter.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "binary_io.hpp"
#include "streamsplit/random.hpp"

namespace streamsplit {

namespace {

constexpr std::array<char, 8> kBankMagic = {'S', 'S', 'B', 'A', 'N', 'K', '0', '1'};
constexpr std::uint32_t kBankVersion = 1;

enum SketchId : std::uint64_t { kCountSketch = 1, kSumSketch = 2, kSquareSketch = 3 };
constexpr std::uint64_t kReservoirTag = 0x7265736572766f69ULL;

}  // namespace

RegressionSketchBank::RegressionSketchBank(const ProblemConfig& cfg, const DerivedParams& params,
                                           SketchLayout layout)
    : N_(cfg.N),
      beta_(params.beta_value()),
      cnt_(DyadicCmSketch::from_params(params, cfg.N, cfg.seed, kCountSketch, layout)),
      sum_(DyadicCmSketch::from_params(params, cfg.N, cfg.seed, kSumSketch, layout)),
      sq_(DyadicCmSketch::from_params(params, cfg.N, cfg.seed, kSquareSketch, layout)) {}

RegressionSketchBank::RegressionSketchBank(std::uint64_t N, double beta, std::uint64_t m, DyadicCmSketch cnt,
                                           DyadicCmSketch sum, DyadicCmSketch sq)
    : N_(N), beta_(beta), m_(m), frozen_(true), cnt_(std::move(cnt)), sum_(std::move(sum)), sq_(std::move(sq)) {}

void RegressionSketchBank::add(const LabeledPoint& p) {
  if (frozen_) throw ConfigError("sketch bank is frozen");
  const auto x = static_cast<std::uint64_t>(p.x);
  const auto y = static_cast<std::uint64_t>(p.y);
  cnt_.update(x, 1);
  sum_.update(x, y);
  sq_.update(x, y * y);
  ++m_;
}

double RegressionSketchBank::sse_hat(std::uint64_t lo, std::uint64_t hi) const {
  if (!frozen_) throw ConfigError("sse_hat requires a frozen sketch bank");
  if (lo > hi) return 0.0;
  const std::uint64_t n_hat = cnt_.range_query(lo, hi);
  if (n_hat == 0) return 0.0;
  const auto s_hat = static_cast<double>(sum_.range_query(lo, hi));
  const auto q_hat = static_cast<double>(sq_.range_query(lo, hi));
  const double denom = static_cast<double>(n_hat) + beta_ * static_cast<double>(m_);
  // (s/D)*s keeps s^2 from leaving double range at extreme m*M.
  return q_hat - (s_hat / denom) * s_hat;
}

double RegressionSketchBank::loss_hat(std::uint64_t j) const {
  if (j > N_) throw ConfigError("split " + std::to_string(j) + " outside [0, " + std::to_string(N_) + "]");
  if (m_ == 0) return 0.0;
  const double left = j >= 1 ? sse_hat(1, j) : 0.0;
  const double right = j < N_ ? sse_hat(j + 1, N_) : 0.0;
  return (left + right) / static_cast<double>(m_);
}

std::uint64_t RegressionSketchBank::counter_count() const {
  return cnt_.counter_count() + sum_.counter_count() + sq_.counter_count();
}

std::uint64_t RegressionSketchBank::counters_touched_per_update() const {
  return cnt_.counters_touched_per_update() + sum_.counters_touched_per_update() +
         sq_.counters_touched_per_update();
}

void RegressionSketchBank::save(std::ostream& out) const {
  out.write(kBankMagic.data(), kBankMagic.size());
  detail::write_u32(out, kBankVersion);
  detail::write_u32(out, frozen_ ? 1 : 0);
  detail::write_u64(out, N_);
  detail::write_u64(out, std::bit_cast<std::uint64_t>(beta_));
  detail::write_u64(out, m_);
  cnt_.save(out);
  sum_.save(out);
  sq_.save(out);
  if (!out) throw IoError("failed writing sketch bank");
}

RegressionSketchBank RegressionSketchBank::load(std::istream& in) {
  detail::expect_magic(in, kBankMagic, "sketch bank");
  const std::uint32_t version = detail::read_u32(in, "version");
  if (version != kBankVersion) throw FormatError("unsupported sketch bank version " + std::to_string(version));
  detail::read_u32(in, "frozen flag");
  const std::uint64_t N = detail::read_u64(in, "N");
  const double beta = std::bit_cast<double>(detail::read_u64(in, "beta"));
  const std::uint64_t m = detail::read_u64(in, "m");
  auto cnt = DyadicCmSketch::load(in);
  auto sum = DyadicCmSketch::load(in);
  auto sq = DyadicCmSketch::load(in);
  if (cnt.domain_size() != N || sum.domain_size() != N || sq.domain_size() != N) {
    throw FormatError("sketch domains disagree with bank header");
  }
  if (cnt.total_weight() != m) throw FormatError("count sketch weight disagrees with m");
  return RegressionSketchBank(N, beta, m, std::move(cnt), std::move(sum), std::move(sq));
}

StreamingSplitter::StreamingSplitter(const ProblemConfig& cfg, SplitterOptions options)
    : cfg_(cfg), options_(options) {
  validate_config(cfg_);
  const long double m_sq = static_cast<long double>(cfg_.M) * static_cast<long double>(cfg_.M);
  if (m_sq <= static_cast<long double>(cfg_.epsilon) / 16.0L) return;  // answer is j = 0
  if (cfg_.M > kMaxSketchLabel) {
    throw ConfigError("M = " + std::to_string(cfg_.M) + " exceeds the supported maximum " +
                      std::to_string(kMaxSketchLabel));
  }
  params_ = derive_params(cfg_);
  bank_.emplace(cfg_, *params_, options_.layout);
  reservoir_.emplace(params_->K, derive_seed(cfg_.seed, {kReservoirTag}));
}

void StreamingSplitter::push(const LabeledPoint& p) {
  if (finished_) throw ConfigError("push after finish");
  validate_stream_element(p, cfg_, LabelMode::regression, m_);
  if (m_ >= kMaxStreamLength) throw ConfigError("stream longer than 2^40 elements");
  ++m_;
  if (!bank_) return;
  bank_->add(p);
  reservoir_->offer(p);
}

std::uint64_t StreamingSplitter::space_cells() const {
  if (!bank_) return 0;
  return bank_->counter_count() + reservoir_->capacity();
}

SplitResult StreamingSplitter::finish() {
  if (finished_) throw ConfigError("finish called twice");
  finished_ = true;
  SplitResult result;
  result.m = m_;
  result.space_cells = space_cells();
  if (!bank_ || m_ == 0) {
    result.candidate_count = 1;
    return result;
  }
  bank_->freeze();
  const CandidateSet S = candidates(*reservoir_, cfg_.N);
  const auto splits = S.splits();
  std::vector<double> losses(splits.size());

  auto score = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) losses[t] = bank_->loss_hat(splits[t]);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options_.eval_threads, splits.size()));
  if (threads == 1) {
    score(0, splits.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (splits.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(splits.size(), b + chunk);
      if (b < e) pool.emplace_back(score, b, e);
    }
  }

  std::size_t best = 0;
  for (std::size_t t = 1; t < splits.size(); ++t) {
    if (losses[t] < losses[best]) best = t;
  }
  result.j_hat = Split{splits[best]};
  result.est_loss = losses[best];
  result.candidate_count = splits.size();
  return result;
}

ProblemConfig GiniSplitter::inner_config(const ProblemConfig& cfg) {
  validate_config(cfg);
  ProblemConfig inner = cfg;
  inner.M = 1;
  inner.epsilon = cfg.epsilon / 2.0;
  return inner;
}

GiniSplitter::GiniSplitter(const ProblemConfig& cfg, SplitterOptions options)
    : cfg_(cfg), inner_(inner_config(cfg), options) {}

void GiniSplitter::push(const LabeledPoint& p) {
  validate_stream_element(p, cfg_, LabelMode::classification, inner_.m());
  inner_.push(reencode_to_unit(p));
}

SplitResult GiniSplitter::finish() {
  SplitResult r = inner_.finish();
  r.est_loss *= 2.0;
  return r;
}

SplitResult run_regression(std::span<const LabeledPoint> stream, const ProblemConfig& cfg, SplitterOptions options) {
  StreamingSplitter splitter(cfg, options);
  for (const auto& p : stream) splitter.push(p);
  return splitter.finish();
}

SplitResult run_gini(std::span<const LabeledPoint> stream, const ProblemConfig& cfg, SplitterOptions options) {
  GiniSplitter splitter(cfg, options);
  for (const auto& p : stream) splitter.push(p);
  return splitter.finish();
}

}  // namespace streamsplit
