#include "streamsplit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "streamsplit/random.hpp"

namespace streamsplit {

namespace {

constexpr std::uint64_t kMaxZipfDomain = std::uint64_t{1} << 24;

Label random_label(CounterRng& rng, const SyntheticStreamSpec& spec) {
  if (spec.mode == LabelMode::classification) return rng.below(2) ? 1 : -1;
  return static_cast<Label>(rng.below(spec.M + 1));
}

FeatureValue uniform_feature(CounterRng& rng, std::uint64_t N) {
  return static_cast<FeatureValue>(rng.below(N) + 1);
}

std::vector<LabeledPoint> generate_two_cluster(const SyntheticStreamSpec& spec, CounterRng& rng) {
  const Label low = spec.mode == LabelMode::classification ? -1 : 0;
  const Label high = spec.mode == LabelMode::classification ? 1 : static_cast<Label>(spec.M);
  const std::uint64_t boundary = spec.N / 2;
  std::vector<LabeledPoint> out;
  out.reserve(spec.m);
  for (std::uint64_t t = 0; t < spec.m; ++t) {
    const FeatureValue x = uniform_feature(rng, spec.N);
    Label y = static_cast<std::uint64_t>(x) <= boundary ? low : high;
    if (spec.noise > 0.0 && rng.uniform01() < spec.noise) y = random_label(rng, spec);
    out.push_back({x, y});
  }
  return out;
}

std::vector<LabeledPoint> generate_planted(const SyntheticStreamSpec& spec, CounterRng& rng) {
  const std::uint64_t lo = spec.interval_lo;
  const std::uint64_t hi = spec.interval_hi;
  if (hi > spec.N || lo >= hi) throw ConfigError("planted interval (lo, hi] must be a non-empty part of [1, N]");
  const std::uint64_t inside = planted_count(spec);
  const std::uint64_t width_in = hi - lo;
  const std::uint64_t width_out = spec.N - width_in;
  if (width_out == 0 && inside < spec.m) throw ConfigError("planted interval covers the whole domain");
  std::vector<LabeledPoint> out;
  out.reserve(spec.m);
  for (std::uint64_t t = 0; t < spec.m; ++t) {
    FeatureValue x = 0;
    if (t < inside) {
      x = static_cast<FeatureValue>(lo + 1 + rng.below(width_in));
    } else {
      std::uint64_t r = rng.below(width_out) + 1;  // r-th value outside (lo, hi]
      x = static_cast<FeatureValue>(r <= lo ? r : r + width_in);
    }
    out.push_back({x, random_label(rng, spec)});
  }
  for (std::uint64_t t = out.size(); t > 1; --t) std::swap(out[t - 1], out[rng.below(t)]);
  return out;
}

std::vector<LabeledPoint> generate_zipf(const SyntheticStreamSpec& spec, CounterRng& rng) {
  if (spec.N > kMaxZipfDomain) throw ConfigError("zipf generator supports N <= 2^24");
  std::vector<double> cdf(spec.N);
  double acc = 0.0;
  for (std::uint64_t r = 0; r < spec.N; ++r) {
    acc += 1.0 / std::pow(static_cast<double>(r + 1), spec.zipf_exponent);
    cdf[r] = acc;
  }
  std::vector<LabeledPoint> out;
  out.reserve(spec.m);
  for (std::uint64_t t = 0; t < spec.m; ++t) {
    const double u = rng.uniform01() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto rank = std::min<std::uint64_t>(static_cast<std::uint64_t>(it - cdf.begin()), spec.N - 1);
    out.push_back({static_cast<FeatureValue>(rank + 1), random_label(rng, spec)});
  }
  return out;
}

}  // namespace

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::uniform: return "uniform";
    case GeneratorKind::two_cluster: return "two-cluster";
    case GeneratorKind::planted_heavy_interval: return "planted";
    case GeneratorKind::zipf: return "zipf";
  }
  return "?";
}

GeneratorKind parse_generator_kind(std::string_view text) {
  if (text == "uniform") return GeneratorKind::uniform;
  if (text == "two-cluster") return GeneratorKind::two_cluster;
  if (text == "planted") return GeneratorKind::planted_heavy_interval;
  if (text == "zipf") return GeneratorKind::zipf;
  throw ConfigError("unknown generator '" + std::string(text) + "'");
}

std::uint64_t planted_count(const SyntheticStreamSpec& spec) {
  const auto base = static_cast<std::uint64_t>(std::floor(spec.planted_fraction * static_cast<double>(spec.m)));
  return std::min(spec.m, base + 1);
}

std::vector<LabeledPoint> generate(const SyntheticStreamSpec& spec) {
  if (spec.N == 0) throw ConfigError("N must be at least 1");
  CounterRng rng(derive_seed(spec.seed, {static_cast<std::uint64_t>(spec.kind)}));
  switch (spec.kind) {
    case GeneratorKind::uniform: {
      std::vector<LabeledPoint> out;
      out.reserve(spec.m);
      for (std::uint64_t t = 0; t < spec.m; ++t) {
        const FeatureValue x = uniform_feature(rng, spec.N);
        out.push_back({x, random_label(rng, spec)});
      }
      return out;
    }
    case GeneratorKind::two_cluster: return generate_two_cluster(spec, rng);
    case GeneratorKind::planted_heavy_interval: return generate_planted(spec, rng);
    case GeneratorKind::zipf: return generate_zipf(spec, rng);
  }
  throw ConfigError("unknown generator");
}

TrialMetrics measure(const SyntheticStreamSpec& spec, const ProblemConfig& cfg, LossKind loss,
                     SplitterOptions options) {
  if (loss == LossKind::misclassification) throw ConfigError("no streaming estimator for misclassification loss");
  if (label_mode_for(loss) != spec.mode) throw ConfigError("generator label mode does not match the loss");
  const auto stream = generate(spec);

  TrialMetrics out;
  const auto start = std::chrono::steady_clock::now();
  SplitResult result;
  std::uint64_t touched = 0;
  if (loss == LossKind::mse) {
    StreamingSplitter splitter(cfg, options);
    for (const auto& p : stream) splitter.push(p);
    result = splitter.finish();
    if (!splitter.trivial()) touched = splitter.bank().counters_touched_per_update();
  } else {
    GiniSplitter splitter(cfg, options);
    for (const auto& p : stream) splitter.push(p);
    result = splitter.finish();
    if (!splitter.inner().trivial()) touched = splitter.inner().bank().counters_touched_per_update();
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  out.j_hat = result.j_hat;
  out.est_loss = result.est_loss;
  out.m = result.m;
  out.space_cells = result.space_cells;
  out.counters_per_update = touched;
  out.pass_seconds = elapsed.count();
  out.ns_per_update = stream.empty() ? 0.0 : 1e9 * elapsed.count() / static_cast<double>(stream.size());

  if (stream.empty()) {
    out.regret = 0;
    out.success = true;
    return out;
  }
  const auto agg = AggregatedStream::from_points(stream, cfg.N, spec.mode);
  const OptResult opt = exact_opt(agg, loss);
  out.opt_split = opt.split;
  out.regret = exact_loss(agg, loss, result.j_hat.j) - opt.loss;
  out.regret_value = out.regret.get_d();
  out.success = out.regret <= Rational(cfg.epsilon);
  return out;
}

InstanceTrial measure_instance(const HardInstance& inst, const ProblemConfig& cfg, SplitterOptions options) {
  ProblemConfig c = cfg;
  c.N = inst.N;
  SplitResult r;
  if (inst.kind == InstanceKind::regression) {
    c.M = 1;
    r = run_regression(inst.stream, c, options);
  } else if (inst.kind == InstanceKind::gini) {
    r = run_gini(inst.stream, c, options);
  } else {
    throw ConfigError("no streaming estimator for misclassification instances");
  }
  const LossKind loss = loss_for(inst.kind);
  const auto agg = AggregatedStream::from_points(inst.stream, inst.N, label_mode_for(inst.kind));
  const OptResult opt = exact_opt(agg, loss);
  InstanceTrial out;
  out.j_hat = r.j_hat;
  out.success = exact_loss(agg, loss, r.j_hat.j) - opt.loss <= Rational(cfg.epsilon);
  out.bit_recovered = r.j_hat.j == inst.expected_minimizer();
  return out;
}

TrialSummary summarize(std::span<const TrialMetrics> trials, double epsilon) {
  TrialSummary s;
  s.epsilon = epsilon;
  s.trials = trials.size();
  if (trials.empty()) return s;
  double regret_sum = 0.0;
  double cells_sum = 0.0;
  double touched_sum = 0.0;
  double ns_sum = 0.0;
  for (const auto& t : trials) {
    s.successes += t.success ? 1 : 0;
    regret_sum += t.regret_value;
    s.max_regret = std::max(s.max_regret, t.regret_value);
    cells_sum += static_cast<double>(t.space_cells);
    s.max_cells = std::max(s.max_cells, t.space_cells);
    touched_sum += static_cast<double>(t.counters_per_update);
    ns_sum += t.ns_per_update;
  }
  const auto n = static_cast<double>(trials.size());
  s.success_rate = static_cast<double>(s.successes) / n;
  s.mean_regret = regret_sum / n;
  s.mean_cells = cells_sum / n;
  s.mean_counters_per_update = touched_sum / n;
  s.mean_ns_per_update = ns_sum / n;
  return s;
}

std::vector<TrialMetrics> run_trials(const SyntheticStreamSpec& spec, const ProblemConfig& cfg, LossKind loss,
                                     std::uint64_t trials, unsigned threads, SplitterOptions options) {
  std::vector<TrialMetrics> out(trials);
  auto run_one = [&](std::uint64_t t) {
    SyntheticStreamSpec s = spec;
    s.seed = derive_seed(spec.seed, {t});
    ProblemConfig c = cfg;
    c.seed = derive_seed(cfg.seed, {t});
    out[t] = measure(s, c, loss, options);
  };
  threads = std::max(1u, threads);
  if (threads == 1 || trials < 2) {
    for (std::uint64_t t = 0; t < trials; ++t) run_one(t);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t t = w; t < trials; t += threads) run_one(t);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::uint64_t hashed_space_cells(const DerivedParams& params) {
  return 3 * static_cast<std::uint64_t>(params.levels) * params.rows * params.width + params.K;
}

}  // namespace streamsplit
