#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "streamsplit/adversary.hpp"
#include "streamsplit/bench.hpp"
#include "streamsplit/oracle.hpp"
#include "streamsplit/random.hpp"
#include "streamsplit/splitter.hpp"
#include "streamsplit/stream_io.hpp"

namespace streamsplit::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct SplitArgs {
  std::string loss = "mse";
  std::uint64_t N = 0;
  std::optional<std::uint64_t> M;
  double epsilon = 0.0;
  std::optional<std::uint64_t> seed;
  std::uint32_t failure_exponent = 3;
  std::string input = "-";
  std::string format = "csv";
  std::string layout = "adaptive";
  bool with_oracle = false;
  std::string save_sketch;
};

struct ExactArgs {
  std::string loss = "mse";
  std::uint64_t N = 0;
  std::optional<std::uint64_t> M;
  std::string input = "-";
  std::string format = "csv";
  std::string dump_curve;
};

struct GenArgs {
  std::string kind = "reg";
  std::uint64_t n = 0;
  std::string z = "random";
  std::uint64_t i = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
};

struct VerifyArgs {
  std::string in;
  std::string kind;
};

struct BenchArgs {
  std::uint64_t trials = 50;
  std::uint64_t m = 100000;
  std::uint64_t N = 1000;
  std::uint64_t M = 4;
  std::vector<double> epsilon_grid = {0.05, 0.1, 0.2};
  std::optional<std::uint64_t> seed;
  std::string loss = "mse";
  std::string generator = "uniform";
  double noise = 0.0;
  unsigned threads = 1;
  std::string layout = "adaptive";
  bool per_trial = false;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kSeedEnvVar)) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string(kSeedEnvVar) + " is not an unsigned integer");
    }
  }
  return 0;
}

SketchLayout parse_layout(const std::string& text) {
  if (text == "adaptive") return SketchLayout::adaptive;
  if (text == "hashed") return SketchLayout::hashed;
  throw ConfigError("unknown layout '" + text + "'");
}

LossKind parse_loss(const std::string& text) {
  if (text == "mse") return LossKind::mse;
  if (text == "gini") return LossKind::gini;
  if (text == "mis") return LossKind::misclassification;
  throw ConfigError("unknown loss '" + text + "'");
}

/// Opens `path` for reading, or returns `fallback` for "-".
class InputSource {
 public:
  InputSource(const std::string& path, std::istream& fallback) {
    if (path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file_) throw IoError("cannot open '" + path + "'");
    stream_ = file_.get();
  }
  std::istream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_ = nullptr;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  return f;
}

Json params_json(const std::optional<DerivedParams>& p) {
  if (!p) return nullptr;
  return Json{{"tau", to_fraction_string(p->tau)}, {"beta", to_fraction_string(p->beta)},
              {"K", p->K},
              {"k", p->k},
              {"levels", p->levels},
              {"rows", p->rows},
              {"width", p->width}};
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int cmd_split(const SplitArgs& a, std::istream& in, std::ostream& out) {
  const auto start = Clock::now();
  const LossKind loss = parse_loss(a.loss);
  if (loss == LossKind::misclassification) throw ConfigError("split supports --loss mse or gini");
  if (loss == LossKind::mse && !a.M) throw ConfigError("--M is required for --loss mse");

  ProblemConfig cfg;
  cfg.N = a.N;
  cfg.M = loss == LossKind::mse ? *a.M : 1;
  cfg.epsilon = a.epsilon;
  cfg.seed = resolve_seed(a.seed);
  cfg.failure_exponent = a.failure_exponent;
  SplitterOptions options;
  options.layout = parse_layout(a.layout);
  const StreamFormat format = parse_stream_format(a.format);
  const LabelMode mode = label_mode_for(loss);

  std::optional<StreamingSplitter> reg;
  std::optional<GiniSplitter> gini;
  if (loss == LossKind::mse) {
    reg.emplace(cfg, options);
  } else {
    gini.emplace(cfg, options);
  }
  std::optional<AggregatedStream> agg;
  if (a.with_oracle) agg.emplace(cfg.N, mode);

  InputSource source(a.input, in);
  StreamReader reader(source.get(), format);
  while (auto p = reader.next()) {
    if (reg) {
      reg->push(*p);
    } else {
      gini->push(*p);
    }
    if (agg) agg->add(*p);
  }
  const StreamingSplitter& core = reg ? *reg : gini->inner();
  const SplitResult result = reg ? reg->finish() : gini->finish();

  if (!a.save_sketch.empty()) {
    if (core.trivial()) throw ConfigError("no sketch is kept when M^2 <= epsilon/16");
    auto f = open_output(a.save_sketch);
    core.bank().save(f);
  }

  Json report;
  report["mode"] = "split";
  report["loss"] = to_string(loss);
  report["config"] = Json{{"N", cfg.N},
                          {"M", loss == LossKind::mse ? Json(cfg.M) : Json(nullptr)},
                          {"epsilon", cfg.epsilon},
                          {"seed", cfg.seed},
                          {"failure_exponent", cfg.failure_exponent},
                          {"layout", a.layout}};
  report["derived"] = params_json(core.params());
  report["j_hat"] = result.j_hat.j;
  report["est_loss"] = result.est_loss;
  report["m"] = result.m;
  report["space_cells"] = result.space_cells;
  report["candidates"] = result.candidate_count;
  report["exact_loss"] = nullptr;
  report["exact_opt"] = nullptr;
  report["opt_split"] = nullptr;
  report["regret"] = nullptr;
  report["regret_value"] = nullptr;
  if (agg) {
    agg->finalize();
    if (agg->m() > 0) {
      const Rational chosen = exact_loss(*agg, loss, result.j_hat.j);
      const OptResult opt = exact_opt(*agg, loss);
      const Rational regret = chosen - opt.loss;
      report["exact_loss"] = to_fraction_string(chosen);
      report["exact_opt"] = to_fraction_string(opt.loss);
      report["opt_split"] = opt.split.j;
      report["regret"] = to_fraction_string(regret);
      report["regret_value"] = regret.get_d();
    }
  }
  report["wall_time_s"] = seconds_since(start);
  out << report.dump() << '\n';
  return kOk;
}

int cmd_exact(const ExactArgs& a, std::istream& in, std::ostream& out) {
  const auto start = Clock::now();
  const LossKind loss = parse_loss(a.loss);
  const LabelMode mode = label_mode_for(loss);
  if (loss == LossKind::mse && !a.M) throw ConfigError("--M is required for --loss mse");
  ProblemConfig cfg;
  cfg.N = a.N;
  cfg.M = a.M.value_or(1);
  if (cfg.N == 0) throw ConfigError("N must be at least 1");

  AggregatedStream agg(cfg.N, mode);
  InputSource source(a.input, in);
  StreamReader reader(source.get(), parse_stream_format(a.format));
  std::size_t index = 0;
  while (auto p = reader.next()) {
    validate_stream_element(*p, cfg, mode, index++);
    agg.add(*p);
  }
  agg.finalize();

  Json report;
  report["mode"] = "exact";
  report["loss"] = to_string(loss);
  report["N"] = cfg.N;
  report["M"] = loss == LossKind::mse ? Json(cfg.M) : Json(nullptr);
  report["m"] = agg.m();
  report["opt"] = nullptr;
  report["opt_value"] = nullptr;
  report["argmin"] = nullptr;
  if (agg.m() > 0) {
    const OptResult opt = exact_opt(agg, loss);
    report["opt"] = to_fraction_string(opt.loss);
    report["opt_value"] = opt.loss.get_d();
    report["argmin"] = opt.split.j;
    if (!a.dump_curve.empty()) {
      auto f = open_output(a.dump_curve);
      f << "j,loss\n";
      for (std::uint64_t j = 0; j <= cfg.N; ++j) f << j << ',' << to_fraction_string(exact_loss(agg, loss, j)) << '\n';
      if (!f) throw IoError("failed writing '" + a.dump_curve + "'");
    }
  }
  report["dump_curve"] = a.dump_curve.empty() ? Json(nullptr) : Json(a.dump_curve);
  report["wall_time_s"] = seconds_since(start);
  out << report.dump() << '\n';
  return kOk;
}

std::string bits_to_string(const std::vector<std::uint8_t>& z) {
  std::string s;
  for (auto b : z) s.push_back(b ? '1' : '0');
  return s;
}

std::vector<std::uint8_t> parse_bits(const std::string& text) {
  std::vector<std::uint8_t> z;
  for (char c : text) {
    if (c != '0' && c != '1') throw ConfigError("--z must be a bit string or 'random'");
    z.push_back(c == '1' ? 1 : 0);
  }
  return z;
}

std::string sidecar_path(const std::string& stream_path) { return stream_path + ".meta.json"; }

Json instance_meta(const HardInstance& inst, StreamFormat format) {
  return Json{{"kind", to_string(inst.kind)},
              {"n", inst.n},
              {"z", bits_to_string(inst.z)},
              {"i", inst.i},
              {"B", inst.B},
              {"T", inst.T},
              {"N", inst.N},
              {"m", inst.m},
              {"j_minus", inst.j_minus},
              {"j_plus", inst.j_plus},
              {"expected_minimizer", inst.expected_minimizer()},
              {"format", to_string(format)}};
}

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const InstanceKind kind = parse_instance_kind(a.kind);
  const StreamFormat format = parse_stream_format(a.format);
  std::vector<std::uint8_t> z;
  if (a.z == "random") {
    CounterRng rng(derive_seed(resolve_seed(a.seed), {a.n}));
    for (std::uint64_t k = 0; k < a.n; ++k) z.push_back(static_cast<std::uint8_t>(rng.below(2)));
  } else {
    z = parse_bits(a.z);
  }
  const HardInstance inst = gen_instance(kind, a.n, z, a.i);
  {
    auto f = open_output(a.out);
    write_stream(f, inst.stream, format);
  }
  const Json meta = instance_meta(inst, format);
  {
    auto f = open_output(sidecar_path(a.out));
    f << meta.dump(2) << '\n';
    if (!f) throw IoError("failed writing sidecar");
  }
  Json report = meta;
  report["mode"] = "gen";
  report["out"] = a.out;
  report["sidecar"] = sidecar_path(a.out);
  out << report.dump() << '\n';
  return kOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  std::ifstream meta_file(sidecar_path(a.in));
  if (!meta_file) throw IoError("missing sidecar '" + sidecar_path(a.in) + "'");
  Json meta;
  try {
    meta = Json::parse(meta_file);
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed sidecar: ") + e.what());
  }
  HardInstance inst;
  StreamFormat format = StreamFormat::csv;
  try {
    const InstanceKind kind = parse_instance_kind(meta.at("kind").get<std::string>());
    if (!a.kind.empty() && parse_instance_kind(a.kind) != kind) {
      throw ConfigError("kind mismatch: sidecar says " + std::string(to_string(kind)) + ", --kind says " + a.kind);
    }
    inst = describe_instance(kind, meta.at("n").get<std::uint64_t>(), parse_bits(meta.at("z").get<std::string>()),
                             meta.at("i").get<std::uint64_t>());
    format = parse_stream_format(meta.value("format", std::string("csv")));
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed sidecar: ") + e.what());
  }
  {
    std::ifstream f(a.in, std::ios::binary);
    if (!f) throw IoError("cannot open '" + a.in + "'");
    inst.stream = read_stream(f, format);
  }

  const VerificationReport report = verify_instance(inst);
  for (const auto& c : report.checks) {
    out << Json{{"check", c.name},
                {"relation", c.relation},
                {"lhs", to_fraction_string(c.lhs)},
                {"rhs", to_fraction_string(c.rhs)},
                {"j", c.j ? Json(*c.j) : Json(nullptr)},
                {"pass", c.pass}}
               .dump()
        << '\n';
  }
  out << Json{{"mode", "verify"},
              {"kind", to_string(inst.kind)},
              {"n", inst.n},
              {"i", inst.i},
              {"passed", report.passed()},
              {"failures", report.failures()}}
             .dump()
      << '\n';
  return report.passed() ? kOk : kVerificationFailed;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  const LossKind loss = parse_loss(a.loss);
  SyntheticStreamSpec spec;
  spec.m = a.m;
  spec.N = a.N;
  spec.M = a.M;
  spec.kind = parse_generator_kind(a.generator);
  spec.seed = resolve_seed(a.seed);
  spec.mode = label_mode_for(loss);
  spec.noise = a.noise;
  if (spec.kind == GeneratorKind::planted_heavy_interval) {
    spec.interval_lo = a.N / 4;
    spec.interval_hi = a.N / 4 + std::max<std::uint64_t>(1, a.N / 100);
  }
  SplitterOptions options;
  options.layout = parse_layout(a.layout);

  for (double eps : a.epsilon_grid) {
    ProblemConfig cfg;
    cfg.N = a.N;
    cfg.M = loss == LossKind::mse ? a.M : 1;
    cfg.epsilon = eps;
    cfg.seed = spec.seed;
    ProblemConfig sized = cfg;
    if (loss == LossKind::gini) sized.epsilon = eps / 2.0;
    const std::optional<DerivedParams> params =
        sized.M * sized.M > 0 ? std::optional<DerivedParams>(derive_params(sized)) : std::nullopt;
    // Planted streams put just over 2 tau m points in the interval.
    if (spec.kind == GeneratorKind::planted_heavy_interval && params) spec.planted_fraction = 2 * params->tau_value();
    const auto trials = run_trials(spec, cfg, loss, a.trials, a.threads, options);
    if (a.per_trial) {
      for (std::size_t t = 0; t < trials.size(); ++t) {
        const auto& r = trials[t];
        out << Json{{"mode", "bench-trial"},
                    {"epsilon", eps},
                    {"trial", t},
                    {"j_hat", r.j_hat.j},
                    {"opt_split", r.opt_split.j},
                    {"regret", to_fraction_string(r.regret)},
                    {"regret_value", r.regret_value},
                    {"success", r.success},
                    {"space_cells", r.space_cells},
                    {"counters_per_update", r.counters_per_update},
                    {"wall_time_s", r.pass_seconds}}
                   .dump()
            << '\n';
      }
    }
    const TrialSummary s = summarize(trials, eps);
    out << Json{{"mode", "bench"},
                {"loss", to_string(loss)},
                {"generator", to_string(spec.kind)},
                {"epsilon", eps},
                {"trials", s.trials},
                {"successes", s.successes},
                {"success_rate", s.success_rate},
                {"mean_regret", s.mean_regret},
                {"max_regret", s.max_regret},
                {"mean_cells", s.mean_cells},
                {"max_cells", s.max_cells},
                {"hashed_cells", params ? Json(hashed_space_cells(*params)) : Json(nullptr)},
                {"counters_per_update", s.mean_counters_per_update},
                {"ns_per_update", s.mean_ns_per_update}}
               .dump()
        << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"streamsplit: one-pass decision-tree split selection"};
  app.require_subcommand(1);

  SplitArgs split;
  auto* split_cmd = app.add_subcommand("split", "Estimate the best split in one pass");
  split_cmd->add_option("--loss", split.loss, "mse or gini")->check(CLI::IsMember({"mse", "gini"}));
  split_cmd->add_option("--N", split.N, "Feature domain size")->required();
  split_cmd->add_option("--M", split.M, "Maximum label (mse only)");
  split_cmd->add_option("--epsilon", split.epsilon, "Additive error target in (0,1)")->required();
  split_cmd->add_option("--seed", split.seed, "Seed (default: $STREAMSPLIT_SEED or 0)");
  split_cmd->add_option("--failure-exponent", split.failure_exponent, "c in the 1/N^c failure budget");
  split_cmd->add_option("--input", split.input, "Stream file, or - for stdin");
  split_cmd->add_option("--format", split.format, "csv or bin")->check(CLI::IsMember({"csv", "bin"}));
  split_cmd->add_option("--layout", split.layout, "adaptive or hashed")->check(CLI::IsMember({"adaptive", "hashed"}));
  split_cmd->add_flag("--with-oracle", split.with_oracle, "Also aggregate exactly and report regret");
  split_cmd->add_option("--save-sketch", split.save_sketch, "Write the sketch bank to this path");

  ExactArgs exact;
  auto* exact_cmd = app.add_subcommand("exact", "Exact loss sweep over every split");
  exact_cmd->add_option("--loss", exact.loss, "mse, gini or mis")->check(CLI::IsMember({"mse", "gini", "mis"}));
  exact_cmd->add_option("--N", exact.N, "Feature domain size")->required();
  exact_cmd->add_option("--M", exact.M, "Maximum label (mse only)");
  exact_cmd->add_option("--input", exact.input, "Stream file, or - for stdin");
  exact_cmd->add_option("--format", exact.format, "csv or bin")->check(CLI::IsMember({"csv", "bin"}));
  exact_cmd->add_option("--dump-curve", exact.dump_curve, "Write 'j,loss' lines with exact fractions");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a lower-bound hard instance");
  gen_cmd->add_option("--kind", gen.kind, "reg, mis or gini")->check(CLI::IsMember({"reg", "mis", "gini"}));
  gen_cmd->add_option("--n", gen.n, "Block count")->required();
  gen_cmd->add_option("--z", gen.z, "Bit string of length n, or 'random'");
  gen_cmd->add_option("--i", gen.i, "Queried index in [1,n]")->required();
  gen_cmd->add_option("--seed", gen.seed, "Seed for --z random");
  gen_cmd->add_option("--out", gen.out, "Output stream path (sidecar: PATH.meta.json)")->required();
  gen_cmd->add_option("--format", gen.format, "csv or bin")->check(CLI::IsMember({"csv", "bin"}));

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Exactly verify a generated instance");
  verify_cmd->add_option("--in", verify.in, "Instance stream path")->required();
  verify_cmd->add_option("--kind", verify.kind, "Expected kind")->check(CLI::IsMember({"reg", "mis", "gini"}));

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Regret/space/time over seeded synthetic streams");
  bench_cmd->add_option("--trials", bench.trials, "Trials per epsilon");
  bench_cmd->add_option("--m", bench.m, "Stream length");
  bench_cmd->add_option("--N", bench.N, "Feature domain size");
  bench_cmd->add_option("--M", bench.M, "Maximum label");
  bench_cmd->add_option("--epsilon-grid", bench.epsilon_grid, "Comma-separated epsilons")->delimiter(',');
  bench_cmd->add_option("--seed", bench.seed, "Base seed");
  bench_cmd->add_option("--loss", bench.loss, "mse or gini")->check(CLI::IsMember({"mse", "gini"}));
  bench_cmd->add_option("--generator", bench.generator, "uniform, two-cluster, planted or zipf")
      ->check(CLI::IsMember({"uniform", "two-cluster", "planted", "zipf"}));
  bench_cmd->add_option("--noise", bench.noise, "two-cluster label noise");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads");
  bench_cmd->add_option("--layout", bench.layout, "adaptive or hashed")->check(CLI::IsMember({"adaptive", "hashed"}));
  bench_cmd->add_flag("--per-trial", bench.per_trial, "Also emit one line per trial");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*split_cmd) return cmd_split(split, in, out);
    if (*exact_cmd) return cmd_exact(exact, in, out);
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*verify_cmd) return cmd_verify(verify, out);
    if (*bench_cmd) return cmd_bench(bench, out);
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace streamsplit::cli
