#include "streamsplit/sketch.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "binary_io.hpp"
#include "streamsplit/random.hpp"

namespace streamsplit {

namespace {

constexpr std::array<char, 8> kSketchMagic = {'S', 'S', 'D', 'Y', 'C', 'M', 'S', 'K'};
constexpr std::uint32_t kSketchVersion = 1;

// Refuse single tables beyond 2^32 counters (32 GiB).
constexpr unsigned __int128 kMaxCountersPerLevel = static_cast<unsigned __int128>(1) << 32;

void check_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t N) {
  if (lo < 1 || hi > N || lo > hi) {
    throw ConfigError("invalid range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "] for domain [1, " + std::to_string(N) + "]");
  }
}

}  // namespace

std::vector<DyadicInterval> dyadic_decompose(std::uint64_t lo, std::uint64_t hi, std::uint64_t N) {
  check_range(lo, hi, N);
  const std::uint32_t top = dyadic_levels(N) - 1;
  std::vector<DyadicInterval> out;
  std::uint64_t cur = lo;
  while (true) {
    const std::uint64_t offset = cur - 1;
    // Largest aligned block starting at cur that stays inside [cur, hi].
    std::uint32_t level = offset == 0 ? top : std::min<std::uint32_t>(std::countr_zero(offset), top);
    const std::uint64_t remaining = hi - cur;  // block size - 1 must not exceed this
    while (level > 0 && ((std::uint64_t{1} << level) - 1) > remaining) --level;
    out.push_back({level, offset >> level});
    const std::uint64_t size = std::uint64_t{1} << level;
    if (size - 1 >= remaining) break;
    cur += size;
  }
  return out;
}

DyadicCmSketch::DyadicCmSketch(std::uint64_t N, std::uint32_t rows, std::uint64_t width, std::uint64_t seed,
                               std::uint64_t sketch_id, SketchLayout layout)
    : N_(N), rows_(rows), width_(width), seed_(seed), sketch_id_(sketch_id), layout_(layout) {
  if (N == 0) throw ConfigError("sketch domain must be non-empty");
  if (rows == 0 || width == 0) throw ConfigError("sketch rows and width must be positive");
  build_levels();
}

DyadicCmSketch DyadicCmSketch::from_params(const DerivedParams& params, std::uint64_t N, std::uint64_t seed,
                                           std::uint64_t sketch_id, SketchLayout layout) {
  return DyadicCmSketch(N, params.rows, params.width, seed, sketch_id, layout);
}

void DyadicCmSketch::build_levels() {
  const std::uint32_t count = dyadic_levels(N_);
  levels_.clear();
  levels_.resize(count);
  const auto table = static_cast<unsigned __int128>(rows_) * width_;
  for (std::uint32_t l = 0; l < count; ++l) {
    Level& lv = levels_[l];
    lv.buckets = ((N_ - 1) >> l) + 1;
    lv.exact = layout_ == SketchLayout::adaptive && lv.buckets <= table;
    if (lv.exact) {
      lv.rows = 1;
      lv.width = lv.buckets;
    } else {
      if (table > kMaxCountersPerLevel) {
        throw ConfigError("sketch level of " + std::to_string(rows_) + " x " + std::to_string(width_) +
                          " counters is too large to allocate");
      }
      lv.rows = rows_;
      lv.width = width_;
      lv.hashes.reserve(rows_);
      for (std::uint32_t r = 0; r < rows_; ++r) {
        CounterRng rng(derive_seed(seed_, {sketch_id_, l, r}));
        RowHash h;
        h.a = (static_cast<unsigned __int128>(rng()) << 64) | rng();
        h.b = (static_cast<unsigned __int128>(rng()) << 64) | rng();
        lv.hashes.push_back(h);
      }
    }
    lv.counters.assign(static_cast<std::size_t>(lv.rows) * lv.width, 0);
  }
}

void DyadicCmSketch::update(std::uint64_t x, std::uint64_t weight) {
  if (x < 1 || x > N_) {
    throw ConfigError("sketch update at " + std::to_string(x) + " outside [1, " + std::to_string(N_) + "]");
  }
  if (weight > std::numeric_limits<std::uint64_t>::max() - total_weight_) {
    throw ConfigError("sketch total weight would overflow 64 bits");
  }
  total_weight_ += weight;
  const std::uint64_t offset = x - 1;
  for (std::uint32_t l = 0; l < levels_.size(); ++l) {
    Level& lv = levels_[l];
    const std::uint64_t bucket = offset >> l;
    if (lv.exact) {
      lv.counters[bucket] += weight;
      continue;
    }
    for (std::uint32_t r = 0; r < lv.rows; ++r) {
      lv.counters[static_cast<std::size_t>(r) * lv.width + lv.hashes[r](bucket, lv.width)] += weight;
    }
  }
}

std::uint64_t DyadicCmSketch::block_estimate(const DyadicInterval& block) const {
  const Level& lv = levels_.at(block.level);
  if (block.index >= lv.buckets) throw ConfigError("dyadic block outside the sketch domain");
  if (lv.exact) return lv.counters[block.index];
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::uint32_t r = 0; r < lv.rows; ++r) {
    best = std::min(best, lv.counters[static_cast<std::size_t>(r) * lv.width + lv.hashes[r](block.index, lv.width)]);
  }
  return best;
}

std::uint64_t DyadicCmSketch::range_query(std::uint64_t lo, std::uint64_t hi) const {
  std::uint64_t total = 0;
  for (const auto& block : dyadic_decompose(lo, hi, N_)) total += block_estimate(block);
  return total;
}

std::uint64_t DyadicCmSketch::counter_count() const {
  std::uint64_t n = 0;
  for (const auto& lv : levels_) n += lv.counters.size();
  return n;
}

std::uint64_t DyadicCmSketch::counters_touched_per_update() const {
  std::uint64_t n = 0;
  for (const auto& lv : levels_) n += lv.rows;
  return n;
}

// Layout: magic, u32 version, u32 layout, u64 N, rows, width, seed, sketch_id,
// total_weight, levels; then per level u64 exact flag and its counters.
// Hash coefficients are re-derived from (seed, sketch_id, level, row).
void DyadicCmSketch::save(std::ostream& out) const {
  out.write(kSketchMagic.data(), kSketchMagic.size());
  detail::write_u32(out, kSketchVersion);
  detail::write_u32(out, static_cast<std::uint32_t>(layout_));
  detail::write_u64(out, N_);
  detail::write_u64(out, rows_);
  detail::write_u64(out, width_);
  detail::write_u64(out, seed_);
  detail::write_u64(out, sketch_id_);
  detail::write_u64(out, total_weight_);
  detail::write_u64(out, levels_.size());
  for (const auto& lv : levels_) {
    detail::write_u64(out, lv.exact ? 1 : 0);
    detail::write_u64(out, lv.counters.size());
    for (std::uint64_t c : lv.counters) detail::write_u64(out, c);
  }
  if (!out) throw IoError("failed writing sketch");
}

DyadicCmSketch DyadicCmSketch::load(std::istream& in) {
  detail::expect_magic(in, kSketchMagic, "sketch");
  const std::uint32_t version = detail::read_u32(in, "version");
  if (version != kSketchVersion) throw FormatError("unsupported sketch version " + std::to_string(version));
  const std::uint32_t layout = detail::read_u32(in, "layout");
  if (layout > 1) throw FormatError("unknown sketch layout " + std::to_string(layout));
  const std::uint64_t N = detail::read_u64(in, "N");
  const std::uint64_t rows = detail::read_u64(in, "rows");
  const std::uint64_t width = detail::read_u64(in, "width");
  const std::uint64_t seed = detail::read_u64(in, "seed");
  const std::uint64_t id = detail::read_u64(in, "sketch id");
  const std::uint64_t total = detail::read_u64(in, "total weight");
  if (rows > std::numeric_limits<std::uint32_t>::max()) throw FormatError("row count out of range");
  DyadicCmSketch sk(N, static_cast<std::uint32_t>(rows), width, seed, id, static_cast<SketchLayout>(layout));
  const std::uint64_t levels = detail::read_u64(in, "level count");
  if (levels != sk.levels_.size()) throw FormatError("level count does not match domain size");
  for (auto& lv : sk.levels_) {
    const std::uint64_t exact = detail::read_u64(in, "level flag");
    const std::uint64_t count = detail::read_u64(in, "counter count");
    if ((exact != 0) != lv.exact || count != lv.counters.size()) {
      throw FormatError("level shape does not match sketch parameters");
    }
    for (auto& c : lv.counters) c = detail::read_u64(in, "counter");
  }
  sk.total_weight_ = total;
  return sk;
}

bool operator==(const DyadicCmSketch& a, const DyadicCmSketch& b) {
  if (a.N_ != b.N_ || a.rows_ != b.rows_ || a.width_ != b.width_ || a.seed_ != b.seed_ ||
      a.sketch_id_ != b.sketch_id_ || a.layout_ != b.layout_ || a.total_weight_ != b.total_weight_ ||
      a.levels_.size() != b.levels_.size()) {
    return false;
  }
  for (std::size_t l = 0; l < a.levels_.size(); ++l) {
    if (a.levels_[l].counters != b.levels_[l].counters) return false;
  }
  return true;
}

}  // namespace streamsplit
