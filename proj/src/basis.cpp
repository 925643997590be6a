#include "stacksort/basis.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <thread>

namespace stacksort {

namespace {

constexpr std::uint32_t kMaxLength = Permutation::kMaxPackedLength;
constexpr std::uint32_t kDeskScaleMax = 10;
// Extension arcs processed per batch; bounds transient memory for long runs.
constexpr std::size_t kArcsPerBatch = std::size_t{1} << 26;

// ---- packed nibble helpers (value v stored as v-1, first entry lowest) ----

std::uint64_t packed_insert(std::uint64_t parent, std::uint32_t n_parent, std::uint32_t value,
                            std::uint32_t pos) {
  // Bump stored nibbles >= value-1, then splice the new nibble in at pos.
  std::uint64_t bumped = 0;
  for (std::uint32_t i = 0; i < n_parent; ++i) {
    std::uint64_t s = (parent >> (4 * i)) & 0xF;
    if (s >= value - 1) ++s;
    bumped |= s << (4 * i);
  }
  const std::uint32_t shift = 4 * (pos - 1);
  const std::uint64_t low_mask = (pos == 1) ? 0 : ((std::uint64_t{1} << shift) - 1);
  return (bumped & low_mask) | (std::uint64_t{value - 1} << shift) |
         ((bumped & ~low_mask) << 4);
}

std::uint64_t packed_delete(std::uint64_t child, std::uint32_t n_child, std::uint32_t pos) {
  const std::uint32_t shift = 4 * (pos - 1);
  const std::uint64_t removed = (child >> shift) & 0xF;
  const std::uint64_t low_mask = (pos == 1) ? 0 : ((std::uint64_t{1} << shift) - 1);
  std::uint64_t spliced = (child & low_mask) | ((child >> 4) & ~low_mask);
  std::uint64_t out = 0;
  for (std::uint32_t i = 0; i + 1 < n_child; ++i) {
    std::uint64_t s = (spliced >> (4 * i)) & 0xF;
    if (s > removed) --s;
    out |= s << (4 * i);
  }
  return out;
}

void packed_unpack(std::uint64_t bits, std::uint32_t n, std::uint32_t* out) {
  for (std::uint32_t i = 0; i < n; ++i) {
    out[i] = static_cast<std::uint32_t>((bits >> (4 * i)) & 0xF) + 1;
  }
}

// ---- deterministic sharded execution ---------------------------------------

void parallel_shards(std::size_t count, std::uint32_t jobs,
                     const std::function<void(std::uint32_t, std::size_t, std::size_t)>& fn) {
  const std::uint32_t workers =
      std::max<std::uint32_t>(1, std::min<std::uint32_t>(jobs, static_cast<std::uint32_t>(count ? count : 1)));
  if (workers == 1) {
    fn(0, 0, count);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::uint32_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    threads.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
  }
  for (auto& t : threads) t.join();
}

void check_step_arguments(std::uint32_t n, std::uint32_t depth, const SweepCheckpoint& prev,
                          const SweepOptions& opts) {
  if (n < 2) throw std::invalid_argument("stepping starts at length 2");
  if (n > kMaxLength) {
    throw ResourceBudgetExceeded("the packed sweep covers lengths up to 16");
  }
  if (n > kDeskScaleMax && !opts.allow_long) {
    throw ResourceBudgetExceeded("lengths above 10 are long-running; pass allow_long");
  }
  if (prev.length() != n - 1 || prev.depth() != depth) {
    throw CheckpointMismatch("previous checkpoint is for length " +
                             std::to_string(prev.length()) + ", depth " +
                             std::to_string(prev.depth()));
  }
}

// Extensions of prev's members whose one-point deletions all lie in prev.
// Work runs in parent batches so transient memory stays bounded; the result
// is sorted and duplicate-free.
std::vector<std::uint64_t> screened_candidates(std::uint32_t n, const SweepCheckpoint& prev,
                                               std::uint32_t jobs) {
  const auto& parents = prev.records();
  const std::size_t arcs_per_parent = static_cast<std::size_t>(n) * n;
  const std::size_t parents_per_batch =
      std::max<std::size_t>(1, kArcsPerBatch / arcs_per_parent);

  std::vector<std::uint64_t> screened;  // sorted, distinct
  for (std::size_t batch_begin = 0; batch_begin < parents.size();
       batch_begin += parents_per_batch) {
    const std::size_t batch_end = std::min(parents.size(), batch_begin + parents_per_batch);
    const std::size_t batch_count = batch_end - batch_begin;

    std::vector<std::vector<std::uint64_t>> shard_out(jobs ? jobs : 1);
    parallel_shards(batch_count, jobs, [&](std::uint32_t w, std::size_t b, std::size_t e) {
      auto& out = shard_out[w];
      for (std::size_t k = b; k < e; ++k) {
        const std::uint64_t parent = parents[batch_begin + k];
        for (std::uint32_t v = 1; v <= n; ++v) {
          for (std::uint32_t pos = 1; pos <= n; ++pos) {
            out.push_back(packed_insert(parent, n - 1, v, pos));
          }
        }
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      // Keep only candidates with every deletion in prev. The generating
      // deletion is among them, so nothing sortable is lost.
      std::size_t kept = 0;
      for (std::uint64_t c : out) {
        bool all_in = true;
        for (std::uint32_t pos = 1; pos <= n && all_in; ++pos) {
          all_in = prev.contains_packed(packed_delete(c, n, pos));
        }
        if (all_in) out[kept++] = c;
      }
      out.resize(kept);
    });

    std::vector<std::uint64_t> batch_candidates;
    for (auto& part : shard_out) {
      const std::size_t mid = batch_candidates.size();
      batch_candidates.insert(batch_candidates.end(), part.begin(), part.end());
      std::inplace_merge(batch_candidates.begin(), batch_candidates.begin() + mid,
                         batch_candidates.end());
      part.clear();
      part.shrink_to_fit();
    }
    batch_candidates.erase(std::unique(batch_candidates.begin(), batch_candidates.end()),
                           batch_candidates.end());

    const std::size_t mid = screened.size();
    screened.insert(screened.end(), batch_candidates.begin(), batch_candidates.end());
    std::inplace_merge(screened.begin(), screened.begin() + mid, screened.end());
    screened.erase(std::unique(screened.begin(), screened.end()), screened.end());
  }
  return screened;
}

struct StepResult {
  std::vector<std::uint64_t> sortable;
  std::vector<std::uint64_t> basis;
};

StepResult sweep_step(std::uint32_t n, std::uint32_t depth, const SweepCheckpoint& prev,
                      std::uint32_t jobs) {
  const auto candidates = screened_candidates(n, prev, jobs);

  std::vector<std::uint8_t> sortable_flag(candidates.size(), 0);
  parallel_shards(candidates.size(), jobs, [&](std::uint32_t, std::size_t b, std::size_t e) {
    detail::SearchScratch scratch;
    std::array<std::uint32_t, kMaxLength> values{};
    for (std::size_t k = b; k < e; ++k) {
      packed_unpack(candidates[k], n, values.data());
      sortable_flag[k] =
          detail::decide_values(std::span<const std::uint32_t>(values.data(), n), depth, scratch)
              ? 1
              : 0;
    }
  });

  StepResult result;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    (sortable_flag[k] ? result.sortable : result.basis).push_back(candidates[k]);
  }
  return result;
}

std::uint64_t recount_basis(std::uint32_t n, const SweepCheckpoint& prev,
                            const SweepCheckpoint& current, std::uint32_t jobs,
                            std::vector<std::uint64_t>* packed_out) {
  std::uint64_t count = 0;
  for (std::uint64_t c : screened_candidates(n, prev, jobs)) {
    if (!current.contains_packed(c)) {
      ++count;
      if (packed_out) packed_out->push_back(c);
    }
  }
  return count;
}

std::vector<BasisRecord> verified_records(const std::vector<std::uint64_t>& packed,
                                          std::uint32_t n, std::uint32_t depth,
                                          std::uint32_t jobs) {
  std::vector<std::optional<BasisRecord>> slots(packed.size());
  parallel_shards(packed.size(), jobs, [&](std::uint32_t, std::size_t b, std::size_t e) {
    detail::SearchScratch scratch;
    for (std::size_t k = b; k < e; ++k) {
      Permutation perm = Permutation::from_packed(packed[k], n);
      bool verified = !detail::decide_values(perm.entries(), depth, scratch);
      for (std::uint32_t pos = 1; pos <= n && verified; ++pos) {
        verified = detail::decide_values(perm.delete_at(pos).entries(), depth, scratch);
      }
      slots[k] = BasisRecord{std::move(perm), n, depth, verified};
    }
  });
  std::vector<BasisRecord> out;
  out.reserve(packed.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// Shared driver for the public sweeps.
BasisSweepResult sweep_driver(std::uint32_t n_max, std::uint32_t depth, const SweepOptions& opts,
                              bool collect_records) {
  if (n_max < 1) throw std::invalid_argument("sweep needs a length of at least 1");
  if (depth < 1) throw std::invalid_argument("stack depth must be at least 1");
  if (n_max > kMaxLength) {
    throw ResourceBudgetExceeded("the packed sweep covers lengths up to 16");
  }
  if (n_max > kDeskScaleMax && !opts.allow_long) {
    throw ResourceBudgetExceeded("lengths above 10 are long-running; pass allow_long");
  }

  auto checkpoint_path = [&](std::uint32_t n) -> std::optional<std::filesystem::path> {
    if (!opts.checkpoint_dir) return std::nullopt;
    return *opts.checkpoint_dir / SweepCheckpoint::file_name(n, depth);
  };
  auto try_load = [&](std::uint32_t n) -> std::optional<SweepCheckpoint> {
    const auto path = checkpoint_path(n);
    if (!path || !std::filesystem::exists(*path)) return std::nullopt;
    SweepCheckpoint ck = SweepCheckpoint::load(*path);
    if (ck.length() != n || ck.depth() != depth) {
      throw CheckpointMismatch("checkpoint " + path->string() + " is for length " +
                               std::to_string(ck.length()) + ", depth " +
                               std::to_string(ck.depth()));
    }
    return ck;
  };

  BasisSweepResult result;
  SweepCheckpoint current = SweepCheckpoint::seed(depth);
  result.rows.push_back(SweepRow{1, current.count(), 0});
  if (opts.checkpoint_dir) {
    std::filesystem::create_directories(*opts.checkpoint_dir);
    if (!try_load(1)) current.save(*checkpoint_path(1));
  }

  for (std::uint32_t n = 2; n <= n_max; ++n) {
    std::vector<std::uint64_t> basis_packed;
    std::uint64_t basis_count = 0;
    if (auto loaded = try_load(n)) {
      basis_count = recount_basis(n, current, *loaded,
                                  opts.jobs, collect_records ? &basis_packed : nullptr);
      current = std::move(*loaded);
    } else {
      StepResult step = sweep_step(n, depth, current, opts.jobs);
      basis_count = step.basis.size();
      basis_packed = std::move(step.basis);
      current = SweepCheckpoint(n, depth, std::move(step.sortable));
      if (const auto path = checkpoint_path(n)) current.save(*path);
    }
    result.rows.push_back(SweepRow{n, current.count(), basis_count});
    if (collect_records) {
      auto records = verified_records(basis_packed, n, depth, opts.jobs);
      result.basis.insert(result.basis.end(), std::make_move_iterator(records.begin()),
                          std::make_move_iterator(records.end()));
    }
  }
  return result;
}

}  // namespace

SweepCheckpoint::SweepCheckpoint(std::uint32_t length, std::uint32_t depth,
                                 std::vector<std::uint64_t> sorted_packed)
    : length_(length), depth_(depth), records_(std::move(sorted_packed)) {
  if (length_ < 1 || length_ > kMaxLength) {
    throw std::invalid_argument("checkpoint length must be 1..16");
  }
  if (depth_ < 1) throw std::invalid_argument("checkpoint depth must be at least 1");
  if (!std::is_sorted(records_.begin(), records_.end()) ||
      std::adjacent_find(records_.begin(), records_.end()) != records_.end()) {
    throw std::invalid_argument("checkpoint records must be strictly ascending");
  }
}

SweepCheckpoint SweepCheckpoint::seed(std::uint32_t depth) {
  return SweepCheckpoint(1, depth, {Permutation::identity(1).packed()});
}

bool SweepCheckpoint::contains_packed(std::uint64_t rec) const {
  return std::binary_search(records_.begin(), records_.end(), rec);
}

namespace {

void put_u64le(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

}  // namespace

void SweepCheckpoint::save(const std::filesystem::path& file) const {
  std::string bytes;
  bytes.reserve(15 + 8 * records_.size());
  bytes += "SPRM";
  bytes.push_back(0x01);
  bytes.push_back(static_cast<char>(length_));
  bytes.push_back(static_cast<char>(depth_));
  put_u64le(bytes, records_.size());
  for (auto r : records_) put_u64le(bytes, r);

  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open checkpoint file for writing: " + file.string());
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("checkpoint write failed: " + file.string());
}

SweepCheckpoint SweepCheckpoint::load(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw CorruptCheckpoint("cannot open checkpoint file: " + file.string());
  std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());

  auto fail = [&](const std::string& why) -> SweepCheckpoint {
    throw CorruptCheckpoint("checkpoint " + file.string() + ": " + why);
  };
  if (bytes.size() < 15) return fail("truncated header");
  if (bytes.compare(0, 4, "SPRM") != 0) return fail("bad magic");
  if (bytes[4] != 0x01) return fail("unsupported format version");
  const std::uint32_t n = static_cast<std::uint8_t>(bytes[5]);
  const std::uint32_t t = static_cast<std::uint8_t>(bytes[6]);
  if (n < 1 || n > kMaxLength || t < 1) return fail("length or depth out of range");
  std::uint64_t count = 0;
  for (int b = 0; b < 8; ++b) {
    count |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(bytes[7 + b])) << (8 * b);
  }
  if (bytes.size() != 15 + 8 * count) return fail("record area does not match the count");

  std::vector<std::uint64_t> records(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) {
      v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(bytes[15 + 8 * k + b]))
           << (8 * b);
    }
    records[k] = v;
  }
  if (!std::is_sorted(records.begin(), records.end()) ||
      std::adjacent_find(records.begin(), records.end()) != records.end()) {
    return fail("records are not strictly ascending");
  }
  return SweepCheckpoint(n, t, std::move(records));
}

std::filesystem::path SweepCheckpoint::file_name(std::uint32_t length, std::uint32_t depth) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%u_n%02u.sprm", depth, length);
  return buf;
}

std::pair<std::uint64_t, SweepCheckpoint> count_sortable(std::uint32_t n, std::uint32_t depth,
                                                         const SweepCheckpoint& prev,
                                                         const SweepOptions& opts) {
  check_step_arguments(n, depth, prev, opts);
  StepResult step = sweep_step(n, depth, prev, opts.jobs);
  SweepCheckpoint ck(n, depth, std::move(step.sortable));
  const std::uint64_t count = ck.count();
  return {count, std::move(ck)};
}

std::vector<BasisRecord> enumerate_basis(std::uint32_t n, std::uint32_t depth,
                                         const SweepCheckpoint& prev, const SweepOptions& opts) {
  check_step_arguments(n, depth, prev, opts);
  StepResult step = sweep_step(n, depth, prev, opts.jobs);
  return verified_records(step.basis, n, depth, opts.jobs);
}

std::vector<SweepRow> run_length_sweep(std::uint32_t n_max, std::uint32_t depth,
                                       const SweepOptions& opts) {
  return sweep_driver(n_max, depth, opts, false).rows;
}

BasisSweepResult run_basis_sweep(std::uint32_t n_max, std::uint32_t depth,
                                 const SweepOptions& opts) {
  return sweep_driver(n_max, depth, opts, true);
}

}  // namespace stacksort
