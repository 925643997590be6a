#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "stacksort/machine.hpp"
#include "stacksort/permutation.hpp"

namespace stacksort {

/// A minimal unsortable permutation: unsortable itself, every one-point
/// deletion sortable.
struct BasisRecord {
  Permutation perm;
  std::uint32_t length;
  std::uint32_t depth;
  bool verified;
};

/// The set of sortable permutations of one length, packed and sorted; the
/// unit of resumable length-by-length enumeration.
///
/// On disk (bit-exact): magic "SPRM", version byte 0x01, one byte length, one
/// byte depth, 8-byte little-endian record count, then count 8-byte
/// little-endian packed permutations sorted ascending as unsigned integers.
class SweepCheckpoint {
 public:
  SweepCheckpoint(std::uint32_t length, std::uint32_t depth,
                  std::vector<std::uint64_t> sorted_packed);

  /// The length-1 checkpoint: the one-entry permutation, sortable at every
  /// depth.
  static SweepCheckpoint seed(std::uint32_t depth);

  std::uint32_t length() const { return length_; }
  std::uint32_t depth() const { return depth_; }
  std::uint64_t count() const { return records_.size(); }
  const std::vector<std::uint64_t>& records() const { return records_; }
  bool contains_packed(std::uint64_t rec) const;

  void save(const std::filesystem::path& file) const;
  static SweepCheckpoint load(const std::filesystem::path& file);
  /// Canonical file name inside a checkpoint directory.
  static std::filesystem::path file_name(std::uint32_t length, std::uint32_t depth);

 private:
  std::uint32_t length_;
  std::uint32_t depth_;
  std::vector<std::uint64_t> records_;
};

struct SweepOptions {
  std::uint32_t jobs = 1;
  /// Lengths 11..16 are combinatorially heavy and must be asked for.
  bool allow_long = false;
  std::optional<std::filesystem::path> checkpoint_dir;
};

/// Sortable count for length n from the length n-1 checkpoint. Candidates
/// are the one-point extensions of prev's members (downward closure makes
/// this exhaustive); each is screened by membership of all its deletions in
/// prev before the decider runs.
std::pair<std::uint64_t, SweepCheckpoint> count_sortable(std::uint32_t n, std::uint32_t depth,
                                                         const SweepCheckpoint& prev,
                                                         const SweepOptions& opts = {});

/// The length-n basis elements: screened candidates that are unsortable.
/// Every returned record is re-verified entry by entry.
std::vector<BasisRecord> enumerate_basis(std::uint32_t n, std::uint32_t depth,
                                         const SweepCheckpoint& prev,
                                         const SweepOptions& opts = {});

struct SweepRow {
  std::uint32_t n;
  std::uint64_t sortable;
  std::uint64_t basis;
};

/// Rows for n = 1..n_max. Resumes from the highest valid checkpoint in
/// checkpoint_dir when one is present; output does not depend on jobs.
std::vector<SweepRow> run_length_sweep(std::uint32_t n_max, std::uint32_t depth,
                                       const SweepOptions& opts = {});

struct BasisSweepResult {
  std::vector<SweepRow> rows;
  /// Sorted by length, then by packed encoding.
  std::vector<BasisRecord> basis;
};

/// Like run_length_sweep, additionally collecting the verified basis records
/// of every length.
BasisSweepResult run_basis_sweep(std::uint32_t n_max, std::uint32_t depth,
                                 const SweepOptions& opts = {});

}  // namespace stacksort
