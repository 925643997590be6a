#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stacksort/errors.hpp"

namespace stacksort {

/// A sequence of pairwise-distinct positive integers. Unlike Permutation the
/// values need not form a contiguous range; this is the working type for the
/// shifted building blocks used by the antichain constructions.
class ValueSequence {
 public:
  ValueSequence() = default;
  explicit ValueSequence(std::vector<std::uint32_t> entries);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<std::uint32_t>& entries() const { return entries_; }

  /// 1-based access.
  std::uint32_t at(std::size_t pos) const;

  /// Entry-wise addition of m; every result must stay >= 1.
  ValueSequence shifted(std::int64_t m) const;

  ValueSequence& append(const ValueSequence& tail);

  bool operator==(const ValueSequence&) const = default;

 private:
  std::vector<std::uint32_t> entries_;
};

ValueSequence shift(const ValueSequence& v, std::int64_t m);

/// A permutation of {1..n} in one-line notation, n >= 1.
class Permutation {
 public:
  explicit Permutation(std::vector<std::uint32_t> entries);
  explicit Permutation(const ValueSequence& seq) : Permutation(seq.entries()) {}

  static Permutation identity(std::uint32_t n);

  /// Accepts whitespace- or comma-separated decimals, or a compact digit
  /// string ("243651") when every value is a single digit.
  static Permutation parse(const std::string& text);

  /// Space-separated decimals.
  std::string render() const;

  /// Fixed-width encoding for n <= 16: 4 bits per entry, the first entry in
  /// the lowest nibble, each nibble holding value-1.
  std::uint64_t packed() const;
  static Permutation from_packed(std::uint64_t bits, std::uint32_t n);
  static constexpr std::uint32_t kMaxPackedLength = 16;

  std::uint32_t size() const { return static_cast<std::uint32_t>(entries_.size()); }
  const std::vector<std::uint32_t>& entries() const { return entries_; }

  /// 1-based position access.
  std::uint32_t at(std::uint32_t pos) const;
  /// 1-based position of a value.
  std::uint32_t position_of(std::uint32_t value) const;

  /// Remove the entry at 1-based position pos and renormalize to {1..n-1}.
  Permutation delete_at(std::uint32_t pos) const;

  bool operator==(const Permutation&) const = default;
  /// Lexicographic on the one-line form (total order; usable as map key).
  bool operator<(const Permutation& other) const { return entries_ < other.entries_; }

 private:
  Permutation() = default;
  std::vector<std::uint32_t> entries_;
};

/// True iff p has a subsequence order-isomorphic to q.
bool contains(const Permutation& p, const Permutation& q);

/// Lexicographically first witness (1-based, strictly increasing indices into
/// p whose values are order-isomorphic to q), or nullopt.
std::optional<std::vector<std::uint32_t>> containment_witness(const Permutation& p,
                                                              const Permutation& q);

/// All q of length n+1 with some one-point deletion equal to p, sorted.
std::vector<Permutation> one_point_extensions(const Permutation& p);

struct AntichainCheck {
  bool ok = true;
  /// When !ok, .first contains .second.
  std::optional<std::pair<Permutation, Permutation>> violation;
  explicit operator bool() const { return ok; }
};

/// True iff no member contains a different member.
AntichainCheck is_antichain(const std::vector<Permutation>& ps);

namespace detail {

/// Visits every embedding of q in p (0-based index tuples, lexicographic
/// order); visit returns false to stop early. Returns true when the
/// enumeration ran to completion.
bool for_each_embedding0(const std::vector<std::uint32_t>& p, const std::vector<std::uint32_t>& q,
                         const std::function<bool(const std::vector<std::uint32_t>&)>& visit);

}  // namespace detail

}  // namespace stacksort
