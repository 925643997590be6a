#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "stacksort/errors.hpp"
#include "stacksort/permutation.hpp"

namespace stacksort {

/// The three atomic actions of the two-stack machine: items pass
/// input -> R -> L -> output, where R has bounded depth and L is unbounded.
enum class Move : std::uint8_t {
  kInputToR = 0,
  kRToL = 1,
  kLToOutput = 2,
};

using MoveSequence = std::vector<Move>;

/// Trace text format: 'I' (input->R), 'T' (R->L), 'O' (L->output).
char move_char(Move m);
std::string trace_to_text(const MoveSequence& ms);
MoveSequence parse_trace_text(const std::string& text);

/// Full state of the machine mid-sort. Works on any sequence of distinct
/// values; "sorted" means the values leave in ascending order.
class MachineConfig {
 public:
  MachineConfig(const Permutation& input, std::uint32_t depth);
  MachineConfig(const ValueSequence& input, std::uint32_t depth);

  std::uint32_t depth() const { return depth_; }
  const std::vector<std::uint32_t>& input() const { return input_; }

  /// 1-based index of the next unread entry; n+1 when input is exhausted.
  std::size_t input_cursor() const { return cursor_ + 1; }
  /// Bottom-to-top contents.
  std::span<const std::uint32_t> stack_r() const { return r_; }
  std::span<const std::uint32_t> stack_l() const { return l_; }
  /// The value the output must receive next; 0 once everything is out.
  std::uint32_t next_output() const;
  std::size_t output_count() const { return out_count_; }
  bool done() const { return out_count_ == input_.size(); }

  bool is_legal(Move m) const;
  /// Legal moves in fixed kInputToR < kRToL < kLToOutput order.
  std::vector<Move> legal_moves() const;
  void apply(Move m);  // throws IllegalMove
  MachineConfig applied(Move m) const;

  /// The already-output values, R, L and the unread entries partition the
  /// input values, and |R| never exceeds the depth.
  bool check_invariant() const;

 private:
  void init();
  std::vector<std::uint32_t> input_;
  std::vector<std::uint32_t> ascending_;  // input values in output order
  std::uint32_t depth_ = 1;
  std::size_t cursor_ = 0;  // 0-based count of consumed inputs
  std::size_t out_count_ = 0;
  std::vector<std::uint32_t> r_;
  std::vector<std::uint32_t> l_;
};

struct TraceValidation {
  bool ok = false;
  std::size_t failed_step = 0;  // 1-based index of the offending move
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// Replays ms from the fresh configuration; true iff every step is legal and
/// the run ends with the whole input written out in ascending order.
TraceValidation validate_trace(const Permutation& p, std::uint32_t depth, const MoveSequence& ms);
TraceValidation validate_trace(const ValueSequence& v, std::uint32_t depth, const MoveSequence& ms);

/// Options for the memoized decider. The derivation check recomputes stack L
/// from the memo key at every state and is meant for tests; it is also
/// switched on by default in builds without NDEBUG.
struct DeciderOptions {
  bool check_memo_derivation = false;
};

/// True iff some move sequence sorts p on a depth-t stack feeding an
/// unbounded stack. Depth-first search with memoized failure states plus two
/// prunings: stack L is kept increasing from top to bottom, and an available
/// output is always taken immediately.
bool decide_sortable(const Permutation& p, std::uint32_t depth, const DeciderOptions& = {});

/// A validating move sequence iff p is sortable, nullopt otherwise.
std::optional<MoveSequence> sort_witness(const Permutation& p, std::uint32_t depth);

/// Search over full configurations with no pruning at all (failure states are
/// still cached). Reference oracle for the pruned decider.
bool decide_sortable_reference(const Permutation& p, std::uint32_t depth);

/// Enumerates every successful sorting trace in lexicographic move-kind order
/// using only move legality, no pruning. visit returns false to stop early
/// (not an error). Returns the number of traces visited; throws LimitExceeded
/// if more than limit successful traces exist.
std::uint64_t for_each_sorting_trace(const Permutation& p, std::uint32_t depth,
                                     std::uint64_t limit,
                                     const std::function<bool(const MoveSequence&)>& visit);
std::uint64_t for_each_sorting_trace(const ValueSequence& v, std::uint32_t depth,
                                     std::uint64_t limit,
                                     const std::function<bool(const MoveSequence&)>& visit);

std::vector<MoveSequence> enumerate_sorting_traces(const Permutation& p, std::uint32_t depth,
                                                   std::uint64_t limit);

namespace detail {

/// Reusable decider state; keeping one per thread avoids re-allocating the
/// memo table across millions of calls.
struct SearchScratch {
  std::unordered_set<std::uint64_t> failed;
  std::vector<std::uint32_t> r;
  std::vector<std::uint32_t> l;
  std::vector<Move> moves;
};

/// Decider on a raw sequence of distinct values (ascending target order).
/// witness, when non-null, receives a sorting trace on success.
bool decide_values(std::span<const std::uint32_t> values, std::uint32_t depth,
                   SearchScratch& scratch, MoveSequence* witness = nullptr,
                   bool check_memo_derivation = false);

}  // namespace detail

}  // namespace stacksort
