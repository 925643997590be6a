#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stacksort/machine.hpp"
#include "stacksort/permutation.hpp"

namespace stacksort {

/// An occurrence of a pattern inside a target permutation: strictly
/// increasing 1-based indices whose values read order-isomorphic to pattern.
class Embedding {
 public:
  Embedding(Permutation target, std::vector<std::uint32_t> indices, Permutation pattern);

  const Permutation& target() const { return target_; }
  const std::vector<std::uint32_t>& indices() const { return indices_; }
  const Permutation& pattern() const { return pattern_; }

  /// Value of the k-th embedded entry (1-based).
  std::uint32_t value(std::uint32_t k) const { return target_.at(indices_.at(k - 1)); }
  /// Index of the k-th embedded entry (1-based).
  std::uint32_t index(std::uint32_t k) const { return indices_.at(k - 1); }

 private:
  Permutation target_;
  std::vector<std::uint32_t> indices_;
  Permutation pattern_;
};

/// Every embedding of q in p, lexicographic by index tuple.
std::vector<Embedding> find_embeddings(const Permutation& p, const Permutation& q);

struct LawCounterexample {
  MoveSequence trace;
  /// 1-based move index at which the violation is established; for
  /// whole-trace conditions this is the trace length.
  std::size_t step = 0;
};

struct LawReport {
  int law = 0;
  Permutation perm;
  std::uint32_t depth = 0;
  std::optional<Embedding> embedding;
  std::uint64_t traces_checked = 0;
  bool holds = false;
  std::optional<LawCounterexample> counterexample;
};

inline constexpr std::uint64_t kDefaultTraceBudget = 10'000'000;

/// The pattern each law quantifies over (laws 2..5); law 1 has none.
const Permutation& law_pattern(int law);

/// Checks one structural law against every successful sorting trace of p.
///
///   law 1: entries that must leave in order never stack inverted in L.
///   law 2: no 132-embedded triple sits in R simultaneously.       (t >= 3)
///   law 3: a 243651 embedding forces its 4th and 5th entries to
///          co-reside in R at some step.                           (t >= 3)
///   law 4: in a 32514 embedding, if the first two entries co-reside in R
///          then the 3rd and 5th later co-reside in L.             (t >= 3)
///   law 5: in a 32541 embedding, if the first two entries co-reside in L,
///          then when the first is output the 3rd and 4th are both in R and
///          everything in L entered before the second.             (t >= 3)
///
/// Law 1 ignores the embedding; laws 2..5 require one over their pattern.
/// Unsortable inputs have zero traces and the law holds vacuously.
LawReport check_law(int law, const Permutation& p, std::uint32_t depth,
                    const std::optional<Embedding>& embedding,
                    std::uint64_t trace_budget = kDefaultTraceBudget);

/// Evaluates one law against a single successful trace; returns the 1-based
/// step establishing a violation, or nullopt when the trace satisfies the
/// law. check_law is the all-traces closure of this.
std::optional<std::size_t> law_violation_step(int law, const Permutation& p,
                                              std::uint32_t depth,
                                              const std::optional<Embedding>& embedding,
                                              const MoveSequence& trace);

/// Laws 1 and 2 over all embeddings at once, in a single enumeration pass.
struct LawSweepReport {
  std::uint64_t traces_checked = 0;
  bool law1_holds = true;
  bool law2_holds = true;
  std::optional<LawCounterexample> law1_counterexample;
  std::optional<LawCounterexample> law2_counterexample;
};
LawSweepReport sweep_laws_1_2(const Permutation& p, std::uint32_t depth,
                              std::uint64_t trace_budget = kDefaultTraceBudget);

}  // namespace stacksort
