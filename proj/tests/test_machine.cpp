#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "stacksort/machine.hpp"
#include "test_util.hpp"

using namespace stacksort;
using testutil::all_permutations;
using testutil::random_permutation;

namespace {

const Permutation kExample = Permutation::parse("243651");
const Permutation kG0(std::vector<std::uint32_t>{2, 4, 3, 7, 6, 1, 10, 5, 9, 13, 12, 8, 14, 15,
                                                 11});

// The worked sorting process for 243651 at depth 3.
const char* kExampleTrace = "I I T I T T I I I T O O O O T O T O";

}  // namespace

TEST_CASE("trace text round-trips") {
  const auto ms = parse_trace_text(kExampleTrace);
  CHECK(ms.size() == 18);
  CHECK(trace_to_text(ms) == kExampleTrace);
  CHECK_THROWS_AS(parse_trace_text("I X"), ParseError);
}

TEST_CASE("legal moves on fresh, saturated and terminal configurations") {
  MachineConfig fresh(kExample, 3);
  CHECK(fresh.legal_moves() == std::vector<Move>{Move::kInputToR});

  MachineConfig cfg(Permutation::parse("4321"), 2);
  cfg.apply(Move::kInputToR);
  cfg.apply(Move::kInputToR);  // R = [4,3], full
  CHECK(cfg.legal_moves() == std::vector<Move>{Move::kRToL});

  MachineConfig done(Permutation::parse("1"), 1);
  done.apply(Move::kInputToR);
  done.apply(Move::kRToL);
  done.apply(Move::kLToOutput);
  CHECK(done.done());
  CHECK(done.legal_moves().empty());
}

TEST_CASE("apply_move updates the configuration and rejects illegal moves") {
  MachineConfig cfg(kExample, 3);
  CHECK(cfg.input_cursor() == 1);
  cfg.apply(Move::kInputToR);
  CHECK(cfg.input_cursor() == 2);
  REQUIRE(cfg.stack_r().size() == 1);
  CHECK(cfg.stack_r()[0] == 2);
  CHECK(cfg.check_invariant());

  cfg.apply(Move::kRToL);
  REQUIRE(cfg.stack_l().size() == 1);
  CHECK(cfg.stack_l()[0] == 2);
  CHECK(cfg.next_output() == 1);
  CHECK_THROWS_AS(cfg.apply(Move::kLToOutput), IllegalMove);
  CHECK_THROWS_AS(cfg.apply(Move::kRToL), IllegalMove);
  CHECK(cfg.check_invariant());

  MachineConfig out(Permutation::parse("1"), 1);
  out.apply(Move::kInputToR);
  out.apply(Move::kRToL);
  CHECK(out.next_output() == 1);
  out.apply(Move::kLToOutput);
  CHECK(out.output_count() == 1);
}

TEST_CASE("the worked trace validates at depth 3 but not depth 2") {
  const auto ms = parse_trace_text(kExampleTrace);
  CHECK(validate_trace(kExample, 3, ms).ok);

  const auto at2 = validate_trace(kExample, 2, ms);
  CHECK_FALSE(at2.ok);
  CHECK(at2.failed_step == 9);  // third consecutive input push needs depth 3
}

TEST_CASE("identity sorts with the cyclic trace at depth 1") {
  MoveSequence ms;
  for (int k = 0; k < 3; ++k) {
    ms.push_back(Move::kInputToR);
    ms.push_back(Move::kRToL);
    ms.push_back(Move::kLToOutput);
  }
  CHECK(validate_trace(Permutation::identity(3), 1, ms).ok);
}

TEST_CASE("over-filling R invalidates a trace") {
  for (std::uint32_t t = 1; t <= 3; ++t) {
    MoveSequence ms(t + 1, Move::kInputToR);
    const auto v = validate_trace(Permutation::identity(t + 1), t, ms);
    CHECK_FALSE(v.ok);
    CHECK(v.failed_step == t + 1);
  }
}

TEST_CASE("an incomplete trace does not validate") {
  const auto v = validate_trace(Permutation::parse("12"), 1,
                                parse_trace_text("I T O I"));
  CHECK_FALSE(v.ok);
  CHECK(v.reason.find("before the input was fully sorted") != std::string::npos);
}

TEST_CASE("decide_sortable on the worked examples") {
  CHECK(decide_sortable(kExample, 3));
  CHECK(decide_sortable(kExample, 4));
  CHECK_FALSE(decide_sortable(kExample, 2));
  CHECK_FALSE(decide_sortable(Permutation::parse("231"), 1));
  for (std::uint32_t n = 1; n <= 9; ++n) {
    CHECK(decide_sortable(Permutation::identity(n), 1));
    CHECK(decide_sortable(Permutation::identity(n), 3));
  }
  CHECK_FALSE(decide_sortable(kG0, 3));
}

TEST_CASE("memo-key derivation of stack L holds across a full sweep") {
  DeciderOptions opts;
  opts.check_memo_derivation = true;
  for (std::uint32_t n = 1; n <= 6; ++n) {
    for (const auto& p : all_permutations(n)) {
      (void)decide_sortable(p, 3, opts);
      (void)decide_sortable(p, 1, opts);
    }
  }
}

TEST_CASE("depth-1 sortability is exactly 231-avoidance for short lengths") {
  const auto pat = Permutation::parse("231");
  for (std::uint32_t n = 1; n <= 6; ++n) {
    for (const auto& p : all_permutations(n)) {
      CHECK(decide_sortable(p, 1) == !contains(p, pat));
    }
  }
}

TEST_CASE("pruned decider agrees with the unpruned reference search") {
  for (std::uint32_t n = 1; n <= 5; ++n) {
    for (const auto& p : all_permutations(n)) {
      for (std::uint32_t t = 1; t <= 3; ++t) {
        CHECK(decide_sortable(p, t) == decide_sortable_reference(p, t));
      }
    }
  }
}

TEST_CASE("sortability is monotone in depth and closed under deletion") {
  std::mt19937_64 rng(99);
  for (std::uint32_t n = 1; n <= 6; ++n) {
    for (const auto& p : all_permutations(n)) {
      for (std::uint32_t t = 1; t <= 2; ++t) {
        if (decide_sortable(p, t)) CHECK(decide_sortable(p, t + 1));
      }
      if (decide_sortable(p, 2)) {
        for (std::uint32_t i = 1; i <= n && n > 1; ++i) {
          CHECK(decide_sortable(p.delete_at(i), 2));
        }
      }
    }
  }
  // Random spot checks at larger lengths.
  for (int iter = 0; iter < 40; ++iter) {
    const auto p = random_permutation(static_cast<std::uint32_t>(8 + rng() % 5), rng);
    if (!decide_sortable(p, 3)) continue;
    for (std::uint32_t i = 1; i <= p.size(); ++i) {
      CHECK(decide_sortable(p.delete_at(i), 3));
    }
  }
}

TEST_CASE("witness exists exactly for sortable inputs and always validates") {
  for (std::uint32_t n = 1; n <= 6; ++n) {
    for (const auto& p : all_permutations(n)) {
      for (std::uint32_t t : {1u, 3u}) {
        const auto w = sort_witness(p, t);
        CHECK(w.has_value() == decide_sortable(p, t));
        if (w) {
          CHECK(validate_trace(p, t, *w).ok);
          // A sorting trace moves every entry through both stacks.
          std::map<Move, std::size_t> counts;
          for (auto m : *w) ++counts[m];
          CHECK(counts[Move::kInputToR] == n);
          CHECK(counts[Move::kRToL] == n);
          CHECK(counts[Move::kLToOutput] == n);
        }
      }
    }
  }
}

TEST_CASE("the singleton has exactly one sorting trace") {
  const auto traces = enumerate_sorting_traces(Permutation::parse("1"), 1, 100);
  REQUIRE(traces.size() == 1);
  CHECK(trace_to_text(traces[0]) == "I T O");
}

TEST_CASE("every enumerated trace validates and traces come out in lexicographic order") {
  const auto traces = enumerate_sorting_traces(Permutation::parse("21"), 2, 10'000);
  CHECK(!traces.empty());
  std::set<MoveSequence> distinct;
  for (const auto& ms : traces) {
    CHECK(validate_trace(Permutation::parse("21"), 2, ms).ok);
    distinct.insert(ms);
  }
  CHECK(distinct.size() == traces.size());
  auto as_bytes = [](const MoveSequence& ms) {
    return std::vector<std::uint8_t>(reinterpret_cast<const std::uint8_t*>(ms.data()),
                                     reinterpret_cast<const std::uint8_t*>(ms.data()) +
                                         ms.size());
  };
  for (std::size_t i = 1; i < traces.size(); ++i) {
    CHECK(as_bytes(traces[i - 1]) < as_bytes(traces[i]));
  }
}

TEST_CASE("every sorting of the worked example keeps its two middle entries in R together") {
  // With pattern 243651 embedded at the identity indices, entries 6 and 5
  // must co-reside in R at some step of every successful trace.
  std::uint64_t count = for_each_sorting_trace(kExample, 3, 1'000'000,
                                               [&](const MoveSequence& ms) {
    MachineConfig cfg(kExample, 3);
    bool together = false;
    for (auto m : ms) {
      cfg.apply(m);
      const auto r = cfg.stack_r();
      bool has5 = false, has6 = false;
      for (auto v : r) {
        has5 |= v == 5;
        has6 |= v == 6;
      }
      together |= has5 && has6;
    }
    CHECK(together);
    return true;
  });
  CHECK(count > 0);
}

TEST_CASE("trace enumeration is nonempty exactly for sortable inputs") {
  for (std::uint32_t n = 1; n <= 6; ++n) {
    for (const auto& p : all_permutations(n)) {
      bool nonempty = false;
      for_each_sorting_trace(p, 3, UINT64_MAX, [&](const MoveSequence&) {
        nonempty = true;
        return false;  // stop at the first trace
      });
      CHECK(nonempty == decide_sortable(p, 3));
    }
  }
}

TEST_CASE("exceeding the trace limit raises") {
  CHECK_THROWS_AS(enumerate_sorting_traces(Permutation::identity(4), 2, 1), LimitExceeded);
}
