#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "stacksort/laws.hpp"
#include "test_util.hpp"

using namespace stacksort;
using testutil::all_permutations;
using testutil::order_isomorphic;

namespace {

Embedding identity_embedding(const Permutation& p) {
  std::vector<std::uint32_t> idx(p.size());
  for (std::uint32_t i = 0; i < p.size(); ++i) idx[i] = i + 1;
  return Embedding(p, std::move(idx), p);
}

}  // namespace

TEST_CASE("find_embeddings yields valid, lexicographically ordered witnesses") {
  const auto p = Permutation::parse("512634");
  const auto q = Permutation::parse("231");
  const auto es = find_embeddings(p, q);
  REQUIRE(!es.empty());

  bool has_563 = false;
  for (const auto& e : es) {
    std::vector<std::uint32_t> sub;
    for (auto i : e.indices()) sub.push_back(p.at(i));
    CHECK(order_isomorphic(sub, q.entries()));
    has_563 = has_563 || sub == std::vector<std::uint32_t>{5, 6, 3};
  }
  CHECK(has_563);
  for (std::size_t i = 1; i < es.size(); ++i) {
    CHECK(es[i - 1].indices() < es[i].indices());
  }

  CHECK(find_embeddings(q, q).size() == 1);
  CHECK(find_embeddings(Permutation::parse("123"), Permutation::parse("21")).empty());
}

TEST_CASE("embedding construction validates its invariant") {
  const auto p = Permutation::parse("512634");
  CHECK_THROWS_AS(Embedding(p, {1, 2}, Permutation::parse("231")), std::invalid_argument);
  CHECK_THROWS_AS(Embedding(p, {2, 1, 3}, Permutation::parse("231")), std::invalid_argument);
  CHECK_THROWS_AS(Embedding(p, {1, 2, 3}, Permutation::parse("231")), std::invalid_argument);
  CHECK_NOTHROW(Embedding(p, {1, 4, 5}, Permutation::parse("231")));
}

TEST_CASE("laws hold on their defining instances") {
  const auto p243651 = Permutation::parse("243651");
  const auto p32514 = Permutation::parse("32514");
  const auto p32541 = Permutation::parse("32541");

  auto r1 = check_law(1, p243651, 3, std::nullopt);
  CHECK(r1.holds);
  CHECK(r1.traces_checked > 0);

  for (const auto& e : find_embeddings(p243651, law_pattern(2))) {
    CHECK(check_law(2, p243651, 3, e).holds);
  }

  auto r3 = check_law(3, p243651, 3, identity_embedding(p243651));
  CHECK(r3.holds);
  CHECK(r3.traces_checked > 0);

  auto r4 = check_law(4, p32514, 3, identity_embedding(p32514));
  CHECK(r4.holds);
  CHECK(r4.traces_checked > 0);

  auto r5 = check_law(5, p32541, 3, identity_embedding(p32541));
  CHECK(r5.holds);
  CHECK(r5.traces_checked > 0);
}

TEST_CASE("law checks are vacuous on unsortable inputs") {
  const Permutation g0(std::vector<std::uint32_t>{2, 4, 3, 7, 6, 1, 10, 5, 9, 13, 12, 8, 14, 15,
                                                  11});
  REQUIRE_FALSE(decide_sortable(g0, 3));
  const auto r = check_law(1, g0, 3, std::nullopt);
  CHECK(r.holds);
  CHECK(r.traces_checked == 0);
}

TEST_CASE("mismatched embeddings are rejected") {
  const auto p = Permutation::parse("243651");
  CHECK_THROWS_AS(check_law(3, p, 3, std::nullopt), WrongPattern);
  // A 132 embedding is the wrong shape for law 3.
  const auto e132 = find_embeddings(p, law_pattern(2)).front();
  CHECK_THROWS_AS(check_law(3, p, 3, e132), WrongPattern);
  // An embedding into a different target is rejected even with the right pattern.
  const auto other = Permutation::parse("351624");
  const auto e = identity_embedding(Permutation::parse("243651"));
  CHECK_THROWS_AS(check_law(3, other, 3, e), WrongPattern);
  CHECK_THROWS_AS(check_law(6, p, 3, std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(check_law(2, p, 2, e132), std::invalid_argument);
}

TEST_CASE("a tiny trace budget is an error, not a pass") {
  CHECK_THROWS_AS(check_law(1, Permutation::identity(5), 3, std::nullopt, 2),
                  TraceBudgetExceeded);
}

TEST_CASE("laws 1 and 2 hold across all sortable short permutations") {
  for (std::uint32_t n = 1; n <= 5; ++n) {
    for (const auto& p : all_permutations(n)) {
      if (!decide_sortable(p, 3)) continue;
      const auto sweep = sweep_laws_1_2(p, 3);
      CHECK(sweep.law1_holds);
      CHECK(sweep.law2_holds);
    }
  }
}

TEST_CASE("the combined sweep agrees with per-embedding checks") {
  for (const auto& p : all_permutations(5)) {
    const auto sweep = sweep_laws_1_2(p, 3);
    CHECK(sweep.law1_holds == check_law(1, p, 3, std::nullopt).holds);
    bool law2_all = true;
    for (const auto& e : find_embeddings(p, law_pattern(2))) {
      law2_all = law2_all && check_law(2, p, 3, e).holds;
    }
    CHECK(sweep.law2_holds == law2_all);
  }
}

TEST_CASE("verdicts do not depend on the enumeration order") {
  std::mt19937_64 rng(5);
  for (const auto& p : {Permutation::parse("243651"), Permutation::parse("32514"),
                        Permutation::parse("35142")}) {
    auto traces = enumerate_sorting_traces(p, 3, 1'000'000);
    std::shuffle(traces.begin(), traces.end(), rng);
    bool all_ok = true;
    for (const auto& ms : traces) {
      all_ok = all_ok && !law_violation_step(1, p, 3, std::nullopt, ms).has_value();
    }
    CHECK(all_ok == check_law(1, p, 3, std::nullopt).holds);
  }
  // Same exercise for a pattern law: law 3 on the worked 243651 instance.
  const auto p = Permutation::parse("243651");
  const auto e = identity_embedding(p);
  auto traces = enumerate_sorting_traces(p, 3, 1'000'000);
  std::shuffle(traces.begin(), traces.end(), rng);
  bool all_ok = true;
  for (const auto& ms : traces) {
    all_ok = all_ok && !law_violation_step(3, p, 3, e, ms).has_value();
  }
  CHECK(all_ok == check_law(3, p, 3, e).holds);
}
