#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "stacksort/machine.hpp"

using namespace stacksort;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

std::string cli_path() {
  const char* env = std::getenv("STACKSORT_CLI");
  REQUIRE_MESSAGE(env != nullptr, "STACKSORT_CLI must point at the built binary");
  return env;
}

RunResult run_cli(const std::string& args) {
  const std::string cmd = "'" + cli_path() + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return RunResult{WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("decide answers the question with exit 0 either way") {
  auto yes = run_cli("decide --perm '2 4 3 6 5 1' --depth 3");
  CHECK(yes.exit_code == 0);
  CHECK(yes.out == "sortable\n");

  auto no = run_cli("decide --perm '2 4 3 6 5 1' --depth 2");
  CHECK(no.exit_code == 0);
  CHECK(no.out == "unsortable\n");
}

TEST_CASE("decide --trace emits a replayable trace") {
  auto r = run_cli("decide --perm 243651 --depth 3 --trace");
  REQUIRE(r.exit_code == 0);
  const auto nl = r.out.find('\n');
  REQUIRE(r.out.substr(0, nl) == "sortable");
  const auto trace = parse_trace_text(r.out.substr(nl + 1));
  CHECK(validate_trace(Permutation::parse("243651"), 3, trace).ok);
}

TEST_CASE("validate distinguishes valid, invalid and missing traces") {
  CHECK(run_cli("validate --perm 243651 --depth 3 "
                "--trace 'I I T I T T I I I T O O O O T O T O'")
            .exit_code == 0);
  auto bad = run_cli("validate --perm 243651 --depth 2 "
                     "--trace 'I I T I T T I I I T O O O O T O T O'");
  CHECK(bad.exit_code == 1);
  CHECK(bad.out.find("invalid at step 9") != std::string::npos);
  CHECK(run_cli("validate --perm 243651 --depth 3").exit_code == 2);
}

TEST_CASE("count prints the header and one row per length") {
  auto r = run_cli("count --length 6 --depth 3");
  CHECK(r.exit_code == 0);
  CHECK(r.out ==
        "# length sortable basis\n"
        "1 1 0\n"
        "2 2 0\n"
        "3 6 0\n"
        "4 24 0\n"
        "5 120 0\n"
        "6 711 9\n");
}

TEST_CASE("count output is byte-identical across job counts") {
  const auto reference = run_cli("count --length 7 --depth 3 --jobs 1");
  CHECK(reference.exit_code == 0);
  for (const char* jobs : {"2", "4"}) {
    auto r = run_cli(std::string("count --length 7 --depth 3 --jobs ") + jobs);
    CHECK(r.exit_code == 0);
    CHECK(r.out == reference.out);
  }
}

TEST_CASE("basis emits jsonl and csv") {
  auto jl = run_cli("basis --max-length 6 --depth 3 --format jsonl");
  REQUIRE(jl.exit_code == 0);
  std::size_t lines = 0;
  std::size_t start = 0;
  while (start < jl.out.size()) {
    const auto end = jl.out.find('\n', start);
    const auto row = nlohmann::json::parse(jl.out.substr(start, end - start));
    CHECK(row["n"] == 6);
    CHECK(row["depth"] == 3);
    CHECK(row["perm"].size() == 6);
    ++lines;
    start = end + 1;
  }
  CHECK(lines == 9);

  auto csv = run_cli("basis --max-length 6 --depth 3 --format csv");
  REQUIRE(csv.exit_code == 0);
  CHECK(csv.out.rfind("# n,depth,perm\n", 0) == 0);
  CHECK(csv.out.find("6,3,\"") != std::string::npos);
}

TEST_CASE("antichain generates, verifies, and gates the debug member") {
  auto g1 = run_cli("antichain --family g --index 1");
  CHECK(g1.exit_code == 0);
  CHECK(g1.out == "2 4 3 7 6 1 10 5 9 13 12 8 16 11 15 19 18 14 20 21 17\n");

  auto verified = run_cli("antichain --family g --index 0 --verify");
  CHECK(verified.exit_code == 0);
  CHECK(verified.out.find("basis-member: true") != std::string::npos);

  // --depth picks the depth-4 member, which is a depth-4 basis element.
  auto deeper = run_cli("antichain --family g --index 0 --depth 4 --verify");
  CHECK(deeper.exit_code == 0);
  CHECK(deeper.out.find("basis-member: true") != std::string::npos);

  // The debug member is sortable one depth up, so verification says no.
  auto not_basis = run_cli("antichain --family g --index -1 --debug --depth 4 --verify");
  CHECK(not_basis.exit_code == 1);
  CHECK(not_basis.out.find("basis-member: false") != std::string::npos);

  CHECK(run_cli("antichain --family g --index -1").exit_code == 2);
  auto debug = run_cli("antichain --family g --index -1 --debug");
  CHECK(debug.exit_code == 0);
  CHECK(debug.out == "2 4 3 7 6 1 8 9 5\n");

  auto json_emit = run_cli("antichain --family g --index 0 --emit jsonl");
  CHECK(json_emit.exit_code == 0);
  const auto row = nlohmann::json::parse(json_emit.out);
  CHECK(row["perm"].size() == 15);
}

TEST_CASE("antichain lift prints the lifted element") {
  auto r = run_cli("antichain lift --perm 231 --depth 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "5 4 6 2 3 1\n");
  CHECK(run_cli("antichain lift --perm 1234 --depth 1").exit_code == 2);
}

TEST_CASE("laws reports holds with counts and honors the exit contract") {
  auto all = run_cli("laws --lemma 3 --perm 243651 --depth 3");
  CHECK(all.exit_code == 0);
  CHECK(all.out == "holds (1 embeddings, 1 traces)\n");

  auto pinned = run_cli("laws --lemma 3 --perm 243651 --depth 3 "
                        "--pattern-indices 1,2,3,4,5,6");
  CHECK(pinned.exit_code == 0);

  auto law1 = run_cli("laws --lemma 1 --perm 243651 --depth 3");
  CHECK(law1.exit_code == 0);
  CHECK(law1.out == "holds (0 embeddings, 1 traces)\n");

  // Wrong-shaped embedding indices are a usage error.
  CHECK(run_cli("laws --lemma 3 --perm 243651 --depth 3 --pattern-indices 1,2,3")
            .exit_code == 2);
  // Exhausting the trace budget is an error, not a silent pass.
  CHECK(run_cli("laws --lemma 1 --perm 12345 --depth 3 --budget 2").exit_code == 2);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("decide --depth 3").exit_code == 2);
  CHECK(run_cli("decide --perm '2 2 3' --depth 3").exit_code == 2);
  CHECK(run_cli("nonsense").exit_code == 2);
  CHECK(run_cli("count --length 12 --depth 3").exit_code == 2);  // needs --allow-long
}

TEST_CASE("selftest passes at a small sweep bound") {
  auto r = run_cli("selftest --max-n 5 --seed 7");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("selftest: all suites passed") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
