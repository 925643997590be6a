#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "stacksort/basis.hpp"
#include "test_util.hpp"

using namespace stacksort;
namespace fs = std::filesystem;
using testutil::all_permutations;

namespace {

fs::path fresh_temp_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  const fs::path dir =
      fs::temp_directory_path() / ("stacksort_" + tag + "_" + std::to_string(rng()));
  fs::create_directories(dir);
  return dir;
}

std::string file_bytes(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  return std::string((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
}

SweepCheckpoint advance_to(std::uint32_t n, std::uint32_t depth) {
  SweepCheckpoint ck = SweepCheckpoint::seed(depth);
  for (std::uint32_t k = 2; k <= n; ++k) {
    ck = count_sortable(k, depth, ck).second;
  }
  return ck;
}

}  // namespace

TEST_CASE("checkpoints save and load byte-exactly") {
  const auto dir = fresh_temp_dir("ck");
  const auto ck = advance_to(5, 3);
  const auto file = dir / SweepCheckpoint::file_name(5, 3);
  ck.save(file);

  const auto bytes = file_bytes(file);
  REQUIRE(bytes.size() == 15 + 8 * ck.count());
  CHECK(bytes.compare(0, 4, "SPRM") == 0);
  CHECK(bytes[4] == 0x01);
  CHECK(bytes[5] == 5);
  CHECK(bytes[6] == 3);

  const auto back = SweepCheckpoint::load(file);
  CHECK(back.length() == 5);
  CHECK(back.depth() == 3);
  CHECK(back.records() == ck.records());
  fs::remove_all(dir);
}

TEST_CASE("corrupt checkpoints are rejected") {
  const auto dir = fresh_temp_dir("bad");
  const auto ck = advance_to(3, 2);
  const auto file = dir / "ck.sprm";
  ck.save(file);

  auto clobber = [&](std::size_t at, char value) {
    auto bytes = file_bytes(file);
    bytes[at] = value;
    std::ofstream(file, std::ios::binary | std::ios::trunc).write(bytes.data(), bytes.size());
  };

  clobber(0, 'X');  // magic
  CHECK_THROWS_AS(SweepCheckpoint::load(file), CorruptCheckpoint);
  ck.save(file);
  clobber(4, 0x02);  // version
  CHECK_THROWS_AS(SweepCheckpoint::load(file), CorruptCheckpoint);
  ck.save(file);
  clobber(7, 0x7F);  // count no longer matches the payload
  CHECK_THROWS_AS(SweepCheckpoint::load(file), CorruptCheckpoint);

  // Swap two records to break the ascending order.
  ck.save(file);
  auto bytes = file_bytes(file);
  REQUIRE(ck.count() >= 2);
  for (int b = 0; b < 8; ++b) std::swap(bytes[15 + b], bytes[23 + b]);
  std::ofstream(file, std::ios::binary | std::ios::trunc).write(bytes.data(), bytes.size());
  CHECK_THROWS_AS(SweepCheckpoint::load(file), CorruptCheckpoint);

  std::ofstream(file, std::ios::binary | std::ios::trunc).write("SPR", 3);
  CHECK_THROWS_AS(SweepCheckpoint::load(file), CorruptCheckpoint);
  fs::remove_all(dir);
}

TEST_CASE("stepping validates its checkpoint and budget") {
  const auto ck4 = advance_to(4, 3);
  CHECK_THROWS_AS(count_sortable(6, 3, ck4), CheckpointMismatch);
  CHECK_THROWS_AS(count_sortable(5, 2, ck4), CheckpointMismatch);
  SweepOptions opts;
  CHECK_THROWS_AS(run_length_sweep(11, 3, opts), ResourceBudgetExceeded);
  CHECK_THROWS_AS(run_length_sweep(17, 3, opts), ResourceBudgetExceeded);
}

TEST_CASE("the depth-3 sweep matches the known counts through length 7") {
  const auto rows = run_length_sweep(7, 3);
  REQUIRE(rows.size() == 7);
  const std::vector<std::uint64_t> sortable = {1, 2, 6, 24, 120, 711, 4700};
  const std::vector<std::uint64_t> basis = {0, 0, 0, 0, 0, 9, 83};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].n == i + 1);
    CHECK(rows[i].sortable == sortable[i]);
    CHECK(rows[i].basis == basis[i]);
  }
}

TEST_CASE("every length-4 permutation is depth-3 sortable") {
  const auto rows = run_length_sweep(4, 3);
  CHECK(rows[3].sortable == 24);
  CHECK(rows[3].basis == 0);
}

TEST_CASE("at depth 1 the only basis element is 231") {
  const auto result = run_basis_sweep(6, 1);
  std::uint64_t total = 0;
  for (const auto& row : result.rows) total += row.basis;
  CHECK(total == 1);
  REQUIRE(result.basis.size() == 1);
  CHECK(result.basis[0].perm == Permutation::parse("231"));
  CHECK(result.basis[0].length == 3);
  CHECK(result.basis[0].verified);
}

TEST_CASE("a stack as deep as the input buffers everything") {
  for (std::uint32_t n = 1; n <= 5; ++n) {
    std::uint64_t factorial = 1;
    for (std::uint32_t k = 2; k <= n; ++k) factorial *= k;
    const auto rows = run_length_sweep(n, n);
    CHECK(rows.back().sortable == factorial);
  }
}

TEST_CASE("length-6 depth-3 basis elements are exactly the nine verified records") {
  const auto ck5 = advance_to(5, 3);
  const auto records = enumerate_basis(6, 3, ck5);
  REQUIRE(records.size() == 9);
  detail::SearchScratch scratch;
  for (const auto& rec : records) {
    CHECK(rec.length == 6);
    CHECK(rec.depth == 3);
    CHECK(rec.verified);
    CHECK_FALSE(decide_sortable(rec.perm, 3));
    for (std::uint32_t i = 1; i <= rec.perm.size(); ++i) {
      CHECK(decide_sortable(rec.perm.delete_at(i), 3));
    }
  }
}

TEST_CASE("unsortable short permutations are exactly those containing a basis element") {
  const auto result = run_basis_sweep(7, 3);
  std::vector<Permutation> basis;
  for (const auto& rec : result.basis) basis.push_back(rec.perm);

  for (std::uint32_t n = 1; n <= 7; ++n) {
    for (const auto& p : all_permutations(n)) {
      bool dominated = false;
      for (const auto& b : basis) {
        if (b.size() <= n && contains(p, b)) {
          dominated = true;
          break;
        }
      }
      CHECK(dominated == !decide_sortable(p, 3));
    }
  }
  CHECK(is_antichain(basis).ok);
}

TEST_CASE("sweeps resume from checkpoints and stay deterministic across job counts") {
  const auto fresh = run_basis_sweep(6, 3);

  std::vector<fs::path> dirs;
  std::vector<std::string> checkpoint_bytes;
  for (std::uint32_t jobs : {1u, 3u}) {
    const auto dir = fresh_temp_dir("jobs" + std::to_string(jobs));
    dirs.push_back(dir);
    SweepOptions opts;
    opts.jobs = jobs;
    opts.checkpoint_dir = dir;

    // Stop at 5 first, then extend to 6 off the stored checkpoints.
    (void)run_length_sweep(5, 3, opts);
    const auto resumed = run_basis_sweep(6, 3, opts);
    REQUIRE(resumed.rows.size() == fresh.rows.size());
    for (std::size_t i = 0; i < fresh.rows.size(); ++i) {
      CHECK(resumed.rows[i].sortable == fresh.rows[i].sortable);
      CHECK(resumed.rows[i].basis == fresh.rows[i].basis);
    }
    REQUIRE(resumed.basis.size() == fresh.basis.size());
    for (std::size_t i = 0; i < fresh.basis.size(); ++i) {
      CHECK(resumed.basis[i].perm == fresh.basis[i].perm);
      CHECK(resumed.basis[i].verified == fresh.basis[i].verified);
    }

    std::string all;
    for (std::uint32_t n = 1; n <= 6; ++n) {
      all += file_bytes(dir / SweepCheckpoint::file_name(n, 3));
    }
    checkpoint_bytes.push_back(std::move(all));
  }
  CHECK(checkpoint_bytes[0] == checkpoint_bytes[1]);
  for (const auto& d : dirs) fs::remove_all(d);
}
