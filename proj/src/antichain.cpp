#include "stacksort/antichain.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace stacksort {

namespace {

std::vector<std::uint32_t> gi_entries(std::uint32_t i) {
  std::vector<std::uint32_t> v = {2, 4, 3, 7, 6, 1};
  for (std::uint32_t j = 0; j <= i; ++j) {
    for (std::uint32_t x : {10u, 5u, 9u}) v.push_back(x + 6 * j);
    for (std::uint32_t y : {13u, 12u, 8u}) v.push_back(y + 6 * j);
  }
  for (std::uint32_t s : {14u, 15u, 11u}) v.push_back(s + 6 * i);
  return v;
}

}  // namespace

Permutation generate_gi(std::uint32_t i) { return Permutation(gi_entries(i)); }

Permutation generate_g_minus1() {
  return Permutation(std::vector<std::uint32_t>{2, 4, 3, 7, 6, 1, 8, 9, 5});
}

Permutation generate_git(std::uint32_t i, std::uint32_t depth) {
  if (depth < 3) throw std::invalid_argument("the family is defined for depths >= 3");
  std::vector<std::uint32_t> v = {2, 4, 3, 7, 6, 1};
  for (std::uint32_t j = 0; j <= i; ++j) {
    for (std::uint32_t x : {10u, 5u, 9u}) v.push_back(x + 6 * j);
    for (std::uint32_t y : {13u, 12u, 8u}) v.push_back(y + 6 * j);
  }
  for (std::uint32_t s = 14; s <= 12 + depth; ++s) v.push_back(s + 6 * i);
  v.push_back(11 + 6 * i);
  return Permutation(std::move(v));
}

Permutation generate_git(const AntichainSpec& spec) {
  return generate_git(spec.index, spec.depth);
}

bool verify_basis_membership(const Permutation& p, std::uint32_t depth, std::uint32_t jobs) {
  {
    detail::SearchScratch scratch;
    if (detail::decide_values(p.entries(), depth, scratch)) return false;
  }
  const std::uint32_t n = p.size();
  if (n == 1) return true;

  std::atomic<bool> all_sortable{true};
  const std::uint32_t workers = std::max(1u, std::min(jobs, n));
  auto work = [&](std::uint32_t w) {
    detail::SearchScratch scratch;
    for (std::uint32_t pos = 1 + w; pos <= n; pos += workers) {
      if (!all_sortable.load(std::memory_order_relaxed)) return;
      if (!detail::decide_values(p.delete_at(pos).entries(), depth, scratch)) {
        all_sortable.store(false, std::memory_order_relaxed);
        return;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (std::uint32_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  return all_sortable.load();
}

// ---------------------------------------------------------------------------
// Constructive sorting of one-point deletions of the family members.
//
// The sort is scripted, not searched: each deletion case plays a fixed move
// list written in terms of the original entry values, with expected stack
// snapshots at every hand-off between script segments. One global filter
// drops the directives that mention the removed value.
// ---------------------------------------------------------------------------

namespace {

struct Step {
  enum class Kind { kIn, kToL, kOut, kSnapshot } kind;
  std::uint32_t value = 0;                // kIn/kToL/kOut
  std::vector<std::uint32_t> expect_r;    // kSnapshot, bottom to top
  std::vector<std::uint32_t> expect_l;
};

class Script {
 public:
  explicit Script(std::uint32_t i) : i_(i) {}

  // Entry values: x_j = (10 5 9)+6j, y_j = (13 12 8)+6j, tail (14 15 11)+6i.

  void in(std::uint32_t v) { steps_.push_back({Step::Kind::kIn, v, {}, {}}); }
  void tol(std::uint32_t v) { steps_.push_back({Step::Kind::kToL, v, {}, {}}); }
  void out(std::uint32_t v) { steps_.push_back({Step::Kind::kOut, v, {}, {}}); }
  void snapshot(std::vector<std::uint32_t> r, std::vector<std::uint32_t> l) {
    steps_.push_back({Step::Kind::kSnapshot, 0, std::move(r), std::move(l)});
  }

  // Configuration snapshots the proof steps hand off through.
  void snap_x_pair_in_r(std::uint32_t j) { snapshot({10 + 6 * j, 9 + 6 * j}, {}); }
  void snap_y_pair_in_r(std::uint32_t j) { snapshot({7 + 6 * j, 6 + 6 * j}, {}); }
  void snap_y_pair_in_l(std::uint32_t j) { snapshot({}, {13 + 6 * j, 12 + 6 * j}); }
  void snap_x_pair_in_l(std::uint32_t j) { snapshot({}, {10 + 6 * j, 9 + 6 * j}); }

  // Consumes the prefix, ending with its two large entries parked in R.
  void prefix_intro() {
    for (auto s : {"I2", "I4", "T4", "I3", "T3", "T2", "I7", "I6", "I1", "T1"}) run_short(s);
    for (std::uint32_t v : {1u, 2u, 3u, 4u}) out(v);
    snap_y_pair_in_r(0);
  }

  // Consumes the prefix and the first x block, parking the x pair in L.
  void prefix_and_x0_intro() {
    for (auto s : {"I2", "I4", "T4", "I3", "T3", "T2", "I7", "I6", "I1", "T1"}) run_short(s);
    for (std::uint32_t v : {1u, 2u, 3u, 4u}) out(v);
    in(10), tol(10), in(5), tol(5), out(5), tol(6), out(6), tol(7), out(7);
    in(9), tol(9);
    snap_x_pair_in_l(0);
  }

  // Prefix with one entry removed; ends with the first x pair in R.
  void prefix_deletion(std::uint32_t removed) {
    if (removed == 1) {
      in(2), tol(2), out(2);
      in(4), in(3), tol(3), out(3), tol(4), out(4);
      in(7), tol(7), in(6), tol(6);
      in(10);
      in(5), tol(5), out(5), out(6), out(7);
      in(9);
    } else if (removed == 2 || removed == 3 || removed == 4) {
      std::vector<std::uint32_t> rest;
      for (std::uint32_t v : {2u, 4u, 3u}) {
        if (v != removed) rest.push_back(v);
      }
      const std::uint32_t a = rest[0], b = rest[1];
      in(a), in(b);
      in(7), tol(7), in(6), tol(6), in(1), tol(1), out(1);
      if (b < a) {
        tol(b), out(b), tol(a), out(a);
      } else {
        tol(b), tol(a), out(a), out(b);
      }
      in(10), in(5), tol(5), out(5), out(6), out(7);
      in(9);
    } else if (removed == 6 || removed == 7) {
      const std::uint32_t a = removed == 6 ? 7 : 6;
      in(2), in(4), tol(4), in(3), tol(3), tol(2);
      in(a), in(1), tol(1), out(1), out(2), out(3), out(4);
      tol(a);
      in(10), in(5), tol(5), out(5), out(a);
      in(9);
    } else {
      throw UnhandledCase("unexpected prefix entry " + std::to_string(removed));
    }
    snap_x_pair_in_r(0);
  }

  // With the x pair of block j in R: consume y_j x_{j+1}, ending with the
  // x pair of block j+1 in R.
  void x_pair_advance(std::uint32_t j) {
    const std::uint32_t d = 6 * j;
    in(13 + d), tol(13 + d), in(12 + d), tol(12 + d);
    in(8 + d), tol(8 + d), out(8 + d), tol(9 + d), out(9 + d), tol(10 + d), out(10 + d);
    in(16 + d), in(11 + d), tol(11 + d), out(11 + d), out(12 + d), out(13 + d);
    in(15 + d);
    snap_x_pair_in_r(j + 1);
  }

  // With the x pair of block i in R: consume y_i and the tail.
  void x_pair_finish() {
    const std::uint32_t d = 6 * i_;
    in(13 + d), tol(13 + d), in(12 + d), tol(12 + d);
    in(8 + d), tol(8 + d), out(8 + d), tol(9 + d), out(9 + d), tol(10 + d), out(10 + d);
    in(14 + d), in(15 + d), in(11 + d), tol(11 + d);
    out(11 + d), out(12 + d), out(13 + d);
    tol(15 + d), tol(14 + d), out(14 + d), out(15 + d);
  }

  // With the y pair of block j-1 in R: consume x_j y_j, ending with the
  // y pair of block j in R.
  void y_pair_advance(std::uint32_t j) {
    const std::uint32_t d = 6 * j;
    in(10 + d), tol(10 + d);
    in(5 + d), tol(5 + d), out(5 + d), tol(6 + d), out(6 + d), tol(7 + d), out(7 + d);
    in(9 + d), tol(9 + d);
    in(13 + d), in(12 + d);
    in(8 + d), tol(8 + d), out(8 + d), out(9 + d), out(10 + d);
    snap_y_pair_in_r(j + 1);
  }

  // Deletion inside x block s, entered with the y pair of block s-1 in R.
  // Removing the small or the large entry reroutes into "x pair in R";
  // removing the middle entry reroutes into "y pair in L".
  void x_deletion(std::uint32_t s, std::uint32_t removed) {
    const std::uint32_t d = 6 * s;
    if (removed == 5 + d) {
      tol(6 + d), out(6 + d), tol(7 + d), out(7 + d);
      in(10 + d), in(9 + d);
      snap_x_pair_in_r(s);
    } else if (removed == 10 + d) {
      in(5 + d), tol(5 + d), out(5 + d), tol(6 + d), out(6 + d), tol(7 + d), out(7 + d);
      in(9 + d);
      snap_x_pair_in_r(s);
    } else if (removed == 9 + d) {
      tol(6 + d);
      in(10 + d);
      in(5 + d), tol(5 + d), out(5 + d), out(6 + d);
      in(13 + d), tol(13 + d), in(12 + d), tol(12 + d);
      tol(10 + d), tol(7 + d), out(7 + d);
      in(8 + d), tol(8 + d), out(8 + d), out(10 + d);
      snap_y_pair_in_l(s);
    } else {
      throw UnhandledCase("entry " + std::to_string(removed) + " is not in the x block");
    }
  }

  // With the x pair of block j in L: consume y_j x_{j+1}, ending with the
  // x pair of block j+1 in L.
  void x_pair_in_l_advance(std::uint32_t j) {
    const std::uint32_t d = 6 * j;
    in(13 + d), in(12 + d);
    in(8 + d), tol(8 + d), out(8 + d), out(9 + d), out(10 + d);
    in(16 + d), tol(16 + d);
    in(11 + d), tol(11 + d), out(11 + d), tol(12 + d), out(12 + d), tol(13 + d), out(13 + d);
    in(15 + d), tol(15 + d);
    snap_x_pair_in_l(j + 1);
  }

  // Deletion inside y block s, entered with the x pair of block s in L.
  void y_deletion(std::uint32_t s, std::uint32_t removed) {
    const std::uint32_t d = 6 * s;
    if (removed == 8 + d) {
      out(9 + d), out(10 + d);
      in(13 + d), tol(13 + d), in(12 + d), tol(12 + d);
    } else if (removed == 13 + d || removed == 12 + d) {
      const std::uint32_t b = (removed == 13 + d) ? 12 + d : 13 + d;
      in(b);
      in(8 + d), tol(8 + d), out(8 + d), out(9 + d), out(10 + d);
      tol(b);
    } else {
      throw UnhandledCase("entry " + std::to_string(removed) + " is not in the y block");
    }
    snap_y_pair_in_l(s);
  }

  // Deletion inside the tail, entered with the x pair of block i in L.
  void tail_deletion(std::uint32_t removed) {
    const std::uint32_t d = 6 * i_;
    in(13 + d), in(12 + d);
    in(8 + d), tol(8 + d), out(8 + d), out(9 + d), out(10 + d);
    if (removed == 11 + d) {
      tol(12 + d), out(12 + d), tol(13 + d), out(13 + d);
      in(14 + d), tol(14 + d), out(14 + d), in(15 + d), tol(15 + d), out(15 + d);
    } else if (removed == 14 + d || removed == 15 + d) {
      const std::uint32_t b = (removed == 14 + d) ? 15 + d : 14 + d;
      tol(12 + d);
      in(b), in(11 + d), tol(11 + d), out(11 + d), out(12 + d);
      tol(b), tol(13 + d), out(13 + d), out(b);
    } else {
      throw UnhandledCase("entry " + std::to_string(removed) + " is not in the tail");
    }
  }

  // With the y pair of block j in L: either step back into "x pair in R" one
  // block up, or finish off the tail when j = i.
  void y_pair_in_l_continue(std::uint32_t j) {
    const std::uint32_t d = 6 * j;
    if (j < i_) {
      in(16 + d), in(11 + d), tol(11 + d), out(11 + d), out(12 + d), out(13 + d);
      in(15 + d);
      snap_x_pair_in_r(j + 1);
      x_pair_run(j + 1);
    } else {
      in(14 + d), in(15 + d), in(11 + d), tol(11 + d);
      out(11 + d), out(12 + d), out(13 + d);
      tol(15 + d), tol(14 + d), out(14 + d), out(15 + d);
    }
  }

  // Advance "x pair in R" from block j to the end.
  void x_pair_run(std::uint32_t j) {
    for (std::uint32_t k = j; k < i_; ++k) x_pair_advance(k);
    x_pair_finish();
  }

  const std::vector<Step>& steps() const { return steps_; }

 private:
  // Compact helper for the shared prefix openers ("I2" etc., single digits).
  void run_short(const char* s) {
    const std::uint32_t v = static_cast<std::uint32_t>(s[1] - '0');
    switch (s[0]) {
      case 'I': in(v); break;
      case 'T': tol(v); break;
      case 'O': out(v); break;
    }
  }

  std::uint32_t i_;
  std::vector<Step> steps_;
};

Script build_script(std::uint32_t i, std::uint32_t deleted_pos, std::uint32_t removed_value) {
  Script sc(i);
  const std::uint32_t n = 6 * i + 15;
  if (deleted_pos <= 6) {
    sc.prefix_deletion(removed_value);
    sc.x_pair_run(0);
  } else if (deleted_pos <= 6 * i + 12) {
    const std::uint32_t offset = deleted_pos - 7;
    const std::uint32_t block = offset / 6;
    const bool in_x = offset % 6 < 3;
    if (in_x) {
      sc.prefix_intro();
      for (std::uint32_t j = 0; j < block; ++j) sc.y_pair_advance(j);
      sc.x_deletion(block, removed_value);
      if (removed_value == 9 + 6 * block) {
        sc.y_pair_in_l_continue(block);
      } else {
        sc.x_pair_run(block);
      }
    } else {
      sc.prefix_and_x0_intro();
      for (std::uint32_t j = 0; j < block; ++j) sc.x_pair_in_l_advance(j);
      sc.y_deletion(block, removed_value);
      sc.y_pair_in_l_continue(block);
    }
  } else if (deleted_pos <= n) {
    sc.prefix_and_x0_intro();
    for (std::uint32_t j = 0; j < i; ++j) sc.x_pair_in_l_advance(j);
    sc.tail_deletion(removed_value);
  } else {
    throw IndexOutOfRange("deletion position out of range");
  }
  return sc;
}

}  // namespace

MoveSequence constructive_sort_deletion(std::uint32_t i, std::uint32_t deleted_pos) {
  const std::vector<std::uint32_t> full = gi_entries(i);
  if (deleted_pos < 1 || deleted_pos > full.size()) {
    throw IndexOutOfRange("deletion position out of range");
  }
  const std::uint32_t removed = full[deleted_pos - 1];

  std::vector<std::uint32_t> remaining;
  remaining.reserve(full.size() - 1);
  for (std::uint32_t k = 0; k < full.size(); ++k) {
    if (k != deleted_pos - 1) remaining.push_back(full[k]);
  }

  const Script script = build_script(i, deleted_pos, removed);

  MachineConfig cfg(ValueSequence(remaining), 3);
  MoveSequence moves;
  auto mismatch = [&](const std::string& what) -> void {
    throw UnhandledCase("constructive sort, block index " + std::to_string(i) + ", position " +
                        std::to_string(deleted_pos) + ": " + what);
  };

  for (const Step& step : script.steps()) {
    if (step.kind == Step::Kind::kSnapshot) {
      auto filtered = [&](const std::vector<std::uint32_t>& expect) {
        std::vector<std::uint32_t> out;
        for (auto v : expect) {
          if (v != removed) out.push_back(v);
        }
        return out;
      };
      const auto expect_r = filtered(step.expect_r);
      const auto expect_l = filtered(step.expect_l);
      const auto r = cfg.stack_r();
      const auto l = cfg.stack_l();
      if (!std::equal(r.begin(), r.end(), expect_r.begin(), expect_r.end()) ||
          !std::equal(l.begin(), l.end(), expect_l.begin(), expect_l.end())) {
        mismatch("intermediate configuration does not match the proof figure");
      }
      continue;
    }
    if (step.value == removed) continue;  // the case scripts ignore the missing entry

    Move m{};
    switch (step.kind) {
      case Step::Kind::kIn:
        if (cfg.input_cursor() > cfg.input().size() ||
            cfg.input()[cfg.input_cursor() - 1] != step.value) {
          mismatch("expected to read " + std::to_string(step.value) + " from the input");
        }
        m = Move::kInputToR;
        break;
      case Step::Kind::kToL:
        if (cfg.stack_r().empty() || cfg.stack_r().back() != step.value) {
          mismatch("expected " + std::to_string(step.value) + " on top of R");
        }
        m = Move::kRToL;
        break;
      case Step::Kind::kOut:
        if (cfg.stack_l().empty() || cfg.stack_l().back() != step.value) {
          mismatch("expected " + std::to_string(step.value) + " on top of L");
        }
        m = Move::kLToOutput;
        break;
      case Step::Kind::kSnapshot:
        break;
    }
    if (!cfg.is_legal(m)) mismatch("scripted move is illegal");
    cfg.apply(m);
    moves.push_back(m);
  }
  if (!cfg.done()) mismatch("script ended before sorting completed");

  const Permutation renormalized = Permutation(gi_entries(i)).delete_at(deleted_pos);
  if (!validate_trace(renormalized, 3, moves).ok) {
    mismatch("assembled trace fails replay on the renormalized permutation");
  }
  return moves;
}

Permutation lift_basis_element(const Permutation& sigma, std::uint32_t depth,
                               std::uint32_t jobs) {
  if (depth < 1) throw std::invalid_argument("stack depth must be at least 1");
  if (!verify_basis_membership(sigma, depth, jobs)) {
    throw std::invalid_argument("input is not a basis element at the given depth");
  }

  const std::uint32_t n = sigma.size();
  Permutation lifted = [&] {
    detail::SearchScratch scratch;
    if (!detail::decide_values(sigma.entries(), depth + 1, scratch)) return sigma;
    std::vector<std::uint32_t> v = {n + 2, n + 1, n + 3};
    v.insert(v.end(), sigma.entries().begin(), sigma.entries().end());
    return Permutation(std::move(v));
  }();

  if (!verify_basis_membership(lifted, depth + 1, jobs)) {
    throw LiftFailed("lifted permutation is not a basis element one depth up");
  }
  return lifted;
}

}  // namespace stacksort
