#include "stacksort/machine.hpp"

#include <algorithm>
#include <cstring>

namespace stacksort {

char move_char(Move m) {
  switch (m) {
    case Move::kInputToR: return 'I';
    case Move::kRToL: return 'T';
    case Move::kLToOutput: return 'O';
  }
  throw UnhandledCase("unknown move kind");
}

std::string trace_to_text(const MoveSequence& ms) {
  std::string out;
  out.reserve(ms.size() * 2);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (i) out.push_back(' ');
    out.push_back(move_char(ms[i]));
  }
  return out;
}

MoveSequence parse_trace_text(const std::string& text) {
  MoveSequence ms;
  for (char c : text) {
    switch (c) {
      case 'I': ms.push_back(Move::kInputToR); break;
      case 'T': ms.push_back(Move::kRToL); break;
      case 'O': ms.push_back(Move::kLToOutput); break;
      default:
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ',') break;
        throw ParseError(std::string("unknown trace token '") + c + "'");
    }
  }
  return ms;
}

MachineConfig::MachineConfig(const Permutation& input, std::uint32_t depth)
    : input_(input.entries()), depth_(depth) {
  init();
}

MachineConfig::MachineConfig(const ValueSequence& input, std::uint32_t depth)
    : input_(input.entries()), depth_(depth) {
  init();
}

void MachineConfig::init() {
  if (depth_ < 1) throw std::invalid_argument("stack depth must be at least 1");
  if (input_.empty()) throw std::invalid_argument("machine input must be nonempty");
  ascending_ = input_;
  std::sort(ascending_.begin(), ascending_.end());
  r_.reserve(depth_);
  l_.reserve(input_.size());
}

std::uint32_t MachineConfig::next_output() const {
  return done() ? 0 : ascending_[out_count_];
}

bool MachineConfig::is_legal(Move m) const {
  switch (m) {
    case Move::kInputToR:
      return cursor_ < input_.size() && r_.size() < depth_;
    case Move::kRToL:
      return !r_.empty();
    case Move::kLToOutput:
      // Popping any value other than the next expected one can never lead to
      // sorted output, so this is part of the move relation itself.
      return !l_.empty() && l_.back() == next_output();
  }
  return false;
}

std::vector<Move> MachineConfig::legal_moves() const {
  std::vector<Move> ms;
  for (Move m : {Move::kInputToR, Move::kRToL, Move::kLToOutput}) {
    if (is_legal(m)) ms.push_back(m);
  }
  return ms;
}

void MachineConfig::apply(Move m) {
  if (!is_legal(m)) {
    std::string why;
    switch (m) {
      case Move::kInputToR:
        why = cursor_ >= input_.size() ? "no input remaining" : "stack R is full";
        break;
      case Move::kRToL:
        why = "stack R is empty";
        break;
      case Move::kLToOutput:
        why = l_.empty() ? "stack L is empty" : "top of L is not the next output value";
        break;
    }
    throw IllegalMove(std::string("illegal ") + move_char(m) + ": " + why);
  }
  switch (m) {
    case Move::kInputToR:
      r_.push_back(input_[cursor_++]);
      break;
    case Move::kRToL:
      l_.push_back(r_.back());
      r_.pop_back();
      break;
    case Move::kLToOutput:
      l_.pop_back();
      ++out_count_;
      break;
  }
}

MachineConfig MachineConfig::applied(Move m) const {
  MachineConfig next = *this;
  next.apply(m);
  return next;
}

bool MachineConfig::check_invariant() const {
  if (r_.size() > depth_) return false;
  std::vector<std::uint32_t> held;
  held.insert(held.end(), ascending_.begin(), ascending_.begin() + out_count_);
  held.insert(held.end(), r_.begin(), r_.end());
  held.insert(held.end(), l_.begin(), l_.end());
  std::sort(held.begin(), held.end());
  std::vector<std::uint32_t> consumed(input_.begin(), input_.begin() + cursor_);
  std::sort(consumed.begin(), consumed.end());
  return held == consumed;
}

namespace {

template <typename Seq>
TraceValidation validate_trace_impl(const Seq& input, std::uint32_t depth,
                                    const MoveSequence& ms) {
  MachineConfig cfg(input, depth);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    try {
      cfg.apply(ms[i]);
    } catch (const IllegalMove& e) {
      return TraceValidation{false, i + 1, e.what()};
    }
  }
  if (!cfg.done()) {
    return TraceValidation{false, ms.size(), "trace ended before the input was fully sorted"};
  }
  return TraceValidation{true, 0, ""};
}

}  // namespace

TraceValidation validate_trace(const Permutation& p, std::uint32_t depth, const MoveSequence& ms) {
  return validate_trace_impl(p, depth, ms);
}

TraceValidation validate_trace(const ValueSequence& v, std::uint32_t depth,
                               const MoveSequence& ms) {
  return validate_trace_impl(v, depth, ms);
}

namespace detail {
namespace {

// Memo key for the pruned decider: (cursor, outputs, stack R as an ordered
// tuple). Under the pruning, stack L's contents and order are a function of
// this key, so it identifies the configuration completely. One 64-bit word
// suffices whenever n <= 255 and depth <= 6; larger instances fall back to a
// byte-string key.
struct FastMemo {
  std::unordered_set<std::uint64_t>* failed;
  static bool fits(std::size_t n, std::uint32_t depth) { return n <= 255 && depth <= 6; }
  static std::uint64_t make(std::size_t cursor, std::size_t out,
                            const std::vector<std::uint32_t>& r) {
    std::uint64_t k = static_cast<std::uint64_t>(cursor) |
                      (static_cast<std::uint64_t>(out) << 8);
    for (std::size_t i = 0; i < r.size(); ++i) {
      k |= static_cast<std::uint64_t>(r[i]) << (16 + 8 * i);
    }
    return k;
  }
  bool seen(std::size_t cursor, std::size_t out, const std::vector<std::uint32_t>& r) const {
    return failed->contains(make(cursor, out, r));
  }
  void mark(std::size_t cursor, std::size_t out, const std::vector<std::uint32_t>& r) {
    failed->insert(make(cursor, out, r));
  }
};

struct WideMemo {
  struct Hash {
    std::size_t operator()(const std::string& s) const { return std::hash<std::string>{}(s); }
  };
  std::unordered_set<std::string> failed;
  static std::string make(std::size_t cursor, std::size_t out,
                          const std::vector<std::uint32_t>& r) {
    std::string k;
    k.reserve(8 + 4 * r.size());
    auto put32 = [&k](std::uint32_t v) {
      for (int b = 0; b < 4; ++b) k.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
    };
    put32(static_cast<std::uint32_t>(cursor));
    put32(static_cast<std::uint32_t>(out));
    for (auto v : r) put32(v);
    return k;
  }
  bool seen(std::size_t cursor, std::size_t out, const std::vector<std::uint32_t>& r) const {
    return failed.contains(make(cursor, out, r));
  }
  void mark(std::size_t cursor, std::size_t out, const std::vector<std::uint32_t>& r) {
    failed.insert(make(cursor, out, r));
  }
};

template <typename Memo>
struct DecideContext {
  std::span<const std::uint32_t> values;
  std::uint32_t depth = 1;
  bool check_derivation = false;
  std::size_t cursor = 0;
  std::size_t out = 0;
  SearchScratch* scratch = nullptr;
  Memo memo;

  // Recomputes stack L from (cursor, out, R): the consumed values that are
  // neither output nor in R, ordered descending bottom-to-top.
  void assert_l_derivation() const {
    std::vector<std::uint32_t> expect;
    for (std::size_t i = 0; i < cursor; ++i) {
      const std::uint32_t v = values[i];
      if (v <= out) continue;  // already output (values are ranks 1..n)
      if (std::find(scratch->r.begin(), scratch->r.end(), v) != scratch->r.end()) continue;
      expect.push_back(v);
    }
    std::sort(expect.begin(), expect.end(), std::greater<>());
    if (expect != scratch->l) {
      throw UnhandledCase("stack L disagrees with its derivation from the memo key");
    }
  }

  bool dfs() {
    const std::size_t n = values.size();
    if (out == n) return true;
    auto& r = scratch->r;
    auto& l = scratch->l;
    auto& moves = scratch->moves;
    if (memo.seen(cursor, out, r)) return false;
    if (check_derivation) assert_l_derivation();

    // Greedy output: when the needed value is on top of L, popping it never
    // loses options, so it is taken exclusively.
    if (!l.empty() && l.back() == out + 1) {
      l.pop_back();
      ++out;
      moves.push_back(Move::kLToOutput);
      if (dfs()) return true;
      moves.pop_back();
      --out;
      l.push_back(static_cast<std::uint32_t>(out + 1));
      memo.mark(cursor, out, r);
      return false;
    }

    // R -> L, refused when it would put a larger value on top of a smaller
    // one in L (the smaller could then never leave first).
    if (!r.empty() && (l.empty() || r.back() < l.back())) {
      const std::uint32_t v = r.back();
      r.pop_back();
      l.push_back(v);
      moves.push_back(Move::kRToL);
      if (dfs()) return true;
      moves.pop_back();
      l.pop_back();
      r.push_back(v);
    }

    if (cursor < n && r.size() < depth) {
      r.push_back(values[cursor]);
      ++cursor;
      moves.push_back(Move::kInputToR);
      if (dfs()) return true;
      moves.pop_back();
      --cursor;
      r.pop_back();
    }

    memo.mark(cursor, out, r);
    return false;
  }
};

}  // namespace

bool decide_values(std::span<const std::uint32_t> values, std::uint32_t depth,
                   SearchScratch& scratch, MoveSequence* witness, bool check_memo_derivation) {
  if (depth < 1) throw std::invalid_argument("stack depth must be at least 1");
  if (values.empty()) throw std::invalid_argument("machine input must be nonempty");
  scratch.failed.clear();
  scratch.r.clear();
  scratch.l.clear();
  scratch.moves.clear();
  scratch.r.reserve(depth);
  scratch.l.reserve(values.size());

  bool derivation_check = check_memo_derivation;
#ifndef NDEBUG
  derivation_check = true;
#endif

  bool ok = false;
  if (FastMemo::fits(values.size(), depth)) {
    DecideContext<FastMemo> ctx;
    ctx.values = values;
    ctx.depth = depth;
    ctx.scratch = &scratch;
    ctx.check_derivation = derivation_check;
    ctx.memo.failed = &scratch.failed;
    ok = ctx.dfs();
  } else {
    DecideContext<WideMemo> ctx;
    ctx.values = values;
    ctx.depth = depth;
    ctx.scratch = &scratch;
    ctx.check_derivation = derivation_check;
    ok = ctx.dfs();
  }
  if (ok && witness) *witness = scratch.moves;
  return ok;
}

}  // namespace detail

bool decide_sortable(const Permutation& p, std::uint32_t depth, const DeciderOptions& opts) {
  detail::SearchScratch scratch;
  return detail::decide_values(p.entries(), depth, scratch, nullptr,
                               opts.check_memo_derivation);
}

std::optional<MoveSequence> sort_witness(const Permutation& p, std::uint32_t depth) {
  detail::SearchScratch scratch;
  MoveSequence ms;
  if (!detail::decide_values(p.entries(), depth, scratch, &ms)) return std::nullopt;
  return ms;
}

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<std::uint8_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (auto b : v) {
      h ^= b;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Unpruned search over full configurations; memoizes failed configurations.
struct ReferenceSearch {
  std::span<const std::uint32_t> values;
  std::uint32_t depth;
  std::size_t cursor = 0;
  std::size_t out = 0;
  std::vector<std::uint32_t> r, l;
  std::unordered_set<std::vector<std::uint8_t>, VecHash> failed;

  std::vector<std::uint8_t> key() const {
    std::vector<std::uint8_t> k;
    k.reserve(4 + r.size() + l.size());
    k.push_back(static_cast<std::uint8_t>(cursor));
    k.push_back(static_cast<std::uint8_t>(out));
    for (auto v : r) k.push_back(static_cast<std::uint8_t>(v));
    k.push_back(0);  // separator; values are >= 1
    for (auto v : l) k.push_back(static_cast<std::uint8_t>(v));
    return k;
  }

  bool dfs() {
    const std::size_t n = values.size();
    if (out == n) return true;
    auto k = key();
    if (failed.contains(k)) return false;

    if (cursor < n && r.size() < depth) {
      r.push_back(values[cursor]);
      ++cursor;
      if (dfs()) return true;
      --cursor;
      r.pop_back();
    }
    if (!r.empty()) {
      const std::uint32_t v = r.back();
      r.pop_back();
      l.push_back(v);
      if (dfs()) return true;
      l.pop_back();
      r.push_back(v);
    }
    if (!l.empty() && l.back() == out + 1) {
      l.pop_back();
      ++out;
      if (dfs()) return true;
      --out;
      l.push_back(static_cast<std::uint32_t>(out + 1));
    }
    failed.insert(std::move(k));
    return false;
  }
};

}  // namespace

bool decide_sortable_reference(const Permutation& p, std::uint32_t depth) {
  if (depth < 1) throw std::invalid_argument("stack depth must be at least 1");
  if (p.size() > 200) {
    throw ResourceBudgetExceeded("reference decider is intended for small instances");
  }
  ReferenceSearch s;
  s.values = p.entries();
  s.depth = depth;
  return s.dfs();
}

namespace {

struct TraceEnumerator {
  std::span<const std::uint32_t> values;
  std::vector<std::uint32_t> ascending;
  std::uint32_t depth;
  std::uint64_t limit;
  const std::function<bool(const MoveSequence&)>* visit;

  std::size_t cursor = 0;
  std::size_t out = 0;
  std::vector<std::uint32_t> r, l;
  MoveSequence moves;
  std::uint64_t count = 0;
  bool stopped = false;

  void run() {
    const std::size_t n = values.size();
    if (out == n) {
      if (count == limit) {
        throw LimitExceeded("successful sorting traces exceed the requested limit");
      }
      ++count;
      if (!(*visit)(moves)) stopped = true;
      return;
    }
    if (cursor < n && r.size() < depth) {
      r.push_back(values[cursor]);
      ++cursor;
      moves.push_back(Move::kInputToR);
      run();
      moves.pop_back();
      --cursor;
      r.pop_back();
      if (stopped) return;
    }
    if (!r.empty()) {
      const std::uint32_t v = r.back();
      r.pop_back();
      l.push_back(v);
      moves.push_back(Move::kRToL);
      run();
      moves.pop_back();
      l.pop_back();
      r.push_back(v);
      if (stopped) return;
    }
    if (!l.empty() && l.back() == ascending[out]) {
      const std::uint32_t v = l.back();
      l.pop_back();
      ++out;
      moves.push_back(Move::kLToOutput);
      run();
      moves.pop_back();
      --out;
      l.push_back(v);
      if (stopped) return;
    }
  }
};

std::uint64_t for_each_trace_impl(std::span<const std::uint32_t> values, std::uint32_t depth,
                                  std::uint64_t limit,
                                  const std::function<bool(const MoveSequence&)>& visit) {
  if (depth < 1) throw std::invalid_argument("stack depth must be at least 1");
  if (values.empty()) throw std::invalid_argument("machine input must be nonempty");
  TraceEnumerator e;
  e.values = values;
  e.ascending.assign(values.begin(), values.end());
  std::sort(e.ascending.begin(), e.ascending.end());
  e.depth = depth;
  e.limit = limit;
  e.visit = &visit;
  e.run();
  return e.count;
}

}  // namespace

std::uint64_t for_each_sorting_trace(const Permutation& p, std::uint32_t depth,
                                     std::uint64_t limit,
                                     const std::function<bool(const MoveSequence&)>& visit) {
  return for_each_trace_impl(p.entries(), depth, limit, visit);
}

std::uint64_t for_each_sorting_trace(const ValueSequence& v, std::uint32_t depth,
                                     std::uint64_t limit,
                                     const std::function<bool(const MoveSequence&)>& visit) {
  return for_each_trace_impl(v.entries(), depth, limit, visit);
}

std::vector<MoveSequence> enumerate_sorting_traces(const Permutation& p, std::uint32_t depth,
                                                   std::uint64_t limit) {
  std::vector<MoveSequence> out;
  for_each_sorting_trace(p, depth, limit, [&](const MoveSequence& ms) {
    out.push_back(ms);
    return true;
  });
  return out;
}

}  // namespace stacksort
