#include "stacksort/laws.hpp"

#include <algorithm>

namespace stacksort {

namespace {

bool order_iso(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if ((a[i] < a[j]) != (b[i] < b[j])) return false;
    }
  }
  return true;
}

}  // namespace

Embedding::Embedding(Permutation target, std::vector<std::uint32_t> indices, Permutation pattern)
    : target_(std::move(target)), indices_(std::move(indices)), pattern_(std::move(pattern)) {
  if (indices_.size() != pattern_.size()) {
    throw std::invalid_argument("embedding index count must match the pattern length");
  }
  std::vector<std::uint32_t> sub;
  std::uint32_t prev = 0;
  for (auto i : indices_) {
    if (i <= prev || i > target_.size()) {
      throw std::invalid_argument("embedding indices must be strictly increasing and in range");
    }
    prev = i;
    sub.push_back(target_.at(i));
  }
  if (!order_iso(sub, pattern_.entries())) {
    throw std::invalid_argument("embedded subsequence is not order-isomorphic to the pattern");
  }
}

std::vector<Embedding> find_embeddings(const Permutation& p, const Permutation& q) {
  std::vector<Embedding> out;
  detail::for_each_embedding0(p.entries(), q.entries(),
                              [&](const std::vector<std::uint32_t>& idx0) {
                                std::vector<std::uint32_t> idx(idx0);
                                for (auto& i : idx) ++i;
                                out.emplace_back(p, std::move(idx), q);
                                return true;
                              });
  return out;
}

const Permutation& law_pattern(int law) {
  static const Permutation p132 = Permutation::parse("132");
  static const Permutation p243651 = Permutation::parse("243651");
  static const Permutation p32514 = Permutation::parse("32514");
  static const Permutation p32541 = Permutation::parse("32541");
  switch (law) {
    case 2: return p132;
    case 3: return p243651;
    case 4: return p32514;
    case 5: return p32541;
    default: throw std::invalid_argument("only laws 2..5 quantify over a pattern");
  }
}

namespace {

struct Replay {
  const Permutation& p;
  std::vector<std::uint32_t> pos_of;  // value -> 1-based position
  MachineConfig cfg;

  Replay(const Permutation& perm, std::uint32_t depth)
      : p(perm), pos_of(perm.size() + 1, 0), cfg(perm, depth) {
    for (std::uint32_t i = 1; i <= perm.size(); ++i) pos_of[perm.at(i)] = i;
  }

  static bool holds_all(std::span<const std::uint32_t> stack,
                        std::initializer_list<std::uint32_t> values) {
    for (auto v : values) {
      if (std::find(stack.begin(), stack.end(), v) == stack.end()) return false;
    }
    return true;
  }
};

// Law 1: whenever two entries with (earlier position, smaller value) and
// (later position, larger value) are both in L, the smaller sits above.
// Violations only arise when a push buries such an entry.
std::optional<std::size_t> eval_law1(Replay& rep, const MoveSequence& ms) {
  for (std::size_t s = 0; s < ms.size(); ++s) {
    if (ms[s] == Move::kRToL) {
      const std::uint32_t w = rep.cfg.stack_r().back();
      for (auto u : rep.cfg.stack_l()) {
        if (rep.pos_of[u] < rep.pos_of[w] && u < w) return s + 1;
      }
    }
    rep.cfg.apply(ms[s]);
  }
  return std::nullopt;
}

std::optional<std::size_t> eval_law2(Replay& rep, const MoveSequence& ms, std::uint32_t v1,
                                     std::uint32_t v2, std::uint32_t v3) {
  for (std::size_t s = 0; s < ms.size(); ++s) {
    rep.cfg.apply(ms[s]);
    if (ms[s] == Move::kInputToR && Replay::holds_all(rep.cfg.stack_r(), {v1, v2, v3})) {
      return s + 1;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> eval_law3(Replay& rep, const MoveSequence& ms, std::uint32_t v4,
                                     std::uint32_t v5) {
  bool together = false;
  for (std::size_t s = 0; s < ms.size() && !together; ++s) {
    rep.cfg.apply(ms[s]);
    together = Replay::holds_all(rep.cfg.stack_r(), {v4, v5});
  }
  if (!together) return ms.size();
  return std::nullopt;
}

std::optional<std::size_t> eval_law4(Replay& rep, const MoveSequence& ms, std::uint32_t hyp1,
                                     std::uint32_t hyp2, std::uint32_t con1,
                                     std::uint32_t con2) {
  bool hyp = false, con = false;
  for (std::size_t s = 0; s < ms.size(); ++s) {
    rep.cfg.apply(ms[s]);
    hyp = hyp || Replay::holds_all(rep.cfg.stack_r(), {hyp1, hyp2});
    con = con || Replay::holds_all(rep.cfg.stack_l(), {con1, con2});
  }
  if (hyp && !con) return ms.size();
  return std::nullopt;
}

std::optional<std::size_t> eval_law5(Replay& rep, const MoveSequence& ms, const Embedding& e) {
  const std::uint32_t v1 = e.value(1), v2 = e.value(2), v3 = e.value(3), v4 = e.value(4);
  const std::uint32_t i2 = e.index(2);
  bool hyp = false;
  for (std::size_t s = 0; s < ms.size(); ++s) {
    hyp = hyp || Replay::holds_all(rep.cfg.stack_l(), {v1, v2});
    if (ms[s] == Move::kLToOutput && rep.cfg.stack_l().back() == v1) {
      // Configuration immediately before the first embedded entry is output.
      if (hyp) {
        if (!Replay::holds_all(rep.cfg.stack_r(), {v3, v4})) return s + 1;
        for (auto u : rep.cfg.stack_l()) {
          if (rep.pos_of[u] >= i2) return s + 1;
        }
      }
      return std::nullopt;
    }
    rep.cfg.apply(ms[s]);
  }
  return std::nullopt;
}

}  // namespace

namespace {

void validate_law_arguments(int law, const Permutation& p, std::uint32_t depth,
                            const std::optional<Embedding>& embedding) {
  if (law < 1 || law > 5) throw std::invalid_argument("law id must be 1..5");
  if (law >= 2) {
    if (depth < 3) throw std::invalid_argument("laws 2..5 apply to depths >= 3");
    if (!embedding.has_value()) {
      throw WrongPattern("laws 2..5 need an embedding of their pattern");
    }
    if (!(embedding->pattern() == law_pattern(law))) {
      throw WrongPattern("embedding pattern does not match the law's pattern");
    }
    if (!(embedding->target() == p)) {
      throw WrongPattern("embedding target is not the checked permutation");
    }
  }
}

}  // namespace

std::optional<std::size_t> law_violation_step(int law, const Permutation& p,
                                              std::uint32_t depth,
                                              const std::optional<Embedding>& embedding,
                                              const MoveSequence& trace) {
  validate_law_arguments(law, p, depth, embedding);
  Replay rep(p, depth);
  switch (law) {
    case 1: return eval_law1(rep, trace);
    case 2:
      return eval_law2(rep, trace, embedding->value(1), embedding->value(2),
                       embedding->value(3));
    case 3: return eval_law3(rep, trace, embedding->value(4), embedding->value(5));
    case 4:
      // Conclusion pair: the 3rd and 5th embedded entries (the two largest
      // values of 32514). They are the pair the case tree forces into L.
      return eval_law4(rep, trace, embedding->value(1), embedding->value(2),
                       embedding->value(3), embedding->value(5));
    case 5: return eval_law5(rep, trace, *embedding);
  }
  return std::nullopt;
}

LawReport check_law(int law, const Permutation& p, std::uint32_t depth,
                    const std::optional<Embedding>& embedding, std::uint64_t trace_budget) {
  validate_law_arguments(law, p, depth, embedding);

  LawReport report{law, p, depth, embedding, 0, true, std::nullopt};

  try {
    report.traces_checked =
        for_each_sorting_trace(p, depth, trace_budget, [&](const MoveSequence& ms) {
          if (auto step = law_violation_step(law, p, depth, embedding, ms)) {
            report.holds = false;
            report.counterexample = LawCounterexample{ms, *step};
            return false;
          }
          return true;
        });
  } catch (const LimitExceeded&) {
    throw TraceBudgetExceeded("successful sorting traces exceed the check budget");
  }
  return report;
}

LawSweepReport sweep_laws_1_2(const Permutation& p, std::uint32_t depth,
                              std::uint64_t trace_budget) {
  if (depth < 3) throw std::invalid_argument("the combined sweep applies to depths >= 3");
  LawSweepReport report;

  std::vector<std::uint32_t> pos_of(p.size() + 1, 0);
  for (std::uint32_t i = 1; i <= p.size(); ++i) pos_of[p.at(i)] = i;

  auto evaluate = [&](const MoveSequence& ms) {
    MachineConfig cfg(p, depth);
    std::optional<std::size_t> law1_step, law2_step;
    for (std::size_t s = 0; s < ms.size(); ++s) {
      if (!law1_step && ms[s] == Move::kRToL) {
        const std::uint32_t w = cfg.stack_r().back();
        for (auto u : cfg.stack_l()) {
          if (pos_of[u] < pos_of[w] && u < w) {
            law1_step = s + 1;
            break;
          }
        }
      }
      cfg.apply(ms[s]);
      if (!law2_step && ms[s] == Move::kInputToR) {
        // Stack order in R is position order, so any value triple read
        // bottom-to-top is a candidate pattern occurrence.
        const auto r = cfg.stack_r();
        for (std::size_t a = 0; a + 2 < r.size() && !law2_step; ++a) {
          for (std::size_t b = a + 1; b + 1 < r.size() && !law2_step; ++b) {
            for (std::size_t c = b + 1; c < r.size(); ++c) {
              if (r[a] < r[c] && r[c] < r[b]) {
                law2_step = s + 1;
                break;
              }
            }
          }
        }
      }
      if (law1_step && law2_step) break;
    }
    if (law1_step && report.law1_holds) {
      report.law1_holds = false;
      report.law1_counterexample = LawCounterexample{ms, *law1_step};
    }
    if (law2_step && report.law2_holds) {
      report.law2_holds = false;
      report.law2_counterexample = LawCounterexample{ms, *law2_step};
    }
    return report.law1_holds || report.law2_holds;
  };

  try {
    report.traces_checked = for_each_sorting_trace(p, depth, trace_budget, evaluate);
  } catch (const LimitExceeded&) {
    throw TraceBudgetExceeded("successful sorting traces exceed the check budget");
  }
  return report;
}

}  // namespace stacksort
