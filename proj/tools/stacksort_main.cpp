// Command-line front end: decide / validate / count / basis / antichain /
// laws / selftest. Exit codes: 0 success or "holds", 1 negative verification
// outcome, 2 usage or input error, 3 internal assertion failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "stacksort/antichain.hpp"
#include "stacksort/basis.hpp"
#include "stacksort/laws.hpp"
#include "stacksort/machine.hpp"
#include "stacksort/permutation.hpp"

namespace {

using namespace stacksort;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

std::optional<std::string> checkpoint_dir_or_env(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("STACKSORT_CHECKPOINT_DIR"); env && *env) {
    return std::string(env);
  }
  return std::nullopt;
}

SweepOptions make_sweep_options(std::uint32_t jobs, bool allow_long,
                                const std::string& checkpoint_flag) {
  SweepOptions opts;
  opts.jobs = jobs;
  opts.allow_long = allow_long;
  if (auto dir = checkpoint_dir_or_env(checkpoint_flag)) opts.checkpoint_dir = *dir;
  return opts;
}

ordered_json perm_json(const Permutation& p) {
  ordered_json arr = ordered_json::array();
  for (auto v : p.entries()) arr.push_back(v);
  return arr;
}

int run_decide(const std::string& perm_text, std::uint32_t depth, bool want_trace) {
  const auto p = Permutation::parse(perm_text);
  if (want_trace) {
    const auto w = sort_witness(p, depth);
    std::cout << (w ? "sortable" : "unsortable") << "\n";
    if (w) std::cout << trace_to_text(*w) << "\n";
  } else {
    std::cout << (decide_sortable(p, depth) ? "sortable" : "unsortable") << "\n";
  }
  return kExitOk;
}

int run_validate(const std::string& perm_text, std::uint32_t depth, std::string trace_text,
                 const std::string& trace_file) {
  if (!trace_file.empty()) {
    std::ifstream is(trace_file);
    if (!is) {
      std::cerr << "error: cannot read trace file " << trace_file << "\n";
      return kExitUsage;
    }
    std::stringstream buf;
    buf << is.rdbuf();
    trace_text = buf.str();
  }
  const auto p = Permutation::parse(perm_text);
  const auto ms = parse_trace_text(trace_text);
  const auto v = validate_trace(p, depth, ms);
  if (v.ok) {
    std::cout << "valid\n";
    return kExitOk;
  }
  std::cout << "invalid at step " << v.failed_step << ": " << v.reason << "\n";
  return kExitNegative;
}

int run_count(std::uint32_t length, std::uint32_t depth, const SweepOptions& opts) {
  const auto rows = run_length_sweep(length, depth, opts);
  std::cout << "# length sortable basis\n";
  for (const auto& row : rows) {
    std::cout << row.n << ' ' << row.sortable << ' ' << row.basis << "\n";
  }
  return kExitOk;
}

int run_basis(std::uint32_t max_length, std::uint32_t depth, const std::string& format,
              const SweepOptions& opts) {
  const auto result = run_basis_sweep(max_length, depth, opts);
  if (format == "csv") {
    std::cout << "# n,depth,perm\n";
    for (const auto& rec : result.basis) {
      std::cout << rec.length << ',' << rec.depth << ",\"" << rec.perm.render() << "\"\n";
    }
  } else {
    for (const auto& rec : result.basis) {
      ordered_json row;
      row["n"] = rec.length;
      row["depth"] = rec.depth;
      row["perm"] = perm_json(rec.perm);
      std::cout << row.dump() << "\n";
    }
  }
  return kExitOk;
}

int run_antichain_family(std::int64_t index, std::uint32_t depth, bool debug, bool verify,
                         const std::string& emit, std::uint32_t jobs) {
  Permutation member = [&] {
    if (index == -1) {
      if (!debug) {
        throw CLI::ValidationError("--index -1 is a debug-only family member; pass --debug");
      }
      return generate_g_minus1();
    }
    if (index < 0) throw CLI::ValidationError("--index must be >= 0 (or -1 with --debug)");
    return generate_git(static_cast<std::uint32_t>(index), depth);
  }();

  if (emit == "jsonl") {
    ordered_json row;
    row["family"] = "g";
    row["index"] = index;
    row["depth"] = depth;
    row["perm"] = perm_json(member);
    std::cout << row.dump() << "\n";
  } else {
    std::cout << member.render() << "\n";
  }
  if (verify) {
    const bool ok = verify_basis_membership(member, depth, jobs);
    std::cout << "basis-member: " << (ok ? "true" : "false") << "\n";
    return ok ? kExitOk : kExitNegative;
  }
  return kExitOk;
}

int run_antichain_lift(const std::string& perm_text, std::uint32_t depth, std::uint32_t jobs) {
  const auto sigma = Permutation::parse(perm_text);
  std::cout << lift_basis_element(sigma, depth, jobs).render() << "\n";
  return kExitOk;
}

int run_laws(int lemma, const std::string& perm_text, std::uint32_t depth,
             const std::string& indices_text, std::uint64_t budget) {
  const auto p = Permutation::parse(perm_text);

  std::vector<std::optional<Embedding>> embeddings;
  if (lemma == 1) {
    embeddings.push_back(std::nullopt);
  } else if (!indices_text.empty()) {
    std::vector<std::uint32_t> idx;
    std::stringstream ss(indices_text);
    for (std::string tok; std::getline(ss, tok, ',');) {
      idx.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    }
    embeddings.emplace_back(Embedding(p, std::move(idx), law_pattern(lemma)));
  } else {
    for (auto& e : find_embeddings(p, law_pattern(lemma))) embeddings.emplace_back(std::move(e));
  }

  std::uint64_t traces = 0;
  for (const auto& e : embeddings) {
    const auto report = check_law(lemma, p, depth, e, budget);
    traces += report.traces_checked;
    if (!report.holds) {
      std::cout << "counterexample at step " << report.counterexample->step;
      if (e) {
        std::cout << " (embedding";
        for (auto i : e->indices()) std::cout << ' ' << i;
        std::cout << ")";
      }
      std::cout << "\n" << trace_to_text(report.counterexample->trace) << "\n";
      return kExitNegative;
    }
  }
  const std::size_t embedding_count = lemma == 1 ? 0 : embeddings.size();
  std::cout << "holds (" << embedding_count << " embeddings, " << traces << " traces)\n";
  return kExitOk;
}

// ---- selftest ---------------------------------------------------------------

struct SelftestState {
  int failures = 0;
  void report(const std::string& name, bool ok, std::uint64_t cases) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << cases << " cases)\n";
    if (!ok) ++failures;
  }
};

void for_all_permutations(std::uint32_t n, const std::function<void(const Permutation&)>& fn) {
  std::vector<std::uint32_t> e(n);
  std::iota(e.begin(), e.end(), 1u);
  do {
    fn(Permutation(e));
  } while (std::next_permutation(e.begin(), e.end()));
}

int run_selftest(std::uint32_t max_n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SelftestState st;
  const std::uint32_t sweep_n = std::min<std::uint32_t>(max_n, 7);

  {
    bool ok = true;
    std::uint64_t cases = 0;
    for (std::uint32_t n = 1; n <= std::min<std::uint32_t>(sweep_n, 6); ++n) {
      for_all_permutations(n, [&](const Permutation& p) {
        ok = ok && Permutation::parse(p.render()) == p &&
             Permutation::from_packed(p.packed(), n) == p;
        ++cases;
      });
    }
    for (int k = 0; k < 200; ++k) {
      const auto n = static_cast<std::uint32_t>(1 + rng() % 16);
      std::vector<std::uint32_t> e(n);
      std::iota(e.begin(), e.end(), 1u);
      std::shuffle(e.begin(), e.end(), rng);
      const Permutation p(e);
      ok = ok && Permutation::parse(p.render()) == p &&
           Permutation::from_packed(p.packed(), n) == p;
      ++cases;
    }
    st.report("text and packed encodings round-trip", ok, cases);
  }
  {
    bool ok = true;
    std::uint64_t cases = 0;
    const auto pat = Permutation::parse("231");
    for (std::uint32_t n = 1; n <= sweep_n; ++n) {
      for_all_permutations(n, [&](const Permutation& p) {
        ok = ok && decide_sortable(p, 1) == !contains(p, pat);
        ++cases;
      });
    }
    st.report("depth-1 sortability equals 231-avoidance", ok, cases);
  }
  {
    bool ok = true;
    std::uint64_t cases = 0;
    for (std::uint32_t n = 1; n <= sweep_n; ++n) {
      for_all_permutations(n, [&](const Permutation& p) {
        for (std::uint32_t t = 1; t <= 3; ++t) {
          ok = ok && decide_sortable(p, t) == decide_sortable_reference(p, t);
          ++cases;
        }
      });
    }
    st.report("pruned decider equals unpruned reference", ok, cases);
  }
  {
    bool ok = true;
    std::uint64_t cases = 0;
    for (std::uint32_t n = 1; n <= std::min<std::uint32_t>(sweep_n, 6); ++n) {
      for_all_permutations(n, [&](const Permutation& p) {
        for (std::uint32_t t = 1; t <= 2; ++t) {
          if (decide_sortable(p, t)) ok = ok && decide_sortable(p, t + 1);
        }
        const auto w = sort_witness(p, 3);
        ok = ok && w.has_value() == decide_sortable(p, 3);
        if (w) ok = ok && validate_trace(p, 3, *w).ok;
        if (n > 1 && decide_sortable(p, 2)) {
          for (std::uint32_t i = 1; i <= n; ++i) ok = ok && decide_sortable(p.delete_at(i), 2);
        }
        ++cases;
      });
    }
    for (int k = 0; k < 25; ++k) {
      const auto n = static_cast<std::uint32_t>(8 + rng() % 5);
      std::vector<std::uint32_t> e(n);
      std::iota(e.begin(), e.end(), 1u);
      std::shuffle(e.begin(), e.end(), rng);
      const Permutation p(e);
      if (decide_sortable(p, 3)) {
        for (std::uint32_t i = 1; i <= n; ++i) ok = ok && decide_sortable(p.delete_at(i), 3);
      }
      ++cases;
    }
    st.report("monotonicity, deletion closure, witness soundness", ok, cases);
  }
  {
    bool ok = true;
    std::uint64_t cases = 0;
    for (std::uint32_t n = 1; n <= 5; ++n) {
      for_all_permutations(n, [&](const Permutation& p) {
        for (const auto& q : one_point_extensions(p)) {
          bool witness = false;
          for (std::uint32_t i = 1; i <= q.size() && !witness; ++i) {
            witness = q.delete_at(i) == p;
          }
          ok = ok && witness;
          ++cases;
        }
      });
    }
    st.report("one-point extensions invert deletions", ok, cases);
  }
  {
    bool ok = true;
    std::uint64_t cases = 0;
    for (std::uint32_t n = 1; n <= sweep_n; ++n) {
      for_all_permutations(n, [&](const Permutation& p) {
        if (!decide_sortable(p, 3)) return;
        const auto sweep = sweep_laws_1_2(p, 3);
        ok = ok && sweep.law1_holds && sweep.law2_holds;
        ++cases;
      });
    }
    st.report("stack ordering and triple-exclusion laws over short sortable inputs", ok, cases);
  }
  if (st.failures == 0) {
    std::cout << "selftest: all suites passed\n";
    return kExitOk;
  }
  std::cout << "selftest: " << st.failures << " suite(s) failed\n";
  return kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sorting with a bounded stack feeding an unbounded stack: decision, "
               "enumeration, antichain families, and structural law checks"};
  app.require_subcommand(1);

  // decide
  std::string decide_perm;
  std::uint32_t decide_depth = 3;
  bool decide_trace = false;
  auto* decide = app.add_subcommand("decide", "Decide whether a permutation is sortable");
  decide->add_option("--perm", decide_perm, "Permutation (one-line notation)")->required();
  decide->add_option("--depth", decide_depth, "Depth of the bounded stack")->required();
  decide->add_flag("--trace", decide_trace, "Print a sorting trace when sortable");

  // validate
  std::string validate_perm, validate_trace_text, validate_trace_file;
  std::uint32_t validate_depth = 3;
  auto* validate = app.add_subcommand("validate", "Replay a trace against a permutation");
  validate->add_option("--perm", validate_perm, "Permutation (one-line notation)")->required();
  validate->add_option("--depth", validate_depth, "Depth of the bounded stack")->required();
  validate->add_option("--trace", validate_trace_text, "Trace text (I/T/O tokens)");
  validate->add_option("--trace-file", validate_trace_file, "File containing trace text");

  // count
  std::uint32_t count_length = 0, count_depth = 3, count_jobs = 1;
  bool count_allow_long = false;
  std::string count_checkpoint;
  auto* count = app.add_subcommand("count", "Sortable and basis counts per length");
  count->add_option("--length", count_length, "Maximum length")->required();
  count->add_option("--depth", count_depth, "Depth of the bounded stack")->required();
  count->add_option("--jobs", count_jobs, "Worker threads");
  count->add_option("--checkpoint", count_checkpoint,
                    "Checkpoint directory (default $STACKSORT_CHECKPOINT_DIR)");
  count->add_flag("--allow-long", count_allow_long, "Permit lengths above 10");

  // basis
  std::uint32_t basis_length = 0, basis_depth = 3, basis_jobs = 1;
  bool basis_allow_long = false;
  std::string basis_checkpoint, basis_format = "jsonl";
  auto* basis = app.add_subcommand("basis", "Emit the verified basis elements");
  basis->add_option("--max-length", basis_length, "Maximum length")->required();
  basis->add_option("--depth", basis_depth, "Depth of the bounded stack")->required();
  basis->add_option("--format", basis_format, "Output format")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  basis->add_option("--jobs", basis_jobs, "Worker threads");
  basis->add_option("--checkpoint", basis_checkpoint,
                    "Checkpoint directory (default $STACKSORT_CHECKPOINT_DIR)");
  basis->add_flag("--allow-long", basis_allow_long, "Permit lengths above 10");

  // antichain
  std::string antichain_family = "g", antichain_emit = "perm";
  std::int64_t antichain_index = 0;
  std::uint32_t antichain_depth = 3, antichain_jobs = 1;
  bool antichain_verify = false, antichain_debug = false;
  auto* antichain = app.add_subcommand("antichain", "Generate and verify family members");
  antichain->add_option("--family", antichain_family, "Family name")
      ->check(CLI::IsMember({"g"}));
  antichain->add_option("--index", antichain_index, "Member index (>= 0; -1 needs --debug)");
  antichain->add_option("--depth", antichain_depth, "Machine depth (>= 3)");
  antichain->add_option("--emit", antichain_emit, "Output form")
      ->check(CLI::IsMember({"perm", "jsonl"}));
  antichain->add_flag("--verify", antichain_verify, "Verify basis membership");
  antichain->add_flag("--debug", antichain_debug, "Allow the excluded index -1");
  antichain->add_option("--jobs", antichain_jobs, "Worker threads");

  std::string lift_perm;
  std::uint32_t lift_depth = 0, lift_jobs = 1;
  auto* lift = antichain->add_subcommand("lift", "Lift a basis element one depth up");
  lift->add_option("--perm", lift_perm, "Basis element (one-line notation)")->required();
  lift->add_option("--depth", lift_depth, "Its depth")->required();
  lift->add_option("--jobs", lift_jobs, "Worker threads");

  // laws
  int laws_lemma = 0;
  std::string laws_perm, laws_indices;
  std::uint32_t laws_depth = 3;
  std::uint64_t laws_budget = kDefaultTraceBudget;
  auto* laws = app.add_subcommand("laws", "Check a structural law over all sorting traces");
  laws->add_option("--lemma", laws_lemma, "Law id (1..5)")->required()->check(CLI::Range(1, 5));
  laws->add_option("--perm", laws_perm, "Permutation (one-line notation)")->required();
  laws->add_option("--depth", laws_depth, "Depth of the bounded stack")->required();
  laws->add_option("--pattern-indices", laws_indices,
                   "Comma-separated embedding indices (default: every embedding)");
  laws->add_option("--budget", laws_budget, "Trace budget per check");

  // selftest
  std::uint32_t selftest_max_n = 7;
  std::uint64_t selftest_seed = 20240811;
  auto* selftest = app.add_subcommand("selftest", "Run the property suites");
  selftest->add_option("--max-n", selftest_max_n, "Exhaustive sweep bound")
      ->check(CLI::Range(1, 8));
  selftest->add_option("--seed", selftest_seed, "Random seed for sampled checks");

  try {
    app.parse(argc, argv);

    if (*decide) return run_decide(decide_perm, decide_depth, decide_trace);
    if (*validate) {
      if (validate_trace_text.empty() && validate_trace_file.empty()) {
        std::cerr << "error: validate needs --trace or --trace-file\n";
        return kExitUsage;
      }
      return run_validate(validate_perm, validate_depth, validate_trace_text,
                          validate_trace_file);
    }
    if (*count) {
      return run_count(count_length, count_depth,
                       make_sweep_options(count_jobs, count_allow_long, count_checkpoint));
    }
    if (*basis) {
      return run_basis(basis_length, basis_depth, basis_format,
                       make_sweep_options(basis_jobs, basis_allow_long, basis_checkpoint));
    }
    if (*antichain) {
      if (*lift) return run_antichain_lift(lift_perm, lift_depth, lift_jobs);
      return run_antichain_family(antichain_index, antichain_depth, antichain_debug,
                                  antichain_verify, antichain_emit, antichain_jobs);
    }
    if (*laws) return run_laws(laws_lemma, laws_perm, laws_depth, laws_indices, laws_budget);
    if (*selftest) return run_selftest(selftest_max_n, selftest_seed);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      return app.exit(e);
    }
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnhandledCase& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const LiftFailed& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
