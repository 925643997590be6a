#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "stacksort/antichain.hpp"
#include "stacksort/basis.hpp"
#include "stacksort/laws.hpp"
#include "stacksort/machine.hpp"
#include "stacksort/permutation.hpp"

namespace py = pybind11;
using namespace stacksort;

namespace {

Permutation as_perm(const std::vector<std::uint32_t>& entries) { return Permutation(entries); }

SweepOptions sweep_options(std::uint32_t jobs, bool allow_long,
                           const std::optional<std::string>& checkpoint_dir) {
  SweepOptions opts;
  opts.jobs = jobs;
  opts.allow_long = allow_long;
  if (checkpoint_dir) opts.checkpoint_dir = *checkpoint_dir;
  return opts;
}

std::optional<Embedding> embedding_from(const Permutation& p, int law,
                                        const std::optional<std::vector<std::uint32_t>>& idx) {
  if (!idx || law == 1) return std::nullopt;
  return Embedding(p, *idx, law_pattern(law));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sorting with a bounded stack feeding an unbounded stack: deciders, basis "
            "enumeration, antichain families, and structural law checks.";

  py::register_exception<ParseError>(m, "TextParseError", PyExc_ValueError);
  py::register_exception<NotABijection>(m, "NotABijection", PyExc_ValueError);
  py::register_exception<IndexOutOfRange>(m, "InputIndexError", PyExc_IndexError);

  m.def("parse_permutation",
        [](const std::string& text) { return Permutation::parse(text).entries(); },
        py::arg("text"),
        "Parse one-line notation (separated decimals, or compact digits).");
  m.def("render_permutation",
        [](const std::vector<std::uint32_t>& p) { return as_perm(p).render(); }, py::arg("perm"));
  m.def("contains",
        [](const std::vector<std::uint32_t>& p, const std::vector<std::uint32_t>& q) {
          return contains(as_perm(p), as_perm(q));
        },
        py::arg("perm"), py::arg("pattern"));
  m.def("containment_witness",
        [](const std::vector<std::uint32_t>& p, const std::vector<std::uint32_t>& q) {
          return containment_witness(as_perm(p), as_perm(q));
        },
        py::arg("perm"), py::arg("pattern"),
        "First witness index tuple (1-based), or None.");
  m.def("delete_at",
        [](const std::vector<std::uint32_t>& p, std::uint32_t pos) {
          return as_perm(p).delete_at(pos).entries();
        },
        py::arg("perm"), py::arg("pos"));
  m.def("one_point_extensions",
        [](const std::vector<std::uint32_t>& p) {
          std::vector<std::vector<std::uint32_t>> out;
          for (const auto& q : one_point_extensions(as_perm(p))) out.push_back(q.entries());
          return out;
        },
        py::arg("perm"));
  m.def("shift_values",
        [](const std::vector<std::uint32_t>& v, std::int64_t mm) {
          return shift(ValueSequence(v), mm).entries();
        },
        py::arg("values"), py::arg("m"));
  m.def("is_antichain",
        [](const std::vector<std::vector<std::uint32_t>>& ps) {
          std::vector<Permutation> perms;
          perms.reserve(ps.size());
          for (const auto& p : ps) perms.push_back(as_perm(p));
          const auto check = is_antichain(perms);
          using Pair = std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>;
          std::optional<Pair> violation;
          if (check.violation) {
            violation = Pair{check.violation->first.entries(),
                             check.violation->second.entries()};
          }
          return std::make_pair(check.ok, violation);
        },
        py::arg("perms"), "(ok, violating (container, contained) pair or None).");

  m.def("decide_sortable",
        [](const std::vector<std::uint32_t>& p, std::uint32_t depth) {
          return decide_sortable(as_perm(p), depth);
        },
        py::arg("perm"), py::arg("depth"));
  m.def("sort_witness",
        [](const std::vector<std::uint32_t>& p, std::uint32_t depth) -> std::optional<std::string> {
          const auto w = sort_witness(as_perm(p), depth);
          if (!w) return std::nullopt;
          return trace_to_text(*w);
        },
        py::arg("perm"), py::arg("depth"), "Trace text ('I'/'T'/'O' tokens) or None.");
  m.def("validate_trace",
        [](const std::vector<std::uint32_t>& p, std::uint32_t depth, const std::string& trace) {
          const auto v = validate_trace(as_perm(p), depth, parse_trace_text(trace));
          return std::make_tuple(v.ok, v.failed_step, v.reason);
        },
        py::arg("perm"), py::arg("depth"), py::arg("trace"),
        "(ok, failed_step, reason) from replaying the trace.");
  m.def("enumerate_sorting_traces",
        [](const std::vector<std::uint32_t>& p, std::uint32_t depth, std::uint64_t limit) {
          std::vector<std::string> out;
          for (const auto& ms : enumerate_sorting_traces(as_perm(p), depth, limit)) {
            out.push_back(trace_to_text(ms));
          }
          return out;
        },
        py::arg("perm"), py::arg("depth"), py::arg("limit"));

  m.def("count_sortable_table",
        [](std::uint32_t max_length, std::uint32_t depth, std::uint32_t jobs, bool allow_long,
           const std::optional<std::string>& checkpoint_dir) {
          std::vector<std::tuple<std::uint32_t, std::uint64_t, std::uint64_t>> rows;
          for (const auto& row :
               run_length_sweep(max_length, depth, sweep_options(jobs, allow_long, checkpoint_dir))) {
            rows.emplace_back(row.n, row.sortable, row.basis);
          }
          return rows;
        },
        py::arg("max_length"), py::arg("depth"), py::arg("jobs") = 1,
        py::arg("allow_long") = false, py::arg("checkpoint_dir") = std::nullopt,
        "Rows (n, sortable_count, basis_count) for n = 1..max_length.");
  m.def("basis_elements",
        [](std::uint32_t max_length, std::uint32_t depth, std::uint32_t jobs, bool allow_long,
           const std::optional<std::string>& checkpoint_dir) {
          std::vector<std::tuple<std::uint32_t, std::uint32_t, std::vector<std::uint32_t>>> out;
          for (const auto& rec :
               run_basis_sweep(max_length, depth, sweep_options(jobs, allow_long, checkpoint_dir))
                   .basis) {
            out.emplace_back(rec.length, rec.depth, rec.perm.entries());
          }
          return out;
        },
        py::arg("max_length"), py::arg("depth"), py::arg("jobs") = 1,
        py::arg("allow_long") = false, py::arg("checkpoint_dir") = std::nullopt,
        "Verified basis elements as (n, depth, perm) tuples.");

  m.def("generate_gi", [](std::uint32_t i) { return generate_gi(i).entries(); }, py::arg("i"));
  m.def("generate_git",
        [](std::uint32_t i, std::uint32_t depth) { return generate_git(i, depth).entries(); },
        py::arg("i"), py::arg("depth"));
  m.def("generate_g_minus1", [] { return generate_g_minus1().entries(); });
  m.def("verify_basis_membership",
        [](const std::vector<std::uint32_t>& p, std::uint32_t depth, std::uint32_t jobs) {
          return verify_basis_membership(as_perm(p), depth, jobs);
        },
        py::arg("perm"), py::arg("depth"), py::arg("jobs") = 1);
  m.def("constructive_sort_deletion",
        [](std::uint32_t i, std::uint32_t pos) {
          return trace_to_text(constructive_sort_deletion(i, pos));
        },
        py::arg("i"), py::arg("deleted_pos"),
        "Scripted sorting trace for the family member with one entry removed.");
  m.def("lift_basis_element",
        [](const std::vector<std::uint32_t>& p, std::uint32_t depth, std::uint32_t jobs) {
          return lift_basis_element(as_perm(p), depth, jobs).entries();
        },
        py::arg("perm"), py::arg("depth"), py::arg("jobs") = 1);

  m.def("check_law",
        [](int law, const std::vector<std::uint32_t>& p, std::uint32_t depth,
           const std::optional<std::vector<std::uint32_t>>& indices, std::uint64_t budget) {
          const auto perm = as_perm(p);
          const auto report = check_law(law, perm, depth, embedding_from(perm, law, indices),
                                        budget);
          py::dict out;
          out["law"] = report.law;
          out["holds"] = report.holds;
          out["traces_checked"] = report.traces_checked;
          if (report.counterexample) {
            py::dict ce;
            ce["trace"] = trace_to_text(report.counterexample->trace);
            ce["step"] = report.counterexample->step;
            out["counterexample"] = ce;
          } else {
            out["counterexample"] = py::none();
          }
          return out;
        },
        py::arg("law"), py::arg("perm"), py::arg("depth"), py::arg("indices") = std::nullopt,
        py::arg("budget") = kDefaultTraceBudget,
        "Check one law; laws 2..5 need embedding indices, law 1 ignores them.");

#ifdef STACKSORT_VERSION
  m.attr("__version__") = STACKSORT_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
