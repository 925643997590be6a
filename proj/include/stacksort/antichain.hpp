#pragma once

#include <cstdint>

#include "stacksort/machine.hpp"
#include "stacksort/permutation.hpp"

namespace stacksort {

/// Parameters of the antichain families: member index and machine depth.
/// The families are defined for depth >= 3.
struct AntichainSpec {
  std::uint32_t index = 0;
  std::uint32_t depth = 3;
};

/// The depth-3 family member: prefix 2 4 3 7 6 1, then i+1 shifted copies of
/// the six-entry zig-zag block, then the three-entry tail; length 6i+15.
Permutation generate_gi(std::uint32_t i);

/// The excluded sibling 2 4 3 7 6 1 8 9 5. It is a basis element too but not
/// part of the family; only reachable behind the CLI debug flag.
Permutation generate_g_minus1();

/// The depth-t generalization: same prefix and blocks, tail
/// (14 15 16 ... 12+t 11) shifted by 6i; length 6i+12+t. Coincides with
/// generate_gi at depth 3.
Permutation generate_git(std::uint32_t i, std::uint32_t depth);
Permutation generate_git(const AntichainSpec& spec);

/// True iff p is unsortable at the given depth while every one-point
/// deletion is sortable. Deletions are decided in parallel when jobs > 1.
bool verify_basis_membership(const Permutation& p, std::uint32_t depth,
                             std::uint32_t jobs = 1);

/// A sorting trace for the family member with one entry removed
/// (1 <= deleted_pos <= 6i+15) on the depth-3 machine, assembled from the
/// scripted case analysis rather than search. The script replays against
/// expected intermediate configurations and the final trace is validated;
/// any mismatch throws UnhandledCase.
MoveSequence constructive_sort_deletion(std::uint32_t i, std::uint32_t deleted_pos);

/// Basis lifting: for sigma in the depth-t basis, returns sigma itself when
/// it is already unsortable one level up, otherwise prepends the shifted
/// three-entry blocker. The result is re-verified as a depth-(t+1) basis
/// member; failure of that check throws LiftFailed.
Permutation lift_basis_element(const Permutation& sigma, std::uint32_t depth,
                               std::uint32_t jobs = 1);

}  // namespace stacksort
