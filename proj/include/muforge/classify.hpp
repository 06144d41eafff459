#pragma once

#include <cstdint>
#include <vector>

#include "muforge/iso.hpp"

namespace muforge {

// The canonical nonsingular minimally unsatisfiable clause-sets of
// deficiency 2 over variables 1..n (n >= 2): the full positive clause, the
// full negative clause, and the binary cycle clauses {-i, i mod n + 1}.
// Every nonsingular minimally unsatisfiable clause-set of deficiency 2 is
// isomorphic to exactly one member of this family.
ClauseSet gen_dn(int n);

struct DnWitness {
    int n = 0;
    IsoWitness map;  // from the input onto gen_dn(n)
};

// For nonsingular minimally unsatisfiable input of deficiency 2: the
// witness isomorphism onto gen_dn(n). Throws PreconditionError when the
// input is not of that class, PropertyError if no witness exists (every
// clause-set of this class is a relabeling of some gen_dn(n)).
DnWitness dn_witness(const ClauseSet& f, const DpOptions& opts = {},
                     int iso_bound = kDefaultIsoBound);

// For minimally unsatisfiable f of deficiency 2: the unique n such that
// every complete singular reduction of f ends isomorphic to gen_dn(n).
// Computed by one greedy reduction; a second, seed-fixed randomized
// reduction cross-checks the variable count (and with verification on,
// both end points are checked isomorphic to gen_dn(n) and to each other).
int nonsingularity_type(const ClauseSet& f, const DpOptions& opts = {},
                        int iso_bound = kDefaultIsoBound);

// Inverse singular extension: given clauses C_i = main_part ∪ side_parts[i]
// all present in f and pairwise distinct, replace them by the m+1 clauses
// main_part ∪ {new_var} and side_parts[i] ∪ {¬new_var}. The new variable is
// singular in the result, and eliminating it restores f exactly (checked).
// Preserves minimal unsatisfiability and deficiency.
ClauseSet inverse_sdp_extend(const ClauseSet& f, const Clause& main_part,
                             const std::vector<Clause>& side_parts,
                             Var new_var, const DpOptions& opts = {});

// Full gluing over a fresh variable w: {C ∪ {w} : C ∈ f1} ∪ {D ∪ {¬w} : D ∈
// f2}. Requires var-disjoint inputs and fresh w. For minimally
// unsatisfiable inputs the result is minimally unsatisfiable with
// deficiency δ(f1) + δ(f2) - 1.
ClauseSet full_glue(const ClauseSet& f1, const ClauseSet& f2, Var w,
                    const DpOptions& opts = {});

// Deterministic corpus of minimally unsatisfiable clause-sets of a chosen
// deficiency: a seed instance ({⊥} for deficiency 1, a random gen_dn for 2,
// a gluing of two for 3) grown by `steps` randomized inverse singular
// extensions, optionally saturated. Every instance is reproducible from
// (seed, index) alone; with verification on, each instance is re-checked
// minimally unsatisfiable of the requested deficiency.
struct GeneratorRecipe {
    std::uint64_t seed = 1;
    int count = 10;
    int delta = 1;  // 1, 2 or 3
    int steps = 6;
    bool saturate = false;
};

std::vector<ClauseSet> generate_mu_corpus(const GeneratorRecipe& recipe,
                                          const DpOptions& opts = {});

}  // namespace muforge
