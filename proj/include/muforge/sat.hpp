#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "muforge/clause.hpp"

namespace muforge {

// Hard default cap on oracle inputs. All oracle entry points take an
// explicit bound and refuse larger inputs with BoundError; nothing is ever
// silently approximated.
inline constexpr int kDefaultVarBound = 28;

// A total assignment over a fixed variable list, sorted by variable.
class Assignment {
public:
    Assignment() = default;
    explicit Assignment(std::vector<std::pair<Var, bool>> values);

    const std::vector<std::pair<Var, bool>>& values() const { return values_; }
    std::optional<bool> value(Var v) const;
    bool satisfies(const Clause& c) const;
    bool satisfies(const ClauseSet& f) const;

    friend bool operator==(const Assignment& a, const Assignment& b) {
        return a.values_ == b.values_;
    }

private:
    std::vector<std::pair<Var, bool>> values_;
};

// ⟨x→1⟩ * f: drop clauses containing x, remove the complement of x from the
// remaining clauses.
ClauseSet assign_true(const ClauseSet& f, Lit x);

// Plain DPLL with unit propagation and lexicographic branching (smallest
// variable first, false before true). Returns the first satisfying total
// assignment over var(f) in that branch order, or nullopt. Deterministic;
// no heuristics, so runs are reproducible and auditable.
std::optional<Assignment> is_satisfiable(const ClauseSet& f,
                                         int var_bound = kDefaultVarBound);

enum class MuStatus {
    satisfiable,
    unsat_not_minimal,
    minimally_unsatisfiable,
};

// Verdict plus witness: a model when satisfiable, or the first clause (in
// canonical order) whose removal keeps the set unsatisfiable when the set is
// unsatisfiable but not minimally so.
struct MuVerdict {
    MuStatus status = MuStatus::satisfiable;
    std::optional<Assignment> model;
    std::optional<Clause> removable;

    bool is_mu() const { return status == MuStatus::minimally_unsatisfiable; }
};

MuVerdict classify_mu(const ClauseSet& f, int var_bound = kDefaultVarBound);

// Saturation check for minimally unsatisfiable f (precondition, verified):
// f is saturated when adding any literal over var(f) \ var(C) to any clause
// C makes the set satisfiable. On failure reports the first offending
// (clause, literal) pair in the deterministic scan order: clauses canonical,
// literals by variable ascending with negative polarity first.
struct SaturationCheck {
    bool saturated = false;
    std::optional<std::pair<Clause, Lit>> violation;
};

SaturationCheck is_saturated_mu(const ClauseSet& f,
                                int var_bound = kDefaultVarBound);

// Unsatisfiable hitting clause-sets: hitting, and the clause weights 2^-|C|
// sum to exactly 1. The sum is evaluated exactly with a binary-carry
// counter, so no floating point and no size limits.
bool is_uhit(const ClauseSet& f);

// Searches for a set of variables whose polarity flip turns f into a Horn
// clause-set (at most one positive literal per clause). Encoded as 2-SAT
// over flip indicators and solved by implication-graph SCCs; an already-Horn
// input yields the empty flip set.
std::optional<std::vector<Var>> is_renamable_horn(const ClauseSet& f);

// Unit-clause propagation to fixpoint. {⊥} as soon as the empty clause
// appears; the result is independent of the unit selection order.
ClauseSet r1(const ClauseSet& f);

// Failed-literal reduction: while some literal x over var(f), scanned by
// variable ascending and positive polarity first, has r1(⟨x→0⟩*f) = {⊥},
// commit x and rescan. Input containing the empty clause maps to {⊥}.
ClauseSet r2(const ClauseSet& f);

}  // namespace muforge
