#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "muforge/clause.hpp"
#include "muforge/sat.hpp"

namespace muforge {

// Deterministic pseudo-random stream (splitmix64). Used wherever randomized
// checks or corpus sampling need reproducibility across platforms; the
// standard-library distributions are avoided on purpose since their mapping
// is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
    bool flip() { return (next() & 1) != 0; }

private:
    std::uint64_t state_;
};

struct DpOptions {
    bool verify = false;             // re-check oracle-level invariants
    int var_bound = kDefaultVarBound;
};

// Davis-Putnam elimination of v: keep the clauses not mentioning v, add the
// resolvent of every pair (C ∋ v, D ∋ ¬v) that clashes in exactly one
// variable. Pairs clashing in a further variable are skipped entirely.
ClauseSet dp(const ClauseSet& f, Var v);

// A variable v is singular when min(ldeg(v), ldeg(¬v)) = 1; the profile
// fixes the singular literal x (the polarity of degree one), its main clause
// (the unique clause containing x), the m side clauses containing ¬x, and
// the degree m = ldeg(¬x). For 1-singular variables (both polarities of
// degree one) either orientation is a valid profile; the default is the
// positive literal.
struct SingularProfile {
    Var variable = 0;
    int degree = 0;  // m; the variable degree is m + 1
    Lit singular_literal = Lit(1);
    Clause main;
    std::vector<Clause> sides;
    bool is_1_singular = false;
};

bool is_singular(const ClauseSet& f, Var v);
std::optional<SingularProfile> singular_profile(const ClauseSet& f, Var v);
std::optional<SingularProfile> singular_profile(const ClauseSet& f, Var v,
                                                bool positive_orientation);
std::vector<SingularProfile> singular_profiles(const ClauseSet& f);

std::vector<Var> singular_vars(const ClauseSet& f);
std::vector<Var> one_singular_vars(const ClauseSet& f);
std::vector<Var> non_one_singular_vars(const ClauseSet& f);

// The three structural conditions under which eliminating a singular
// variable preserves minimal unsatisfiability:
//   (a) every side clause clashes with the main clause in exactly one
//       variable (the eliminated one),
//   (b) the resolvents are pairwise distinct,
//   (c) no resolvent coincides with a clause untouched by the elimination.
// When all three hold, dp(f, v) is minimally unsatisfiable iff f is.
struct SingularReductionCheck {
    bool single_clash = true;
    std::optional<std::pair<Clause, int>> multi_clash_side;  // side, clash count

    bool resolvents_distinct = true;
    std::optional<std::pair<Clause, Clause>> coinciding_sides;

    bool resolvents_fresh = true;
    std::optional<std::pair<Clause, Clause>> absorbing_pair;  // side, untouched clause

    bool all_pass() const {
        return single_clash && resolvents_distinct && resolvents_fresh;
    }
};

SingularReductionCheck check_singular_reduction(const ClauseSet& f, Var v);

// One singular DP-reduction step with its trace record. With verification
// on, the input and output are both oracle-checked minimally unsatisfiable,
// the deficiency is checked stable, and the literal-degree ledger (see
// check_degree_ledger) is asserted exactly.
struct TraceStep {
    Var variable = 0;
    int degree = 0;
    Clause main;
    std::vector<Clause> sides;
    std::string result_hash;
};

struct ReductionTrace {
    std::string initial_hash;
    std::vector<TraceStep> steps;
    std::string final_hash;
};

std::pair<ClauseSet, TraceStep> sdp_step(const ClauseSet& f, Var v,
                                         const DpOptions& opts = {});

// Replays a trace from its initial clause-set, re-checking every recorded
// step (variable, degree, main and side clauses, result hash). Throws
// PropertyError on the first divergence.
ClauseSet replay(const ClauseSet& initial, const ReductionTrace& trace);

// Exact bookkeeping for the literal degrees across one singular step: for
// var(x) ≠ v, ldeg is unchanged when x is not in the main clause, and drops
// by one plus the number of side clauses missing x otherwise. Returns a
// description of the first mismatch, or nullopt when the ledger balances.
std::optional<std::string> check_degree_ledger(const ClauseSet& before,
                                               const ClauseSet& after,
                                               const SingularProfile& profile);

// Replace C by C ∪ {x}. Precondition: C ∈ f and var(x) occurs in f but not
// in C. merged flags a clause-count drop (the grown clause already existed).
struct SaturateResult {
    ClauseSet result;
    bool merged = false;
};

SaturateResult saturate_step(const ClauseSet& f, const Clause& c, Lit x);

// Saturate a minimally unsatisfiable clause-set: keep committing literal
// additions that leave the set unsatisfiable until none exists. Scan order
// is deterministic (clauses canonical, variables ascending, negative
// polarity first) and the scan restarts after every committed addition.
// The result is saturated minimally unsatisfiable with n, c and deficiency
// unchanged.
ClauseSet saturation(const ClauseSet& f, const DpOptions& opts = {});

// Partial saturation towards eliminating singular v: add main-minus-x to
// every side clause. The elimination result is unchanged; with verification
// on this is asserted, along with preservation of minimal unsatisfiability.
ClauseSet partial_saturate_for(const ClauseSet& f, Var v,
                               const DpOptions& opts = {});

// The three conditions under which eliminating singular v preserves
// saturation:
//   (a) dp(f, v) is saturated minimally unsatisfiable,
//   (b) the main clause minus x equals the intersection of the side clauses
//       minus ¬x,
//   (c) no clause avoiding v contains the main clause minus x.
struct SaturatedReductionCheck {
    bool reduct_saturated = false;
    bool core_matches_sides = false;
    Clause side_core;  // computed intersection of the reduced side clauses
    bool core_not_covered = false;
    std::optional<Clause> covering_clause;

    bool all_pass() const {
        return reduct_saturated && core_matches_sides && core_not_covered;
    }
};

SaturatedReductionCheck check_smu_singular(const ClauseSet& f, Var v,
                                           const DpOptions& opts = {});

// A singular tuple: a sequence of variables each singular at its step, with
// the degree observed at each step.
struct SingularTuple {
    std::vector<Var> variables;
    std::vector<int> degrees;

    std::size_t size() const { return variables.size(); }
    friend bool operator==(const SingularTuple& a, const SingularTuple& b) {
        return a.variables == b.variables;
    }
};

// Replays the sequence; nullopt as soon as a step is not singular.
std::optional<SingularTuple> validate_tuple(const ClauseSet& f,
                                            const std::vector<Var>& vars,
                                            const DpOptions& opts = {});

ClauseSet dp_sequence(const ClauseSet& f, const std::vector<Var>& vars);

// Whether positions i, i+1 (1-based) of a valid tuple may be swapped.
// Decided by direct revalidation; the rule label states which branch of the
// exchange analysis applies:
//   first_degree_ge2  — degree of step i is at least 2: always allowed;
//   both_degree1      — both degrees are 1: always allowed;
//   degree1_then_ge2  — allowed iff the later variable is already singular
//                       before step i.
// With verification on, the branch prediction is asserted against the
// revalidation result.
enum class ExchangeRule { first_degree_ge2, both_degree1, degree1_then_ge2 };

struct ExchangeVerdict {
    bool allowed = false;
    ExchangeRule rule = ExchangeRule::first_degree_ge2;
};

ExchangeVerdict neighbour_exchange_allowed(const ClauseSet& f,
                                           const SingularTuple& t, int i,
                                           const DpOptions& opts = {});

// Both sequences must be valid singular tuples over the same variable set;
// returns whether the end clause-sets coincide (they always do; a false
// return indicates an implementation bug, which callers should treat as
// fatal).
bool swap_equality_check(const ClauseSet& f, const SingularTuple& t,
                         const std::vector<Var>& permuted,
                         const DpOptions& opts = {});

// Reorders a valid tuple so that the 1-singular steps form a prefix, with
// the variables that are already 1-singular in f itself (chosen_front, which
// must equal exactly that set) first in ascending order. Realized by
// degree-safe neighbour exchanges; every intermediate stays a valid tuple.
SingularTuple normalize_tuple_front1(const ClauseSet& f,
                                     const SingularTuple& t,
                                     const std::vector<Var>& chosen_front,
                                     const DpOptions& opts = {});

// The singularity hypergraph: vertices are var(f); every clause meeting the
// set of chosen singular literals contributes the variables of that meet as
// a hyperedge. Since each chosen literal has degree one, the hyperedges are
// nonempty and pairwise disjoint. choice fixes the orientation of
// 1-singular variables (variable → positive?); entries for other variables
// must agree with their forced orientation.
struct SingularityHypergraph {
    std::vector<Var> vertices;
    std::vector<std::vector<Var>> edges;
    std::vector<Lit> chosen_literals;
};

SingularityHypergraph singularity_hypergraph(
    const ClauseSet& f, const std::map<Var, bool>& choice = {},
    const DpOptions& opts = {});

// All subset-minimal vertex sets meeting every hyperedge. With pairwise
// disjoint hyperedges these are exactly the one-pick-per-edge products,
// enumerated depth-first with ascending vertex order. No edges: the empty
// transversal only.
std::vector<std::vector<Var>> minimal_transversals(
    const SingularityHypergraph& h);

// Depth-first enumeration (ascending variable at every node) of all tuples
// that cannot be extended. A nonsingular input yields exactly the empty
// tuple. Throws BoundError when more than limit tuples exist.
std::vector<SingularTuple> maximal_singular_tuples(
    const ClauseSet& f, std::size_t limit = 100000,
    const DpOptions& opts = {});

// Length of the greedy (lowest-index) maximal tuple. All maximal tuples
// share this length; with verification on this is spot-checked against
// randomized maximal tuples.
int singularity_index(const ClauseSet& f, const DpOptions& opts = {});

SingularTuple random_maximal_tuple(const ClauseSet& f, Rng& rng,
                                   const DpOptions& opts = {});

// All nonsingular end points of complete singular reductions, each with one
// witness trace, deduplicated by clause-set equality and sorted canonically.
// The search memoizes intermediate clause-sets; state_limit bounds the
// number of distinct intermediate states.
struct SdpResult {
    ClauseSet result;
    ReductionTrace trace;
};

std::vector<SdpResult> sdp_set(const ClauseSet& f, const DpOptions& opts = {},
                               std::size_t state_limit = 100000);

// Clause-count bounded DP preprocessing: repeatedly eliminate (ascending
// variable scan, restarting after every application) any variable whose
// elimination does not grow the clause count by more than threshold, then
// subsumption-eliminate.
struct PreprocessStep {
    Var variable = 0;
    int clauses_before = 0;
    int clauses_after = 0;
    std::string result_hash;
};

struct PreprocessResult {
    ClauseSet result;
    std::vector<PreprocessStep> steps;
    int removed_by_subsumption = 0;
};

PreprocessResult bounded_dp_preprocess(const ClauseSet& f, int threshold);

}  // namespace muforge
