#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "muforge/dp.hpp"

namespace muforge {

inline constexpr int kDefaultIsoBound = 16;

// A clause-set isomorphism: a bijective, complementation-preserving literal
// map. Stored as the image of the positive literal of every source
// variable; images of negative literals follow by complementation.
class IsoWitness {
public:
    IsoWitness() = default;
    explicit IsoWitness(std::vector<std::pair<Var, Lit>> positive_images);

    Lit image(Lit x) const;
    Clause apply(const Clause& c) const;
    ClauseSet apply(const ClauseSet& f) const;

    // Bijective over the source/target variable sets and maps f onto g.
    bool verifies(const ClauseSet& f, const ClauseSet& g) const;

    const std::vector<std::pair<Var, Lit>>& positive_images() const {
        return images_;
    }

private:
    std::vector<std::pair<Var, Lit>> images_;  // sorted by source variable
};

// Canonical representative of the isomorphism class of f, over variables
// 1..n. Computed by levelwise greedy label search: targets are assigned one
// variable (with polarity flip) at a time, keeping exactly the partial
// labelings whose prefix encoding is minimal; variable degree pairs and
// clause lengths enter through the encoding itself, so no separate
// invariant pass is needed. Equal canonical forms characterize isomorphism.
struct CanonicalResult {
    ClauseSet canon;
    IsoWitness map;  // from f onto canon
};

CanonicalResult canonical_form_with_map(const ClauseSet& f,
                                        int iso_bound = kDefaultIsoBound);
ClauseSet canonical_form(const ClauseSet& f, int iso_bound = kDefaultIsoBound);

// Witness from f onto g, or nullopt. The witness is re-verified by direct
// application before being returned.
std::optional<IsoWitness> are_isomorphic(const ClauseSet& f,
                                         const ClauseSet& g,
                                         int iso_bound = kDefaultIsoBound);

enum class Confluence { confluent, confluent_mod_iso, divergent };

std::string to_string(Confluence c);

// Complete classification of the singular reduction behaviour of a
// minimally unsatisfiable clause-set: the set of end points, whether they
// are unique (confluent), unique up to isomorphism (witnesses from the
// first result onto each other result), or genuinely divergent (a
// non-isomorphic pair). eventually_saturated records whether every end
// point is saturated.
struct ConfluenceReport {
    Confluence classification = Confluence::confluent;
    std::vector<ClauseSet> results;
    std::vector<ReductionTrace> traces;
    int n_after = 0;
    bool eventually_saturated = false;
    std::vector<IsoWitness> witnesses;  // results[0] onto results[i+1]
    std::optional<std::pair<int, int>> non_iso_pair;
    std::optional<int> nonsingularity_type;  // set when deficiency is 2
};

ConfluenceReport classify_confluence(const ClauseSet& f,
                                     const DpOptions& opts = {},
                                     int iso_bound = kDefaultIsoBound);

// For a divergent input, descends one singular step at a time, keeping
// divergence, until the singularity index reaches 1. Returns the tuple
// taken (length = index - 1) and the reduced clause-set, which is divergent
// of index 1.
struct DescentResult {
    SingularTuple tuple;
    ClauseSet reduced;
};

DescentResult check_divergence_descent(const ClauseSet& f,
                                       const DpOptions& opts = {},
                                       int iso_bound = kDefaultIsoBound);

// Structure report for minimally unsatisfiable f with singularity index 1
// and at least two singular variables: no singular variable is 1-singular,
// and all share one main clause. When every one-step reduction is
// saturated, additionally: there are exactly two singular variables, the
// main clause minus the two singular literals is contained in every side
// clause, and the two reduction results are isomorphic via the explicit
// renaming that sends the second singular literal to the complement of the
// first — which is checked constructively.
struct Index1Report {
    std::vector<Var> singular;
    bool all_non_1_singular = false;
    std::optional<Clause> common_main;
    bool eventually_saturated = false;
    bool cfli = false;
    bool pair_of_two = false;
    bool side_inclusion = false;
    bool constructive_witness_valid = false;
};

Index1Report check_index1_structure(const ClauseSet& f,
                                    const DpOptions& opts = {},
                                    int iso_bound = kDefaultIsoBound);

}  // namespace muforge
