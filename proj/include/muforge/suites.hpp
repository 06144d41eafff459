#pragma once

#include <string>
#include <vector>

#include "muforge/classify.hpp"

namespace muforge {

// One named property over a deterministic instance stream: `checked` counts
// individual assertions that were evaluated, `violations` those that
// failed, and `notes` keeps the first few failure descriptions verbatim.
struct PropertyResult {
    std::string name;
    long long checked = 0;
    long long violations = 0;
    std::vector<std::string> notes;

    PropertyResult() = default;
    explicit PropertyResult(std::string n) : name(std::move(n)) {}

    bool ok() const { return violations == 0; }
};

struct SuiteReport {
    std::vector<PropertyResult> properties;

    bool ok() const {
        for (const PropertyResult& p : properties)
            if (!p.ok()) return false;
        return true;
    }
};

// The property suites cross-check the reduction engine against independent
// statements of the theory on generated corpora plus a few pinned
// instances:
//  - degrees: exact literal-degree ledger across every singular step,
//    creation/destruction of singular variables by step degree, and
//    monotone degrees along saturated chains;
//  - exchange: neighbour-swap rules against direct revalidation, end-set
//    equality under admissible permutations, commutation of general
//    DP-reduction modulo subsumption, and the permuted-reduction equality
//    criterion on minimally unsatisfiable end points;
//  - index: equal length of randomized maximal reduction sequences, and on
//    small instances full enumeration against the transversal structure of
//    the singularity hypergraph;
//  - confluence: saturated inputs reduce confluently; eventually saturated
//    inputs are confluent modulo isomorphism (witnesses re-verified);
//  - deficiency2: every complete reduction of a deficiency-2 input lands in
//    the canonical family, with the type invariant under relabelings;
//  - hitting: exhaustive check over at most 3 variables that the exact
//    weight criterion matches the satisfiability oracle, plus closure of
//    (unsatisfiable) hitting clause-sets under DP-reduction on generated
//    instances.
std::vector<PropertyResult> run_degree_suite(const DpOptions& opts = {});
std::vector<PropertyResult> run_exchange_suite(const DpOptions& opts = {});
std::vector<PropertyResult> run_index_suite(const DpOptions& opts = {});
std::vector<PropertyResult> run_confluence_suite(const DpOptions& opts = {});
std::vector<PropertyResult> run_deficiency2_suite(const DpOptions& opts = {});
std::vector<PropertyResult> run_hitting_suite(const DpOptions& opts = {});

SuiteReport run_all_suites(const DpOptions& opts = {});

}  // namespace muforge
