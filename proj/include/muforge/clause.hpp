#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "muforge/errors.hpp"

namespace muforge {

using Var = int;  // variables are positive integers

// A literal in DIMACS convention: a nonzero integer whose sign is the
// polarity. Ordering is by variable first, negative polarity before
// positive; this is the canonical order used everywhere (emission, clause
// comparison, deterministic scans).
class Lit {
public:
    explicit Lit(int code) : code_(code) {
        if (code == 0) throw PreconditionError("literal code must be nonzero");
    }

    static Lit pos(Var v) { return Lit(check_var(v)); }
    static Lit neg(Var v) { return Lit(-check_var(v)); }

    int code() const { return code_; }
    Var var() const { return code_ < 0 ? -code_ : code_; }
    bool positive() const { return code_ > 0; }
    Lit complement() const { return Lit(-code_); }

    friend bool operator==(Lit a, Lit b) { return a.code_ == b.code_; }
    friend std::strong_ordering operator<=>(Lit a, Lit b) {
        return a.key() <=> b.key();
    }

private:
    static Var check_var(Var v) {
        if (v <= 0) throw PreconditionError("variable index must be positive");
        return v;
    }
    long key() const { return 2L * var() + (positive() ? 1 : 0); }

    int code_;
};

// A clause: a clash-free set of literals, kept sorted in canonical order.
// Construction rejects clashing literal sets (tautological clauses are not
// representable); duplicate literals are merged.
class Clause {
public:
    Clause() = default;  // the empty clause
    explicit Clause(std::vector<Lit> lits);

    // Convenience builder from DIMACS codes, e.g. Clause::of({1, -2}).
    static Clause of(std::initializer_list<int> codes);

    std::size_t size() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }
    const std::vector<Lit>& lits() const { return lits_; }

    bool contains(Lit x) const;
    bool mentions(Var v) const;
    bool subset_of(const Clause& other) const;

    // Number of literals of *this whose complement occurs in other.
    int clash_count(const Clause& other) const;

    Clause with(Lit x) const;      // throws on clash with an existing literal
    Clause without(Lit x) const;   // no-op if x is absent
    Clause union_with(const Clause& other) const;  // throws on clash
    Clause difference(const Clause& other) const;
    Clause intersection(const Clause& other) const;

    std::vector<Var> vars() const;

    auto begin() const { return lits_.begin(); }
    auto end() const { return lits_.end(); }

    friend bool operator==(const Clause& a, const Clause& b) {
        return a.lits_ == b.lits_;
    }
    friend std::strong_ordering operator<=>(const Clause& a, const Clause& b);

private:
    std::vector<Lit> lits_;
};

std::ostream& operator<<(std::ostream& os, const Clause& c);

// A clause-set with set semantics: clauses are kept sorted and duplicates
// merged. Derived statistics (variable list, degree tables) are computed at
// construction, so instances are immutable and cheap to share.
class ClauseSet {
public:
    ClauseSet() = default;  // the empty clause-set (satisfiable)
    explicit ClauseSet(std::vector<Clause> clauses);

    int clause_count() const { return static_cast<int>(clauses_.size()); }
    int var_count() const { return static_cast<int>(vars_.size()); }
    int deficiency() const { return clause_count() - var_count(); }

    const std::vector<Clause>& clauses() const { return clauses_; }
    const std::vector<Var>& vars() const { return vars_; }

    // Literal/variable degrees: number of clauses containing the literal /
    // either polarity of the variable. Zero for absent literals.
    int ldeg(Lit x) const;
    int vdeg(Var v) const { return ldeg(Lit::pos(v)) + ldeg(Lit::neg(v)); }

    bool contains(const Clause& c) const;
    bool mentions(Var v) const;
    bool has_empty_clause() const;

    ClauseSet with(const Clause& c) const;
    ClauseSet without(const Clause& c) const;

    std::uint64_t hash() const;  // over the canonical literal codes

    auto begin() const { return clauses_.begin(); }
    auto end() const { return clauses_.end(); }

    friend bool operator==(const ClauseSet& a, const ClauseSet& b) {
        return a.clauses_ == b.clauses_;
    }
    friend std::strong_ordering operator<=>(const ClauseSet& a,
                                            const ClauseSet& b) {
        return a.clauses_ <=> b.clauses_;
    }

private:
    std::vector<Clause> clauses_;
    std::vector<Var> vars_;
    std::vector<std::pair<int, int>> degs_;  // per vars_[i]: (ldeg +v, ldeg -v)

    const std::pair<int, int>* deg_entry(Var v) const;
};

std::ostream& operator<<(std::ostream& os, const ClauseSet& f);

struct ClauseSetHash {
    std::size_t operator()(const ClauseSet& f) const {
        return static_cast<std::size_t>(f.hash());
    }
};

// {⊥}: the clause-set consisting of the empty clause.
ClauseSet contradiction();

// Resolution on the unique clashing variable. Throws ResolutionError unless
// the two clauses clash in exactly one variable.
class ResolutionError : public PreconditionError {
public:
    explicit ResolutionError(int clashes)
        : PreconditionError("clauses clash in " + std::to_string(clashes) +
                            " variables, resolution needs exactly 1"),
          clashes_(clashes) {}
    int clashes() const { return clashes_; }

private:
    int clashes_;
};

Clause resolvent(const Clause& c, const Clause& d);

// Every pair of distinct clauses clashes in at least one variable.
bool is_hitting(const ClauseSet& f);

// Keep exactly the subset-minimal clauses.
ClauseSet subsumption_eliminate(const ClauseSet& f);

// refines(f, g): every clause of f is contained in some clause of g.
// When it fails, counterexample is the first offending clause of f in
// canonical order.
struct RefinementVerdict {
    bool holds = false;
    std::optional<Clause> counterexample;
};

RefinementVerdict refines(const ClauseSet& f, const ClauseSet& g);

}  // namespace muforge
