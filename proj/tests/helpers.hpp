#pragma once

#include <algorithm>
#include <functional>
#include <initializer_list>
#include <map>
#include <vector>

#include "muforge/dp.hpp"

namespace muforge::testing {

inline ClauseSet cs(std::initializer_list<std::initializer_list<int>> rows) {
    std::vector<Clause> clauses;
    clauses.reserve(rows.size());
    for (const auto& row : rows) clauses.push_back(Clause::of(row));
    return ClauseSet(std::move(clauses));
}

inline ClauseSet cs(const std::vector<std::vector<int>>& rows) {
    std::vector<Clause> clauses;
    clauses.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<Lit> lits;
        lits.reserve(row.size());
        for (int code : row) lits.emplace_back(code);
        clauses.push_back(Clause(std::move(lits)));
    }
    return ClauseSet(std::move(clauses));
}

// Truth-table satisfiability; independent of the DPLL oracle.
inline bool brute_satisfiable(const ClauseSet& f) {
    if (f.has_empty_clause()) return false;
    const std::vector<Var>& vars = f.vars();
    std::size_t n = vars.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        bool all = true;
        for (const Clause& c : f.clauses()) {
            bool sat = false;
            for (const Lit& l : c.lits()) {
                std::size_t i = static_cast<std::size_t>(
                    std::lower_bound(vars.begin(), vars.end(), l.var()) -
                    vars.begin());
                if (((mask >> i) & 1) == (l.positive() ? 1u : 0u)) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

inline bool brute_mu(const ClauseSet& f) {
    if (brute_satisfiable(f)) return false;
    for (const Clause& c : f.clauses())
        if (!brute_satisfiable(f.without(c))) return false;
    return true;
}

// Renamable Horn by trying every flip set (exponential; small inputs only).
inline bool brute_renamable_horn(const ClauseSet& f) {
    const std::vector<Var>& vars = f.vars();
    std::size_t n = vars.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        bool horn = true;
        for (const Clause& c : f.clauses()) {
            int positives = 0;
            for (const Lit& l : c.lits()) {
                std::size_t i = static_cast<std::size_t>(
                    std::lower_bound(vars.begin(), vars.end(), l.var()) -
                    vars.begin());
                bool pos = l.positive() != (((mask >> i) & 1) != 0);
                if (pos) ++positives;
            }
            if (positives > 1) {
                horn = false;
                break;
            }
        }
        if (horn) return true;
    }
    return false;
}

inline ClauseSet random_clause_set(Rng& rng, int max_vars, int max_clauses) {
    int n = 2 + static_cast<int>(
                    rng.below(static_cast<std::size_t>(max_vars - 1)));
    int c = 2 + static_cast<int>(
                    rng.below(static_cast<std::size_t>(max_clauses - 1)));
    std::vector<Clause> clauses;
    for (int i = 0; i < c; ++i) {
        std::vector<Lit> lits;
        for (Var v = 1; v <= n; ++v) {
            switch (rng.below(4)) {
                case 0: lits.push_back(Lit::pos(v)); break;
                case 1: lits.push_back(Lit::neg(v)); break;
                default: break;
            }
        }
        if (!lits.empty()) clauses.emplace_back(std::move(lits));
    }
    return ClauseSet(std::move(clauses));
}

// Every singular tuple of f (including the empty one), depth-first.
inline long long count_singular_tuples(const ClauseSet& f) {
    long long count = 1;
    for (Var v : singular_vars(f)) count += count_singular_tuples(dp(f, v));
    return count;
}

// All clauses over variables 1..n (3^n of them, including the empty one).
inline std::vector<Clause> clause_universe(int n) {
    std::vector<Clause> out;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rest = code;
        std::vector<Lit> lits;
        for (Var v = 1; v <= n; ++v) {
            switch (rest % 3) {
                case 1: lits.push_back(Lit::pos(v)); break;
                case 2: lits.push_back(Lit::neg(v)); break;
                default: break;
            }
            rest /= 3;
        }
        out.emplace_back(std::move(lits));
    }
    return out;
}

}  // namespace muforge::testing
