#include "muforge/sat.hpp"

#include <algorithm>
#include <map>

namespace muforge {

Assignment::Assignment(std::vector<std::pair<Var, bool>> values)
    : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (values_[i - 1].first == values_[i].first)
            throw PreconditionError("duplicate variable in assignment");
}

std::optional<bool> Assignment::value(Var v) const {
    auto it = std::lower_bound(values_.begin(), values_.end(),
                               std::make_pair(v, false));
    if (it == values_.end() || it->first != v) return std::nullopt;
    return it->second;
}

bool Assignment::satisfies(const Clause& c) const {
    for (Lit x : c) {
        auto val = value(x.var());
        if (val && *val == x.positive()) return true;
    }
    return false;
}

bool Assignment::satisfies(const ClauseSet& f) const {
    for (const Clause& c : f)
        if (!satisfies(c)) return false;
    return true;
}

ClauseSet assign_true(const ClauseSet& f, Lit x) {
    std::vector<Clause> out;
    out.reserve(f.clauses().size());
    for (const Clause& c : f) {
        if (c.contains(x)) continue;
        out.push_back(c.without(x.complement()));
    }
    return ClauseSet(std::move(out));
}

namespace {

// DPLL core: returns the partial assignment made on the way to the first
// satisfying leaf (smallest variable branched first, false before true).
std::optional<std::vector<std::pair<Var, bool>>> dpll(ClauseSet f) {
    std::vector<std::pair<Var, bool>> trail;
    for (;;) {
        if (f.has_empty_clause()) return std::nullopt;
        const Clause* unit = nullptr;
        for (const Clause& c : f)
            if (c.size() == 1) {
                unit = &c;
                break;
            }
        if (!unit) break;
        Lit x = unit->lits()[0];
        trail.emplace_back(x.var(), x.positive());
        f = assign_true(f, x);
    }
    if (f.clause_count() == 0) return trail;

    Var v = f.vars().front();
    for (bool val : {false, true}) {
        auto sub = dpll(assign_true(f, val ? Lit::pos(v) : Lit::neg(v)));
        if (sub) {
            trail.emplace_back(v, val);
            trail.insert(trail.end(), sub->begin(), sub->end());
            return trail;
        }
    }
    return std::nullopt;
}

void check_bound(const ClauseSet& f, int var_bound) {
    if (f.var_count() > var_bound)
        throw BoundError("oracle refused: " + std::to_string(f.var_count()) +
                         " variables exceed the bound " +
                         std::to_string(var_bound));
}

}  // namespace

std::optional<Assignment> is_satisfiable(const ClauseSet& f, int var_bound) {
    check_bound(f, var_bound);
    auto trail = dpll(f);
    if (!trail) return std::nullopt;
    // Total assignment over var(f): variables untouched by the search
    // default to false.
    std::vector<std::pair<Var, bool>> values = *trail;
    for (Var v : f.vars()) {
        bool seen = false;
        for (const auto& [w, _] : values)
            if (w == v) {
                seen = true;
                break;
            }
        if (!seen) values.emplace_back(v, false);
    }
    return Assignment(std::move(values));
}

MuVerdict classify_mu(const ClauseSet& f, int var_bound) {
    if (auto model = is_satisfiable(f, var_bound))
        return {MuStatus::satisfiable, std::move(model), std::nullopt};
    for (const Clause& c : f)
        if (!is_satisfiable(f.without(c), var_bound))
            return {MuStatus::unsat_not_minimal, std::nullopt, c};
    return {MuStatus::minimally_unsatisfiable, std::nullopt, std::nullopt};
}

SaturationCheck is_saturated_mu(const ClauseSet& f, int var_bound) {
    if (!classify_mu(f, var_bound).is_mu())
        throw PreconditionError(
            "saturation check requires a minimally unsatisfiable input");
    for (const Clause& c : f) {
        for (Var v : f.vars()) {
            if (c.mentions(v)) continue;
            for (Lit x : {Lit::neg(v), Lit::pos(v)}) {
                ClauseSet candidate = f.without(c).with(c.with(x));
                if (!is_satisfiable(candidate, var_bound))
                    return {false, std::make_pair(c, x)};
            }
        }
    }
    return {true, std::nullopt};
}

bool is_uhit(const ClauseSet& f) {
    if (!is_hitting(f)) return false;
    if (f.clause_count() == 0) return false;
    // Exact check of sum 2^-|C| = 1 via a binary carry counter: two terms of
    // weight 2^-l merge into one of weight 2^-(l-1); a leftover odd term
    // below weight 1 can never be cancelled.
    std::map<std::size_t, unsigned long long> count;
    std::size_t max_len = 0;
    for (const Clause& c : f) {
        ++count[c.size()];
        max_len = std::max(max_len, c.size());
    }
    for (std::size_t l = max_len; l >= 1; --l) {
        unsigned long long at = count.count(l) ? count[l] : 0;
        if (at % 2 != 0) return false;
        count[l - 1] += at / 2;
    }
    return count[0] == 1;
}

std::optional<std::vector<Var>> is_renamable_horn(const ClauseSet& f) {
    auto is_horn = [](const ClauseSet& g) {
        for (const Clause& c : g) {
            int pos = 0;
            for (Lit x : c)
                if (x.positive()) ++pos;
            if (pos > 1) return false;
        }
        return true;
    };
    if (is_horn(f)) return std::vector<Var>{};

    // 2-SAT over flip indicators: for every pair x,y in a clause, not both
    // may be positive after flipping, which is the binary clause
    // (g(x) ∨ g(y)) with g(+v) = flip_v and g(-v) = ¬flip_v.
    const auto& vars = f.vars();
    int m = static_cast<int>(vars.size());
    auto var_index = [&vars](Var v) {
        return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) -
                                vars.begin());
    };
    // node 2i: flip_i true; node 2i+1: flip_i false
    auto node = [](int idx, bool val) { return 2 * idx + (val ? 0 : 1); };
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(2 * m));
    auto add_or = [&](int idx_a, bool val_a, int idx_b, bool val_b) {
        adj[static_cast<std::size_t>(node(idx_a, !val_a))].push_back(node(idx_b, val_b));
        adj[static_cast<std::size_t>(node(idx_b, !val_b))].push_back(node(idx_a, val_a));
    };
    for (const Clause& c : f) {
        const auto& ls = c.lits();
        for (std::size_t i = 0; i < ls.size(); ++i)
            for (std::size_t j = i + 1; j < ls.size(); ++j)
                add_or(var_index(ls[i].var()), ls[i].positive(),
                       var_index(ls[j].var()), ls[j].positive());
    }

    // Iterative Tarjan SCC.
    int n_nodes = 2 * m;
    std::vector<int> comp(static_cast<std::size_t>(n_nodes), -1);
    std::vector<int> low(static_cast<std::size_t>(n_nodes), 0);
    std::vector<int> num(static_cast<std::size_t>(n_nodes), -1);
    std::vector<int> stack, call_node, call_edge;
    std::vector<bool> on_stack(static_cast<std::size_t>(n_nodes), false);
    int counter = 0, comp_count = 0;
    for (int start = 0; start < n_nodes; ++start) {
        if (num[static_cast<std::size_t>(start)] != -1) continue;
        call_node.assign(1, start);
        call_edge.assign(1, 0);
        num[static_cast<std::size_t>(start)] = low[static_cast<std::size_t>(start)] = counter++;
        stack.push_back(start);
        on_stack[static_cast<std::size_t>(start)] = true;
        while (!call_node.empty()) {
            int u = call_node.back();
            auto& ei = call_edge.back();
            if (ei < static_cast<int>(adj[static_cast<std::size_t>(u)].size())) {
                int w = adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(ei++)];
                if (num[static_cast<std::size_t>(w)] == -1) {
                    num[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = counter++;
                    stack.push_back(w);
                    on_stack[static_cast<std::size_t>(w)] = true;
                    call_node.push_back(w);
                    call_edge.push_back(0);
                } else if (on_stack[static_cast<std::size_t>(w)]) {
                    low[static_cast<std::size_t>(u)] =
                        std::min(low[static_cast<std::size_t>(u)], num[static_cast<std::size_t>(w)]);
                }
            } else {
                if (low[static_cast<std::size_t>(u)] == num[static_cast<std::size_t>(u)]) {
                    for (;;) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = false;
                        comp[static_cast<std::size_t>(w)] = comp_count;
                        if (w == u) break;
                    }
                    ++comp_count;
                }
                call_node.pop_back();
                call_edge.pop_back();
                if (!call_node.empty()) {
                    int parent = call_node.back();
                    low[static_cast<std::size_t>(parent)] =
                        std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(u)]);
                }
            }
        }
    }

    std::vector<Var> flips;
    for (int i = 0; i < m; ++i) {
        int ct = comp[static_cast<std::size_t>(node(i, true))];
        int cf = comp[static_cast<std::size_t>(node(i, false))];
        if (ct == cf) return std::nullopt;
        // Tarjan numbers components in reverse topological order, so the
        // later component in topological order has the smaller id.
        if (ct < cf) flips.push_back(vars[static_cast<std::size_t>(i)]);
    }

    // Apply and re-check; a failure here would be an implementation bug.
    std::vector<Clause> flipped;
    for (const Clause& c : f) {
        std::vector<Lit> ls;
        for (Lit x : c)
            ls.push_back(std::binary_search(flips.begin(), flips.end(), x.var())
                             ? x.complement()
                             : x);
        flipped.push_back(Clause(std::move(ls)));
    }
    if (!is_horn(ClauseSet(std::move(flipped))))
        throw PropertyError("renamable-Horn flip set failed verification");
    return flips;
}

ClauseSet r1(const ClauseSet& f) {
    ClauseSet cur = f;
    for (;;) {
        if (cur.has_empty_clause()) return contradiction();
        const Clause* unit = nullptr;
        for (const Clause& c : cur)
            if (c.size() == 1) {
                unit = &c;
                break;
            }
        if (!unit) return cur;
        cur = assign_true(cur, unit->lits()[0]);
    }
}

ClauseSet r2(const ClauseSet& f) {
    ClauseSet cur = f;
    for (;;) {
        if (cur.has_empty_clause()) return contradiction();
        bool fired = false;
        for (Var v : cur.vars()) {
            for (Lit x : {Lit::pos(v), Lit::neg(v)}) {
                if (r1(assign_true(cur, x.complement())) == contradiction()) {
                    cur = assign_true(cur, x);
                    fired = true;
                    break;
                }
            }
            if (fired) break;
        }
        if (!fired) return cur;
    }
}

}  // namespace muforge
