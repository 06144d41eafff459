#include "muforge/dp.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "muforge/dimacs.hpp"

namespace muforge {

ClauseSet dp(const ClauseSet& f, Var v) {
    std::vector<Clause> out, pos, neg;
    for (const Clause& c : f) {
        if (c.contains(Lit::pos(v)))
            pos.push_back(c);
        else if (c.contains(Lit::neg(v)))
            neg.push_back(c);
        else
            out.push_back(c);
    }
    for (const Clause& c : pos)
        for (const Clause& d : neg)
            if (c.clash_count(d) == 1) out.push_back(resolvent(c, d));
    return ClauseSet(std::move(out));
}

bool is_singular(const ClauseSet& f, Var v) {
    int a = f.ldeg(Lit::pos(v));
    int b = f.ldeg(Lit::neg(v));
    return std::min(a, b) == 1;
}

namespace {

SingularProfile make_profile(const ClauseSet& f, Lit x) {
    SingularProfile p;
    p.variable = x.var();
    p.singular_literal = x;
    p.degree = f.ldeg(x.complement());
    p.is_1_singular = (p.degree == 1 && f.ldeg(x) == 1);
    for (const Clause& c : f) {
        if (c.contains(x))
            p.main = c;
        else if (c.contains(x.complement()))
            p.sides.push_back(c);
    }
    return p;
}

void require_mu(const ClauseSet& f, const DpOptions& opts, const char* op) {
    if (!classify_mu(f, opts.var_bound).is_mu())
        throw PreconditionError(std::string(op) +
                                " requires a minimally unsatisfiable input");
}

}  // namespace

std::optional<SingularProfile> singular_profile(const ClauseSet& f, Var v) {
    int a = f.ldeg(Lit::pos(v));
    int b = f.ldeg(Lit::neg(v));
    if (a == 1 && b >= 1) return make_profile(f, Lit::pos(v));
    if (b == 1 && a >= 1) return make_profile(f, Lit::neg(v));
    return std::nullopt;
}

std::optional<SingularProfile> singular_profile(const ClauseSet& f, Var v,
                                                bool positive_orientation) {
    Lit x = positive_orientation ? Lit::pos(v) : Lit::neg(v);
    if (f.ldeg(x) != 1 || f.ldeg(x.complement()) < 1) return std::nullopt;
    return make_profile(f, x);
}

std::vector<SingularProfile> singular_profiles(const ClauseSet& f) {
    std::vector<SingularProfile> ps;
    for (Var v : f.vars())
        if (auto p = singular_profile(f, v)) ps.push_back(std::move(*p));
    return ps;
}

std::vector<Var> singular_vars(const ClauseSet& f) {
    std::vector<Var> vs;
    for (Var v : f.vars())
        if (is_singular(f, v)) vs.push_back(v);
    return vs;
}

std::vector<Var> one_singular_vars(const ClauseSet& f) {
    std::vector<Var> vs;
    for (Var v : f.vars())
        if (f.ldeg(Lit::pos(v)) == 1 && f.ldeg(Lit::neg(v)) == 1)
            vs.push_back(v);
    return vs;
}

std::vector<Var> non_one_singular_vars(const ClauseSet& f) {
    std::vector<Var> vs;
    for (Var v : f.vars())
        if (is_singular(f, v) && f.vdeg(v) >= 3) vs.push_back(v);
    return vs;
}

SingularReductionCheck check_singular_reduction(const ClauseSet& f, Var v) {
    auto p = singular_profile(f, v);
    if (!p)
        throw PreconditionError("variable " + std::to_string(v) +
                                " is not singular");
    SingularReductionCheck r;
    std::vector<Clause> resolvents;
    for (const Clause& d : p->sides) {
        int clashes = p->main.clash_count(d);
        if (clashes != 1) {
            if (r.single_clash) {
                r.single_clash = false;
                r.multi_clash_side = {d, clashes};
            }
            continue;
        }
        resolvents.push_back(resolvent(p->main, d));
    }
    for (std::size_t i = 0; i < resolvents.size() && r.resolvents_distinct; ++i)
        for (std::size_t j = i + 1; j < resolvents.size(); ++j)
            if (resolvents[i] == resolvents[j]) {
                r.resolvents_distinct = false;
                r.coinciding_sides = {p->sides[i], p->sides[j]};
                break;
            }
    for (std::size_t i = 0; i < resolvents.size() && r.resolvents_fresh; ++i)
        for (const Clause& e : f) {
            if (e.mentions(v)) continue;
            if (resolvents[i] == e) {
                r.resolvents_fresh = false;
                r.absorbing_pair = {p->sides[i], e};
                break;
            }
        }
    return r;
}

std::optional<std::string> check_degree_ledger(const ClauseSet& before,
                                               const ClauseSet& after,
                                               const SingularProfile& profile) {
    for (Var w : before.vars()) {
        if (w == profile.variable) continue;
        for (Lit x : {Lit::neg(w), Lit::pos(w)}) {
            int expected = before.ldeg(x);
            if (profile.main.contains(x)) {
                int p = 0;
                for (const Clause& d : profile.sides)
                    if (!d.contains(x)) ++p;
                expected += p - 1;
            }
            if (after.ldeg(x) != expected)
                return "degree ledger mismatch for literal " +
                       std::to_string(x.code()) + ": expected " +
                       std::to_string(expected) + ", got " +
                       std::to_string(after.ldeg(x));
        }
    }
    return std::nullopt;
}

std::pair<ClauseSet, TraceStep> sdp_step(const ClauseSet& f, Var v,
                                         const DpOptions& opts) {
    auto p = singular_profile(f, v);
    if (!p)
        throw PreconditionError("variable " + std::to_string(v) +
                                " is not singular");
    if (opts.verify) require_mu(f, opts, "sdp_step");
    ClauseSet result = dp(f, v);
    if (opts.verify) {
        if (!classify_mu(result, opts.var_bound).is_mu())
            throw PropertyError(
                "singular elimination left minimal unsatisfiability");
        if (result.deficiency() != f.deficiency())
            throw PropertyError("singular elimination changed the deficiency");
        if (auto mismatch = check_degree_ledger(f, result, *p))
            throw PropertyError(*mismatch);
    }
    TraceStep step{v, p->degree, p->main, p->sides, dimacs_hash(result)};
    return {std::move(result), std::move(step)};
}

ClauseSet replay(const ClauseSet& initial, const ReductionTrace& trace) {
    if (dimacs_hash(initial) != trace.initial_hash)
        throw PropertyError("trace replay: initial clause-set hash mismatch");
    ClauseSet cur = initial;
    for (const TraceStep& step : trace.steps) {
        auto p = singular_profile(cur, step.variable);
        if (!p)
            throw PropertyError("trace replay: variable " +
                                std::to_string(step.variable) +
                                " is not singular at its step");
        if (p->degree != step.degree || !(p->main == step.main) ||
            p->sides != step.sides)
            throw PropertyError("trace replay: recorded step profile differs");
        cur = dp(cur, step.variable);
        if (dimacs_hash(cur) != step.result_hash)
            throw PropertyError("trace replay: step result hash mismatch");
    }
    if (dimacs_hash(cur) != trace.final_hash)
        throw PropertyError("trace replay: final hash mismatch");
    return cur;
}

SaturateResult saturate_step(const ClauseSet& f, const Clause& c, Lit x) {
    if (!f.contains(c))
        throw PreconditionError("saturate_step: clause not in the clause-set");
    if (c.mentions(x.var()))
        throw PreconditionError(
            "saturate_step: variable already occurs in the clause");
    if (!f.mentions(x.var()))
        throw PreconditionError(
            "saturate_step: variable does not occur in the clause-set");
    ClauseSet result = f.without(c).with(c.with(x));
    return {result, result.clause_count() < f.clause_count()};
}

ClauseSet saturation(const ClauseSet& f, const DpOptions& opts) {
    require_mu(f, opts, "saturation");
    ClauseSet cur = f;
    bool changed = true;
    while (changed) {
        changed = false;
        const auto snapshot = cur.clauses();
        for (const Clause& c : snapshot) {
            for (Var v : cur.vars()) {
                if (c.mentions(v)) continue;
                for (Lit x : {Lit::neg(v), Lit::pos(v)}) {
                    auto step = saturate_step(cur, c, x);
                    if (!is_satisfiable(step.result, opts.var_bound)) {
                        if (step.merged)
                            throw PropertyError(
                                "saturation merged clauses on a minimally "
                                "unsatisfiable input");
                        cur = step.result;
                        changed = true;
                        break;
                    }
                }
                if (changed) break;
            }
            if (changed) break;
        }
    }
    if (opts.verify) {
        if (cur.deficiency() != f.deficiency() ||
            cur.clause_count() != f.clause_count() ||
            cur.vars() != f.vars())
            throw PropertyError("saturation changed the shape parameters");
    }
    return cur;
}

ClauseSet partial_saturate_for(const ClauseSet& f, Var v,
                               const DpOptions& opts) {
    auto p = singular_profile(f, v);
    if (!p)
        throw PreconditionError("variable " + std::to_string(v) +
                                " is not singular");
    if (opts.verify) require_mu(f, opts, "partial_saturate_for");
    Clause core = p->main.without(p->singular_literal);
    std::vector<Clause> clauses;
    for (const Clause& c : f) {
        if (c.contains(p->singular_literal.complement())) {
            try {
                clauses.push_back(c.union_with(core));
            } catch (const PreconditionError&) {
                throw PreconditionError(
                    "partial saturation: side clause clashes with the main "
                    "clause outside the eliminated variable");
            }
        } else {
            clauses.push_back(c);
        }
    }
    ClauseSet result{std::move(clauses)};
    if (!(dp(result, v) == dp(f, v)))
        throw PropertyError(
            "partial saturation changed the elimination result");
    if (opts.verify && !classify_mu(result, opts.var_bound).is_mu())
        throw PropertyError(
            "partial saturation left minimal unsatisfiability");
    return result;
}

SaturatedReductionCheck check_smu_singular(const ClauseSet& f, Var v,
                                           const DpOptions& opts) {
    auto p = singular_profile(f, v);
    if (!p)
        throw PreconditionError("variable " + std::to_string(v) +
                                " is not singular");
    if (opts.verify) require_mu(f, opts, "check_smu_singular");
    SaturatedReductionCheck r;

    ClauseSet reduct = dp(f, v);
    r.reduct_saturated = classify_mu(reduct, opts.var_bound).is_mu() &&
                         is_saturated_mu(reduct, opts.var_bound).saturated;

    Clause core = p->main.without(p->singular_literal);
    Lit bar = p->singular_literal.complement();
    Clause inter = p->sides.front().without(bar);
    for (std::size_t i = 1; i < p->sides.size(); ++i)
        inter = inter.intersection(p->sides[i].without(bar));
    r.side_core = inter;
    r.core_matches_sides = (core == inter);

    r.core_not_covered = true;
    for (const Clause& e : f) {
        if (e.mentions(v)) continue;
        if (core.subset_of(e)) {
            r.core_not_covered = false;
            r.covering_clause = e;
            break;
        }
    }
    return r;
}

std::optional<SingularTuple> validate_tuple(const ClauseSet& f,
                                            const std::vector<Var>& vars,
                                            const DpOptions& opts) {
    if (opts.verify) require_mu(f, opts, "validate_tuple");
    SingularTuple t;
    ClauseSet cur = f;
    for (Var v : vars) {
        auto p = singular_profile(cur, v);
        if (!p) return std::nullopt;
        t.variables.push_back(v);
        t.degrees.push_back(p->degree);
        cur = dp(cur, v);
    }
    return t;
}

ClauseSet dp_sequence(const ClauseSet& f, const std::vector<Var>& vars) {
    ClauseSet cur = f;
    for (Var v : vars) cur = dp(cur, v);
    return cur;
}

ExchangeVerdict neighbour_exchange_allowed(const ClauseSet& f,
                                           const SingularTuple& t, int i,
                                           const DpOptions& opts) {
    auto valid = validate_tuple(f, t.variables, opts);
    if (!valid)
        throw PreconditionError("neighbour exchange: tuple is not singular");
    if (i < 1 || static_cast<std::size_t>(i) >= t.variables.size())
        throw PreconditionError("neighbour exchange: position out of range");
    const auto& degs = valid->degrees;
    std::size_t k = static_cast<std::size_t>(i - 1);

    ExchangeVerdict verdict;
    if (degs[k] >= 2)
        verdict.rule = ExchangeRule::first_degree_ge2;
    else if (degs[k + 1] == 1)
        verdict.rule = ExchangeRule::both_degree1;
    else
        verdict.rule = ExchangeRule::degree1_then_ge2;

    auto swapped = t.variables;
    std::swap(swapped[k], swapped[k + 1]);
    verdict.allowed = validate_tuple(f, swapped, DpOptions{}).has_value();

    if (opts.verify) {
        bool predicted;
        if (verdict.rule == ExchangeRule::degree1_then_ge2) {
            std::vector<Var> prefix(t.variables.begin(),
                                    t.variables.begin() + k);
            predicted = is_singular(dp_sequence(f, prefix), t.variables[k + 1]);
        } else {
            predicted = true;
        }
        if (predicted != verdict.allowed)
            throw PropertyError(
                "exchange rule prediction disagrees with revalidation");
    }
    return verdict;
}

bool swap_equality_check(const ClauseSet& f, const SingularTuple& t,
                         const std::vector<Var>& permuted,
                         const DpOptions& opts) {
    auto a = validate_tuple(f, t.variables, opts);
    if (!a) throw PreconditionError("swap equality: base tuple not singular");
    auto b = validate_tuple(f, permuted, DpOptions{});
    if (!b)
        throw PreconditionError("swap equality: permuted tuple not singular");
    auto sa = t.variables, sb = permuted;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb)
        throw PreconditionError("swap equality: variable sets differ");
    return dp_sequence(f, t.variables) == dp_sequence(f, permuted);
}

SingularTuple normalize_tuple_front1(const ClauseSet& f,
                                     const SingularTuple& t,
                                     const std::vector<Var>& chosen_front,
                                     const DpOptions& opts) {
    auto valid = validate_tuple(f, t.variables, opts);
    if (!valid)
        throw PreconditionError("front normalization: tuple is not singular");

    std::vector<Var> front_set = chosen_front;
    std::sort(front_set.begin(), front_set.end());
    {
        auto ones = one_singular_vars(f);
        std::vector<Var> expected;
        for (Var v : t.variables)
            if (std::binary_search(ones.begin(), ones.end(), v))
                expected.push_back(v);
        std::sort(expected.begin(), expected.end());
        if (front_set != expected)
            throw PreconditionError(
                "front normalization: chosen_front must be exactly the tuple "
                "variables that are 1-singular in the input");
    }

    std::vector<Var> seq = valid->variables;
    std::vector<int> degs = valid->degrees;
    auto revalidate = [&]() {
        auto rv = validate_tuple(f, seq, DpOptions{});
        if (!rv)
            throw PropertyError(
                "front normalization produced a non-singular tuple");
        degs = rv->degrees;
    };
    auto front_len = [&]() {
        std::size_t q = 0;
        while (q < degs.size() && degs[q] == 1) ++q;
        return q;
    };
    std::size_t guard = seq.size() * seq.size() * 4 + 16;
    auto spend = [&guard]() {
        if (guard-- == 0)
            throw PropertyError("front normalization did not converge");
    };

    // Pull every degree-1 step into the prefix: swapping a (≥2, 1) pair is
    // always degree-safe and leaves a 1 on the left.
    auto pull_ones_forward = [&]() {
        for (;;) {
            spend();
            std::size_t q = front_len();
            std::size_t k = q;
            while (k < degs.size() && degs[k] != 1) ++k;
            if (k == degs.size()) break;
            std::swap(seq[k - 1], seq[k]);
            revalidate();
        }
    };
    pull_ones_forward();

    // Move the chosen variables out of the tail. They can never sit on the
    // first tail position (their degree stays at most one after a 1-singular
    // prefix), so the swap below is always between two degree-≥2 steps.
    for (;;) {
        spend();
        std::size_t q = front_len();
        std::size_t j = q;
        while (j < seq.size() &&
               !std::binary_search(front_set.begin(), front_set.end(), seq[j]))
            ++j;
        if (j == seq.size()) break;
        if (j == q)
            throw PropertyError(
                "front normalization: chosen variable stranded at the tail "
                "boundary");
        std::swap(seq[j - 1], seq[j]);
        revalidate();
        pull_ones_forward();
    }

    // Order the prefix: chosen variables ascending, the remaining degree-1
    // steps in their current relative order. Within an all-degree-1 prefix
    // this reordering is reachable by degree-safe swaps, so the tail is
    // unaffected.
    std::size_t q = front_len();
    std::vector<Var> rest;
    for (std::size_t k = 0; k < q; ++k)
        if (!std::binary_search(front_set.begin(), front_set.end(), seq[k]))
            rest.push_back(seq[k]);
    std::vector<Var> reordered = front_set;
    reordered.insert(reordered.end(), rest.begin(), rest.end());
    std::copy(reordered.begin(), reordered.end(), seq.begin());
    revalidate();

    if (front_len() < q)
        throw PropertyError("front normalization shrank the degree-1 prefix");
    for (std::size_t k = 0; k < front_set.size(); ++k)
        if (seq[k] != front_set[k])
            throw PropertyError(
                "front normalization failed to place the chosen variables");

    return SingularTuple{seq, degs};
}

SingularityHypergraph singularity_hypergraph(const ClauseSet& f,
                                             const std::map<Var, bool>& choice,
                                             const DpOptions& opts) {
    if (opts.verify) require_mu(f, opts, "singularity_hypergraph");
    auto sing = singular_vars(f);
    for (const auto& [v, positive] : choice) {
        if (!std::binary_search(sing.begin(), sing.end(), v))
            throw PreconditionError(
                "orientation chosen for non-singular variable " +
                std::to_string(v));
        if (!singular_profile(f, v, positive))
            throw PreconditionError(
                "orientation for variable " + std::to_string(v) +
                " contradicts its singular literal");
    }

    SingularityHypergraph h;
    h.vertices = f.vars();
    std::vector<Lit> chosen;
    for (Var v : sing) {
        auto it = choice.find(v);
        auto p = (it != choice.end()) ? singular_profile(f, v, it->second)
                                      : singular_profile(f, v);
        chosen.push_back(p->singular_literal);
    }
    h.chosen_literals = chosen;
    for (const Clause& c : f) {
        std::vector<Var> edge;
        for (Lit x : chosen)
            if (c.contains(x)) edge.push_back(x.var());
        if (!edge.empty()) {
            std::sort(edge.begin(), edge.end());
            h.edges.push_back(std::move(edge));
        }
    }
    std::sort(h.edges.begin(), h.edges.end());
    return h;
}

std::vector<std::vector<Var>> minimal_transversals(
    const SingularityHypergraph& h) {
    std::vector<std::vector<Var>> out;
    std::vector<Var> picked;
    auto dfs = [&](auto&& self, std::size_t edge) -> void {
        if (edge == h.edges.size()) {
            auto t = picked;
            std::sort(t.begin(), t.end());
            out.push_back(std::move(t));
            return;
        }
        for (Var v : h.edges[edge]) {
            picked.push_back(v);
            self(self, edge + 1);
            picked.pop_back();
        }
    };
    dfs(dfs, 0);
    return out;
}

namespace {

void enumerate_tuples(const ClauseSet& cur, std::vector<Var>& path,
                      std::vector<int>& degs,
                      std::vector<SingularTuple>& out, std::size_t limit) {
    auto sing = singular_vars(cur);
    if (sing.empty()) {
        if (out.size() >= limit)
            throw BoundError("more than " + std::to_string(limit) +
                             " maximal singular tuples");
        out.push_back(SingularTuple{path, degs});
        return;
    }
    for (Var v : sing) {
        auto p = singular_profile(cur, v);
        path.push_back(v);
        degs.push_back(p->degree);
        enumerate_tuples(dp(cur, v), path, degs, out, limit);
        path.pop_back();
        degs.pop_back();
    }
}

}  // namespace

std::vector<SingularTuple> maximal_singular_tuples(const ClauseSet& f,
                                                   std::size_t limit,
                                                   const DpOptions& opts) {
    if (opts.verify) require_mu(f, opts, "maximal_singular_tuples");
    std::vector<SingularTuple> out;
    std::vector<Var> path;
    std::vector<int> degs;
    enumerate_tuples(f, path, degs, out, limit);
    return out;
}

SingularTuple random_maximal_tuple(const ClauseSet& f, Rng& rng,
                                   const DpOptions& opts) {
    if (opts.verify) require_mu(f, opts, "random_maximal_tuple");
    SingularTuple t;
    ClauseSet cur = f;
    for (;;) {
        auto sing = singular_vars(cur);
        if (sing.empty()) return t;
        Var v = sing[rng.below(sing.size())];
        auto p = singular_profile(cur, v);
        t.variables.push_back(v);
        t.degrees.push_back(p->degree);
        cur = dp(cur, v);
    }
}

int singularity_index(const ClauseSet& f, const DpOptions& opts) {
    if (opts.verify) require_mu(f, opts, "singularity_index");
    int len = 0;
    ClauseSet cur = f;
    for (;;) {
        auto sing = singular_vars(cur);
        if (sing.empty()) break;
        cur = dp(cur, sing.front());
        ++len;
    }
    if (opts.verify) {
        Rng rng(0x5eed5eed5eed5eedULL);
        for (int k = 0; k < 3; ++k) {
            auto t = random_maximal_tuple(f, rng);
            if (static_cast<int>(t.size()) != len)
                throw PropertyError(
                    "maximal singular tuples of different lengths");
        }
    }
    return len;
}

std::vector<SdpResult> sdp_set(const ClauseSet& f, const DpOptions& opts,
                               std::size_t state_limit) {
    if (opts.verify) require_mu(f, opts, "sdp_set");
    std::unordered_set<ClauseSet, ClauseSetHash> visited;
    std::vector<SdpResult> results;
    std::vector<TraceStep> path;
    const std::string initial_hash = dimacs_hash(f);

    auto dfs = [&](auto&& self, const ClauseSet& cur) -> void {
        if (visited.count(cur)) return;
        if (visited.size() >= state_limit)
            throw BoundError("singular reduction state space exceeds " +
                             std::to_string(state_limit) + " clause-sets");
        visited.insert(cur);
        auto sing = singular_vars(cur);
        if (sing.empty()) {
            results.push_back(
                SdpResult{cur, ReductionTrace{initial_hash, path,
                                              dimacs_hash(cur)}});
            return;
        }
        for (Var v : sing) {
            auto [next, step] = sdp_step(cur, v, DpOptions{});
            path.push_back(std::move(step));
            self(self, next);
            path.pop_back();
        }
    };
    dfs(dfs, f);

    std::sort(results.begin(), results.end(),
              [](const SdpResult& a, const SdpResult& b) {
                  return a.result < b.result;
              });
    if (opts.verify) {
        for (const SdpResult& r : results) {
            if (!classify_mu(r.result, opts.var_bound).is_mu())
                throw PropertyError("reduction end point is not minimally "
                                    "unsatisfiable");
            if (!singular_vars(r.result).empty())
                throw PropertyError("reduction end point is singular");
            if (r.result.deficiency() != f.deficiency())
                throw PropertyError("reduction end point changed deficiency");
        }
        for (std::size_t i = 1; i < results.size(); ++i)
            if (results[i].result.var_count() !=
                results[0].result.var_count())
                throw PropertyError(
                    "reduction end points differ in variable count");
    }
    return results;
}

PreprocessResult bounded_dp_preprocess(const ClauseSet& f, int threshold) {
    PreprocessResult out;
    ClauseSet cur = f;
    bool applied = true;
    while (applied) {
        applied = false;
        for (Var v : cur.vars()) {
            ClauseSet next = dp(cur, v);
            if (next.clause_count() <= cur.clause_count() + threshold) {
                out.steps.push_back(PreprocessStep{v, cur.clause_count(),
                                                   next.clause_count(),
                                                   dimacs_hash(next)});
                cur = std::move(next);
                applied = true;
                break;
            }
        }
    }
    ClauseSet reduced = subsumption_eliminate(cur);
    out.removed_by_subsumption = cur.clause_count() - reduced.clause_count();
    out.result = std::move(reduced);
    return out;
}

}  // namespace muforge
