#include "muforge/suites.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <string>
#include <utility>

#include "muforge/sat.hpp"

namespace muforge {

namespace {

void fail(PropertyResult& r, const std::string& msg) {
    ++r.violations;
    if (r.notes.size() < 8) r.notes.push_back(msg);
}

void expect(PropertyResult& r, bool cond, const std::string& msg) {
    ++r.checked;
    if (!cond) fail(r, msg);
}

std::string show(const ClauseSet& f) {
    std::ostringstream os;
    os << f;
    return os.str();
}

std::vector<ClauseSet> corpus(int delta, int count, int steps,
                              std::uint64_t seed, bool saturate,
                              const DpOptions& opts) {
    GeneratorRecipe r;
    r.seed = seed;
    r.count = count;
    r.delta = delta;
    r.steps = steps;
    r.saturate = saturate;
    return generate_mu_corpus(r, opts);
}

ClauseSet from_codes(std::initializer_list<std::initializer_list<int>> rows) {
    std::vector<Clause> cs;
    cs.reserve(rows.size());
    for (const auto& row : rows) cs.push_back(Clause::of(row));
    return ClauseSet(std::move(cs));
}

// Pinned small instances covering the interesting classifications: one
// with two reduction results that are isomorphic but unequal, one genuinely
// divergent, and a deficiency-2 one with every variable singular and four
// reduction results.
ClauseSet pinned_mod_iso() {
    return from_codes({{3, 1}, {-3, 2}, {-3, -2}, {-1, 2}, {-1, -2}});
}

ClauseSet pinned_divergent() {
    return from_codes({{6, 1, 2},
                       {-6, 3},
                       {-6, 1, -3},
                       {1, -2, 3},
                       {1, -2, -3},
                       {-1, 4, 5},
                       {-1, 4, -5},
                       {-1, -4, 5},
                       {-1, -4, -5}});
}

ClauseSet pinned_delta2() {
    return from_codes({{1, 2},
                       {-1, 3, 5},
                       {-1, 4, 6},
                       {-2, 3, 5},
                       {-2, 4, 6},
                       {-3, 5},
                       {-4, 6},
                       {-5, -6}});
}

ClauseSet random_relabeling(const ClauseSet& f, Rng& rng) {
    std::vector<Var> perm = f.vars();
    for (std::size_t i = perm.size(); i > 1; --i)
        std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<std::pair<Var, Lit>> images;
    images.reserve(perm.size());
    const std::vector<Var>& src = f.vars();
    for (std::size_t i = 0; i < src.size(); ++i)
        images.emplace_back(
            src[i], rng.flip() ? Lit::neg(perm[i]) : Lit::pos(perm[i]));
    return IsoWitness(std::move(images)).apply(f);
}

// Arbitrary clause-sets (satisfiable or not) for the general commutation
// checks; every variable enters each clause positively, negatively or not
// at all with equal weight for absence.
ClauseSet random_clause_set(Rng& rng, int max_vars, int max_clauses) {
    int n = 2 + static_cast<int>(rng.below(static_cast<std::size_t>(max_vars - 1)));
    int c = 2 + static_cast<int>(rng.below(static_cast<std::size_t>(max_clauses - 1)));
    std::vector<Clause> clauses;
    clauses.reserve(static_cast<std::size_t>(c));
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

// Unsatisfiable hitting clause-sets by repeated splitting from {⊥}:
// replacing C by C∪{v}, C∪{¬v} for v outside C keeps the family hitting
// with clause weights summing to exactly 1.
ClauseSet random_uhit(Rng& rng, int vars, int extra_splits) {
    std::vector<Clause> clauses{Clause()};
    for (Var v = 1; v <= vars; ++v) {
        std::size_t k = rng.below(clauses.size());
        Clause c = clauses[k];
        clauses.erase(clauses.begin() + static_cast<std::ptrdiff_t>(k));
        clauses.push_back(c.with(Lit::pos(v)));
        clauses.push_back(c.with(Lit::neg(v)));
    }
    for (int s = 0; s < extra_splits; ++s) {
        std::size_t k = rng.below(clauses.size());
        Clause c = clauses[k];
        std::vector<Var> missing;
        for (Var v = 1; v <= vars; ++v)
            if (!c.mentions(v)) missing.push_back(v);
        if (missing.empty()) continue;
        Var v = missing[rng.below(missing.size())];
        clauses.erase(clauses.begin() + static_cast<std::ptrdiff_t>(k));
        clauses.push_back(c.with(Lit::pos(v)));
        clauses.push_back(c.with(Lit::neg(v)));
    }
    return ClauseSet(std::move(clauses));
}

std::vector<Clause> clause_universe_3vars() {
    std::vector<Clause> out;
    out.reserve(27);
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            for (int c = -1; c <= 1; ++c) {
                std::vector<Lit> lits;
                if (a != 0) lits.push_back(Lit(a * 1));
                if (b != 0) lits.push_back(Lit(b * 2));
                if (c != 0) lits.push_back(Lit(c * 3));
                out.emplace_back(std::move(lits));
            }
    return out;
}

void enumerate_hitting(const std::vector<Clause>& universe, std::size_t start,
                       std::vector<Clause>& cur,
                       const std::function<void(const std::vector<Clause>&)>&
                           visit) {
    visit(cur);
    for (std::size_t i = start; i < universe.size(); ++i) {
        bool clashes_all = true;
        for (const Clause& c : cur)
            if (c.clash_count(universe[i]) == 0) {
                clashes_all = false;
                break;
            }
        if (!clashes_all) continue;
        cur.push_back(universe[i]);
        enumerate_hitting(universe, i + 1, cur, visit);
        cur.pop_back();
    }
}

long long factorial(int k) {
    long long out = 1;
    for (int i = 2; i <= k; ++i) out *= i;
    return out;
}

}  // namespace

std::vector<PropertyResult> run_degree_suite(const DpOptions& opts) {
    PropertyResult ledger{"degree-ledger"};
    PropertyResult created{"singular-creation-destruction"};
    PropertyResult monotone{"saturated-degree-monotone"};

    std::vector<ClauseSet> pool;
    for (ClauseSet& f : corpus(1, 100, 12, 1101, false, opts))
        pool.push_back(std::move(f));
    for (ClauseSet& f : corpus(2, 90, 8, 1102, false, opts))
        pool.push_back(std::move(f));
    for (ClauseSet& f : corpus(3, 80, 6, 1103, false, opts))
        pool.push_back(std::move(f));

    for (const ClauseSet& f : pool) {
        ClauseSet cur = f;
        for (;;) {
            std::vector<Var> sing = singular_vars(cur);
            if (sing.empty()) break;
            for (Var v : sing) {
                SingularProfile prof = *singular_profile(cur, v);
                ClauseSet after = dp(cur, v);
                std::optional<std::string> mismatch =
                    check_degree_ledger(cur, after, prof);
                expect(ledger, !mismatch, mismatch ? *mismatch : "");

                std::vector<Var> after_sing = singular_vars(after);
                if (prof.is_1_singular) {
                    bool kept = true;
                    for (Var w : sing)
                        if (w != v &&
                            !std::binary_search(after_sing.begin(),
                                                after_sing.end(), w))
                            kept = false;
                    expect(created, kept,
                           "a degree-1 step destroyed a singular variable in " +
                               show(cur));
                } else {
                    bool no_new = true;
                    for (Var w : after_sing)
                        if (!std::binary_search(sing.begin(), sing.end(), w))
                            no_new = false;
                    expect(created, no_new,
                           "a higher-degree step created a singular variable "
                           "in " +
                               show(cur));
                }
            }
            cur = dp(cur, sing.front());
        }
    }

    std::vector<ClauseSet> saturated_pool;
    for (ClauseSet& f : corpus(2, 12, 5, 1104, true, opts))
        saturated_pool.push_back(std::move(f));
    for (ClauseSet& f : corpus(3, 10, 4, 1105, true, opts))
        saturated_pool.push_back(std::move(f));

    for (const ClauseSet& f : saturated_pool) {
        ClauseSet cur = f;
        for (;;) {
            std::vector<Var> sing = singular_vars(cur);
            if (sing.empty()) break;
            for (Var v : sing) {
                ClauseSet after = dp(cur, v);
                bool never_up = true;
                for (Var w : after.vars())
                    if (after.ldeg(Lit::pos(w)) > cur.ldeg(Lit::pos(w)) ||
                        after.ldeg(Lit::neg(w)) > cur.ldeg(Lit::neg(w)))
                        never_up = false;
                expect(monotone, never_up,
                       "a saturated step raised a literal degree in " +
                           show(cur));
            }
            cur = dp(cur, sing.front());
        }
    }

    return {ledger, created, monotone};
}

std::vector<PropertyResult> run_exchange_suite(const DpOptions& opts) {
    PropertyResult rules{"exchange-rule-agreement"};
    PropertyResult swapeq{"exchange-swap-equality"};
    PropertyResult comm{"dp-commutation-subsumption"};
    PropertyResult mueq{"dp-permutation-mu-equality"};

    DpOptions verifying = opts;
    verifying.verify = true;

    std::vector<ClauseSet> pool;
    for (ClauseSet& f : corpus(1, 25, 8, 2201, false, opts))
        pool.push_back(std::move(f));
    for (ClauseSet& f : corpus(2, 25, 7, 2202, false, opts))
        pool.push_back(std::move(f));
    for (ClauseSet& f : corpus(3, 20, 6, 2203, false, opts))
        pool.push_back(std::move(f));

    Rng rng(0xe8c4a9);
    for (const ClauseSet& f : pool) {
        for (int round = 0; round < 3; ++round) {
            SingularTuple t = random_maximal_tuple(f, rng, opts);
            if (t.size() < 2) break;
            for (int i = 1; i < static_cast<int>(t.size()); ++i) {
                try {
                    ExchangeVerdict verdict =
                        neighbour_exchange_allowed(f, t, i, verifying);
                    ++rules.checked;
                    if (verdict.allowed) {
                        std::vector<Var> perm = t.variables;
                        std::swap(perm[static_cast<std::size_t>(i - 1)],
                                  perm[static_cast<std::size_t>(i)]);
                        expect(swapeq, swap_equality_check(f, t, perm, opts),
                               "admissible swap changed the end set of " +
                                   show(f));
                    }
                } catch (const Error& e) {
                    ++rules.checked;
                    fail(rules, e.what());
                }
            }
        }
    }

    // Raw sequences on arbitrary inputs can square the clause count per
    // step; rounds that blow past the cap are skipped, not counted.
    auto capped_sequence =
        [](const ClauseSet& f,
           const std::vector<Var>& vars) -> std::optional<ClauseSet> {
        ClauseSet cur = f;
        for (Var v : vars) {
            cur = dp(cur, v);
            if (cur.clause_count() > 2000) return std::nullopt;
        }
        return cur;
    };

    Rng crng(0x5eedc0de);
    for (int round = 0; round < 200; ++round) {
        ClauseSet f = random_clause_set(crng, 8, 12);
        if (f.var_count() < 2) continue;
        std::vector<Var> order = f.vars();
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[crng.below(i)]);
        order.resize(1 + crng.below(order.size()));
        std::vector<Var> perm = order;
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[crng.below(i)]);

        try {
            std::optional<ClauseSet> raw = capped_sequence(f, order);
            std::optional<ClauseSet> raw_perm = capped_sequence(f, perm);
            std::optional<ClauseSet> raw_pre =
                capped_sequence(subsumption_eliminate(f), order);
            if (!raw || !raw_perm || !raw_pre) continue;
            ClauseSet plain = subsumption_eliminate(*raw);
            ClauseSet permuted = subsumption_eliminate(*raw_perm);
            ClauseSet pre = subsumption_eliminate(*raw_pre);
            ClauseSet inter = f;
            for (Var v : order) inter = subsumption_eliminate(dp(inter, v));
            bool agree = plain == permuted && plain == pre && plain == inter;
            expect(comm, agree,
                   "reduction orders disagree modulo subsumption on " +
                       show(f));
        } catch (const Error& e) {
            ++comm.checked;
            fail(comm, e.what());
        }
    }

    Rng mrng(0x8a8a17);
    std::vector<ClauseSet> mu_pool;
    for (ClauseSet& f : corpus(1, 20, 7, 2204, false, opts))
        mu_pool.push_back(std::move(f));
    for (ClauseSet& f : corpus(2, 20, 6, 2205, false, opts))
        mu_pool.push_back(std::move(f));
    for (const ClauseSet& f : mu_pool) {
        SingularTuple t = random_maximal_tuple(f, mrng, opts);
        if (t.size() < 2) continue;
        std::vector<Var> perm = t.variables;
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[mrng.below(i)]);
        try {
            ClauseSet end1 = dp_sequence(f, t.variables);
            ClauseSet end2 = f;
            bool overflow = false;
            for (Var v : perm) {
                end2 = dp(end2, v);
                if (end2.clause_count() > 2000) {
                    overflow = true;
                    break;
                }
            }
            if (overflow) continue;
            bool end2_mu = classify_mu(end2, opts.var_bound).is_mu();
            expect(mueq, (end1 == end2) == end2_mu,
                   "permuted reduction equality disagrees with minimal "
                   "unsatisfiability on " +
                       show(f));
        } catch (const Error& e) {
            ++mueq.checked;
            fail(mueq, e.what());
        }
    }

    return {rules, swapeq, comm, mueq};
}

std::vector<PropertyResult> run_index_suite(const DpOptions& opts) {
    PropertyResult lengths{"index-random-tuples"};
    PropertyResult structure{"index-enumeration-structure"};

    std::vector<ClauseSet> pool;
    for (ClauseSet& f : corpus(1, 70, 8, 3301, false, opts))
        pool.push_back(std::move(f));
    for (ClauseSet& f : corpus(2, 70, 7, 3302, false, opts))
        pool.push_back(std::move(f));
    for (ClauseSet& f : corpus(3, 60, 6, 3303, false, opts))
        pool.push_back(std::move(f));
    pool.push_back(pinned_mod_iso());
    pool.push_back(pinned_divergent());
    pool.push_back(pinned_delta2());

    std::uint64_t salt = 0;
    for (const ClauseSet& f : pool) {
        try {
            int ind = singularity_index(f, opts);
            Rng rng(0xbeef0000 + salt++);
            for (int k = 0; k < 20; ++k) {
                SingularTuple t = random_maximal_tuple(f, rng, opts);
                expect(lengths, static_cast<int>(t.size()) == ind,
                       "maximal reduction sequences of different lengths on " +
                           show(f));
            }

            if (f.var_count() <= 8) {
                std::vector<SingularTuple> all;
                try {
                    all = maximal_singular_tuples(f, 5000, opts);
                } catch (const BoundError&) {
                    continue;  // too many tuples to enumerate; sampled above
                }
                bool equal_len = true;
                for (const SingularTuple& t : all)
                    if (static_cast<int>(t.size()) != ind) equal_len = false;
                expect(structure, equal_len,
                       "enumerated maximal sequence of deviant length on " +
                           show(f));

                if (one_singular_vars(f).empty()) {
                    SingularityHypergraph h =
                        singularity_hypergraph(f, {}, opts);
                    std::vector<std::vector<Var>> trans =
                        minimal_transversals(h);
                    expect(structure,
                           static_cast<long long>(all.size()) ==
                               static_cast<long long>(trans.size()) *
                                   factorial(ind),
                           "enumerated sequences do not match transversal "
                           "orderings on " +
                               show(f));
                    bool all_members = true;
                    for (const SingularTuple& t : all) {
                        std::vector<Var> vs = t.variables;
                        std::sort(vs.begin(), vs.end());
                        if (std::find(trans.begin(), trans.end(), vs) ==
                            trans.end())
                            all_members = false;
                    }
                    expect(structure, all_members,
                           "an enumerated sequence is not a minimal "
                           "transversal on " +
                               show(f));
                }
            }
        } catch (const Error& e) {
            ++lengths.checked;
            fail(lengths, e.what());
        }
    }

    return {lengths, structure};
}

std::vector<PropertyResult> run_confluence_suite(const DpOptions& opts) {
    PropertyResult smuconf{"smu-confluent"};
    PropertyResult evsat{"evsat-confluent-mod-iso"};

    std::vector<ClauseSet> saturated_pool;
    for (ClauseSet& f : corpus(1, 40, 6, 4401, true, opts))
        saturated_pool.push_back(std::move(f));
    for (ClauseSet& f : corpus(2, 35, 5, 4402, true, opts))
        saturated_pool.push_back(std::move(f));
    for (ClauseSet& f : corpus(3, 30, 4, 4403, true, opts))
        saturated_pool.push_back(std::move(f));

    for (const ClauseSet& f : saturated_pool) {
        try {
            ConfluenceReport rep = classify_confluence(f, opts);
            expect(smuconf, rep.classification == Confluence::confluent,
                   "a saturated input did not reduce confluently: " + show(f));
            if (rep.eventually_saturated)
                expect(evsat,
                       rep.classification != Confluence::divergent,
                       "an eventually saturated input diverged: " + show(f));
        } catch (const Error& e) {
            ++smuconf.checked;
            fail(smuconf, e.what());
        }
    }

    std::vector<ClauseSet> mixed_pool;
    for (ClauseSet& f : corpus(1, 15, 7, 4404, false, opts))
        mixed_pool.push_back(std::move(f));
    for (ClauseSet& f : corpus(2, 15, 6, 4405, false, opts))
        mixed_pool.push_back(std::move(f));
    for (ClauseSet& f : corpus(3, 10, 5, 4406, false, opts))
        mixed_pool.push_back(std::move(f));
    mixed_pool.push_back(pinned_mod_iso());
    mixed_pool.push_back(pinned_divergent());
    mixed_pool.push_back(pinned_delta2());

    for (const ClauseSet& f : mixed_pool) {
        try {
            ConfluenceReport rep = classify_confluence(f, opts);
            if (rep.eventually_saturated)
                expect(evsat,
                       rep.classification != Confluence::divergent,
                       "an eventually saturated input diverged: " + show(f));
        } catch (const Error& e) {
            ++evsat.checked;
            fail(evsat, e.what());
        }
    }

    return {smuconf, evsat};
}

std::vector<PropertyResult> run_deficiency2_suite(const DpOptions& opts) {
    PropertyResult family{"deficiency2-family"};
    PropertyResult relabel{"deficiency2-relabel-invariance"};

    DpOptions verifying = opts;
    verifying.verify = true;

    std::vector<ClauseSet> pool;
    for (ClauseSet& f : corpus(2, 100, 6, 5501, false, opts))
        pool.push_back(std::move(f));
    for (int n = 2; n <= 6; ++n) pool.push_back(gen_dn(n));
    pool.push_back(pinned_delta2());

    for (const ClauseSet& f : pool) {
        try {
            int type = nonsingularity_type(f, verifying);
            ConfluenceReport rep = classify_confluence(f, opts);
            bool all_family = true;
            for (const ClauseSet& r : rep.results)
                if (dn_witness(r, opts).n != type) all_family = false;
            expect(family, all_family,
                   "a reduction result leaves the canonical family on " +
                       show(f));
            expect(family,
                   rep.nonsingularity_type && *rep.nonsingularity_type == type,
                   "classification type disagrees on " + show(f));
        } catch (const Error& e) {
            ++family.checked;
            fail(family, e.what());
        }
    }

    Rng rng(0x715ab31);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        try {
            int base = nonsingularity_type(pool[i], opts);
            for (int k = 0; k < 10; ++k) {
                ClauseSet g = random_relabeling(pool[i], rng);
                expect(relabel, nonsingularity_type(g, opts) == base,
                       "type changed under relabeling of " + show(pool[i]));
            }
        } catch (const Error& e) {
            ++relabel.checked;
            fail(relabel, e.what());
        }
    }

    return {family, relabel};
}

std::vector<PropertyResult> run_hitting_suite(const DpOptions& opts) {
    PropertyResult exact{"hitting-exhaustive"};
    PropertyResult closure{"hitting-dp-closure"};
    PropertyResult uhitsmu{"uhit-saturated"};

    std::vector<Clause> universe = clause_universe_3vars();
    std::vector<Clause> cur;
    enumerate_hitting(
        universe, 0, cur, [&](const std::vector<Clause>& clauses) {
            ClauseSet f{std::vector<Clause>(clauses)};
            bool sat = is_satisfiable(f, opts.var_bound).has_value();
            bool u = is_uhit(f);
            expect(exact, u == !sat,
                   "weight criterion disagrees with the oracle on " + show(f));
            if (u)
                expect(uhitsmu,
                       classify_mu(f, opts.var_bound).is_mu() &&
                           is_saturated_mu(f, opts.var_bound).saturated,
                       "an unsatisfiable hitting set is not saturated "
                       "minimally unsatisfiable: " +
                           show(f));
            for (Var v : f.vars()) {
                ClauseSet d = dp(f, v);
                expect(closure, is_hitting(d) && (!u || is_uhit(d)),
                       "hitting structure lost under reduction of " + show(f));
            }
        });

    Rng rng(0x417711);
    for (int round = 0; round < 30; ++round) {
        int vars = 4 + static_cast<int>(rng.below(5));
        int extra = static_cast<int>(rng.below(6));
        ClauseSet f = random_uhit(rng, vars, extra);
        expect(uhitsmu,
               is_uhit(f) && classify_mu(f, opts.var_bound).is_mu() &&
                   is_saturated_mu(f, opts.var_bound).saturated,
               "a generated splitting family fails the saturated check: " +
                   show(f));
        Var v = f.vars()[rng.below(f.vars().size())];
        expect(closure, is_uhit(dp(f, v)),
               "splitting family lost hitting structure under reduction: " +
                   show(f));

        ClauseSet g = f.without(f.clauses()[rng.below(f.clauses().size())]);
        bool g_sat = is_satisfiable(g, opts.var_bound).has_value();
        expect(exact, is_hitting(g) && !is_uhit(g) && g_sat,
               "removing a clause did not leave a satisfiable hitting set: " +
                   show(f));
        Var w = g.vars().empty() ? 0 : g.vars()[rng.below(g.vars().size())];
        if (w != 0)
            expect(closure, is_hitting(dp(g, w)),
                   "a satisfiable hitting set lost the property under "
                   "reduction: " +
                       show(g));
    }

    return {exact, closure, uhitsmu};
}

SuiteReport run_all_suites(const DpOptions& opts) {
    SuiteReport report;
    auto absorb = [&report](std::vector<PropertyResult> rs) {
        for (PropertyResult& r : rs) report.properties.push_back(std::move(r));
    };
    absorb(run_degree_suite(opts));
    absorb(run_exchange_suite(opts));
    absorb(run_index_suite(opts));
    absorb(run_confluence_suite(opts));
    absorb(run_deficiency2_suite(opts));
    absorb(run_hitting_suite(opts));
    return report;
}

}  // namespace muforge
