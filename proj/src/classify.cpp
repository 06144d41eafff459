#include "muforge/classify.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "muforge/sat.hpp"

namespace muforge {

namespace {

ClauseSet shift_vars(const ClauseSet& f, Var offset) {
    std::vector<Clause> out;
    out.reserve(f.clauses().size());
    for (const Clause& c : f) {
        std::vector<Lit> lits;
        lits.reserve(c.size());
        for (Lit x : c)
            lits.push_back(x.positive() ? Lit::pos(x.var() + offset)
                                        : Lit::neg(x.var() + offset));
        out.emplace_back(std::move(lits));
    }
    return ClauseSet(std::move(out));
}

Var fresh_var(const ClauseSet& f) {
    return f.vars().empty() ? 1 : f.vars().back() + 1;
}

ClauseSet reduce_nonsingular_greedy(const ClauseSet& f) {
    ClauseSet cur = f;
    for (;;) {
        std::vector<Var> sing = singular_vars(cur);
        if (sing.empty()) return cur;
        cur = dp(cur, sing.front());
    }
}

ClauseSet reduce_nonsingular_random(const ClauseSet& f, Rng& rng) {
    ClauseSet cur = f;
    for (;;) {
        std::vector<Var> sing = singular_vars(cur);
        if (sing.empty()) return cur;
        cur = dp(cur, sing[rng.below(sing.size())]);
    }
}

ClauseSet random_extension(const ClauseSet& f, Rng& rng,
                           const DpOptions& opts) {
    const Var v = fresh_var(f);
    const int c = f.clause_count();
    int m = 1 + static_cast<int>(rng.below(3));
    if (m > c) m = c;

    std::vector<int> picked;
    while (static_cast<int>(picked.size()) < m) {
        int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(c)));
        if (std::find(picked.begin(), picked.end(), k) == picked.end())
            picked.push_back(k);
    }
    std::sort(picked.begin(), picked.end());

    Clause common = f.clauses()[picked.front()];
    for (int k : picked) common = common.intersection(f.clauses()[k]);

    std::vector<Lit> kept;
    for (Lit x : common)
        if (rng.flip()) kept.push_back(x);
    Clause main_part{std::vector<Lit>(kept)};

    std::vector<Clause> side_parts;
    side_parts.reserve(picked.size());
    for (int k : picked) {
        const Clause& ci = f.clauses()[k];
        std::vector<Lit> lits;
        for (Lit x : ci.difference(main_part)) lits.push_back(x);
        for (Lit x : main_part)
            if (rng.flip()) lits.push_back(x);
        side_parts.emplace_back(std::move(lits));
    }
    return inverse_sdp_extend(f, main_part, side_parts, v, opts);
}

ClauseSet seed_instance(int delta, Rng& rng, const DpOptions& opts) {
    switch (delta) {
        case 1:
            return contradiction();
        case 2:
            return gen_dn(2 + static_cast<int>(rng.below(3)));
        case 3: {
            int a = 2 + static_cast<int>(rng.below(2));
            int b = 2 + static_cast<int>(rng.below(2));
            ClauseSet f1 = gen_dn(a);
            ClauseSet f2 = shift_vars(gen_dn(b), a);
            return full_glue(f1, f2, a + b + 1, opts);
        }
        default:
            throw PreconditionError("corpus deficiency must be 1, 2 or 3");
    }
}

}  // namespace

ClauseSet gen_dn(int n) {
    if (n < 2)
        throw PreconditionError(
            "the deficiency-2 family needs at least 2 variables");
    std::vector<Clause> clauses;
    clauses.reserve(static_cast<std::size_t>(n) + 2);
    std::vector<Lit> pos, neg;
    for (Var v = 1; v <= n; ++v) {
        pos.push_back(Lit::pos(v));
        neg.push_back(Lit::neg(v));
    }
    clauses.emplace_back(std::move(pos));
    clauses.emplace_back(std::move(neg));
    for (Var v = 1; v <= n; ++v)
        clauses.push_back(
            Clause({Lit::neg(v), Lit::pos(v % n + 1)}));
    return ClauseSet(std::move(clauses));
}

DnWitness dn_witness(const ClauseSet& f, const DpOptions& opts,
                     int iso_bound) {
    if (!classify_mu(f, opts.var_bound).is_mu())
        throw PreconditionError(
            "family witness needs a minimally unsatisfiable input");
    if (f.deficiency() != 2)
        throw PreconditionError("family witness needs deficiency 2");
    if (!singular_vars(f).empty())
        throw PreconditionError("family witness needs a nonsingular input");

    DnWitness out;
    out.n = f.var_count();
    std::optional<IsoWitness> w = are_isomorphic(f, gen_dn(out.n), iso_bound);
    if (!w)
        throw PropertyError(
            "nonsingular deficiency-2 input is not isomorphic to the "
            "canonical family member of its size");
    out.map = std::move(*w);
    return out;
}

int nonsingularity_type(const ClauseSet& f, const DpOptions& opts,
                        int iso_bound) {
    if (!classify_mu(f, opts.var_bound).is_mu())
        throw PreconditionError(
            "nonsingularity type needs a minimally unsatisfiable input");
    if (f.deficiency() != 2)
        throw PreconditionError("nonsingularity type needs deficiency 2");

    ClauseSet first = reduce_nonsingular_greedy(f);
    Rng rng(0x5eed5eed5eed5eedULL);
    ClauseSet second = reduce_nonsingular_random(f, rng);
    if (second.var_count() != first.var_count())
        throw PropertyError(
            "two complete singular reductions disagree on variable count");

    if (opts.verify) {
        dn_witness(first, opts, iso_bound);
        dn_witness(second, opts, iso_bound);
        if (!are_isomorphic(first, second, iso_bound))
            throw PropertyError(
                "two complete singular reductions are not isomorphic");
    }
    return first.var_count();
}

ClauseSet inverse_sdp_extend(const ClauseSet& f, const Clause& main_part,
                             const std::vector<Clause>& side_parts,
                             Var new_var, const DpOptions& opts) {
    if (new_var <= 0)
        throw PreconditionError("variable index must be positive");
    if (f.mentions(new_var))
        throw PreconditionError("extension variable already occurs");
    if (side_parts.empty())
        throw PreconditionError("extension needs at least one side part");

    std::vector<Clause> replaced;
    replaced.reserve(side_parts.size());
    for (const Clause& p : side_parts) {
        Clause ci = main_part.union_with(p);
        if (!f.contains(ci))
            throw PreconditionError(
                "main and side parts must recombine to clauses of the input");
        if (std::find(replaced.begin(), replaced.end(), ci) != replaced.end())
            throw PreconditionError(
                "side parts must recombine to pairwise distinct clauses");
        replaced.push_back(std::move(ci));
    }

    ClauseSet result = f;
    for (const Clause& ci : replaced) result = result.without(ci);
    result = result.with(main_part.with(Lit::pos(new_var)));
    for (const Clause& p : side_parts)
        result = result.with(p.with(Lit::neg(new_var)));

    if (result.clause_count() !=
        f.clause_count() - static_cast<int>(replaced.size()) + 1 +
            static_cast<int>(side_parts.size()))
        throw PropertyError("extension clause count is off");
    if (!(dp(result, new_var) == f))
        throw PropertyError("extension does not reduce back to the input");
    if (opts.verify && !classify_mu(result, opts.var_bound).is_mu())
        throw PropertyError("extension lost minimal unsatisfiability");
    return result;
}

ClauseSet full_glue(const ClauseSet& f1, const ClauseSet& f2, Var w,
                    const DpOptions& opts) {
    if (w <= 0) throw PreconditionError("variable index must be positive");
    if (f1.mentions(w) || f2.mentions(w))
        throw PreconditionError("gluing variable already occurs");
    for (Var v : f1.vars())
        if (f2.mentions(v))
            throw PreconditionError("gluing needs variable-disjoint inputs");

    std::vector<Clause> clauses;
    clauses.reserve(f1.clauses().size() + f2.clauses().size());
    for (const Clause& c : f1) clauses.push_back(c.with(Lit::pos(w)));
    for (const Clause& d : f2) clauses.push_back(d.with(Lit::neg(w)));
    ClauseSet result{std::move(clauses)};

    if (result.deficiency() != f1.deficiency() + f2.deficiency() - 1)
        throw PropertyError("gluing deficiency is off");
    if (opts.verify && !classify_mu(result, opts.var_bound).is_mu())
        throw PropertyError("gluing lost minimal unsatisfiability");
    return result;
}

std::vector<ClauseSet> generate_mu_corpus(const GeneratorRecipe& recipe,
                                          const DpOptions& opts) {
    if (recipe.count < 0) throw PreconditionError("corpus count is negative");
    if (recipe.steps < 0) throw PreconditionError("corpus steps is negative");
    if (recipe.delta < 1 || recipe.delta > 3)
        throw PreconditionError("corpus deficiency must be 1, 2 or 3");

    std::vector<ClauseSet> out;
    out.reserve(static_cast<std::size_t>(recipe.count));
    for (int i = 0; i < recipe.count; ++i) {
        Rng rng(recipe.seed + static_cast<std::uint64_t>(i) *
                                  0x9e3779b97f4a7c15ULL);
        ClauseSet f = seed_instance(recipe.delta, rng, opts);
        for (int s = 0; s < recipe.steps; ++s)
            f = random_extension(f, rng, opts);
        if (recipe.saturate) f = saturation(f, opts);
        if (opts.verify) {
            if (!classify_mu(f, opts.var_bound).is_mu())
                throw PropertyError("corpus instance is not minimally "
                                    "unsatisfiable");
            if (f.deficiency() != recipe.delta)
                throw PropertyError("corpus instance has the wrong deficiency");
        }
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace muforge
