#include <doctest.h>

#include <algorithm>
#include <map>

#include "helpers.hpp"
#include "muforge/classify.hpp"
#include "muforge/dimacs.hpp"
#include "muforge/sat.hpp"

using namespace muforge;
using namespace muforge::testing;

namespace {

ClauseSet d2() { return cs({{1, 2}, {-1, -2}, {-1, 2}, {1, -2}}); }

// One clause with the fresh variable, two with its complement; eliminating
// it yields d2 while the other elimination yields a relabeled copy.
ClauseSet two_results() {
    return cs({{3, 1}, {-3, 2}, {-3, -2}, {-1, 2}, {-1, -2}});
}

// Deficiency 2, every variable singular, none 1-singular; four end points.
ClauseSet all_singular_delta2() {
    return cs({{1, 2},
               {-1, 3, 5},
               {-1, 4, 6},
               {-2, 3, 5},
               {-2, 4, 6},
               {-3, 5},
               {-4, 6},
               {-5, -6}});
}

// v=1 is m-singular with unit main clause, w=2 is 1-singular.
ClauseSet unit_chain() { return cs({{1}, {-1, 2}, {-1, -2}}); }

// (v,w) has degree tuple (k,k) while (w,v) has (1,k); variables are v=1,
// w=2, x_i=2+i.
ClauseSet turnable(int k) {
    std::vector<Clause> clauses{Clause::of({1, 2})};
    std::vector<Lit> last;
    for (int i = 1; i <= k; ++i) {
        clauses.push_back(Clause({Lit::neg(1), Lit::pos(2 + i)}));
        last.push_back(Lit::neg(2 + i));
    }
    clauses.push_back(Clause::of({-2}));
    clauses.emplace_back(std::move(last));
    return ClauseSet(std::move(clauses));
}

}  // namespace

TEST_CASE("general DP-reduction adds exactly the one-clash resolvents") {
    ClauseSet f = two_results();
    CHECK(dp(f, 3) == d2());
    CHECK(dp(f, 1) == cs({{3, 2}, {3, -2}, {-3, 2}, {-3, -2}}));
    CHECK(dp(f, 1) != d2());

    // Eliminating a variable that clashes in two places drops the pair.
    CHECK(dp(cs({{1, 2}, {-1, -2}}), 1) == ClauseSet());
    CHECK(dp(cs({{1}, {-1}}), 1) == contradiction());
    CHECK(dp(d2(), 1) == cs({{2}, {-2}}));
}

TEST_CASE("singular profiles, orientation choice included") {
    ClauseSet f = unit_chain();
    CHECK(singular_vars(f) == std::vector<Var>{1, 2});
    CHECK(one_singular_vars(f) == std::vector<Var>{2});
    CHECK(non_one_singular_vars(f) == std::vector<Var>{1});

    std::optional<SingularProfile> a = singular_profile(f, 1);
    REQUIRE(a.has_value());
    CHECK(a->degree == 2);
    CHECK_FALSE(a->is_1_singular);
    CHECK(a->singular_literal == Lit::pos(1));
    CHECK(a->main == Clause::of({1}));
    REQUIRE(a->sides.size() == 2);
    CHECK(a->sides[0] == Clause::of({-1, -2}));
    CHECK(a->sides[1] == Clause::of({-1, 2}));

    std::optional<SingularProfile> b_pos = singular_profile(f, 2, true);
    std::optional<SingularProfile> b_neg = singular_profile(f, 2, false);
    REQUIRE(b_pos.has_value());
    REQUIRE(b_neg.has_value());
    CHECK(b_pos->is_1_singular);
    CHECK(b_pos->main == Clause::of({-1, 2}));
    CHECK(b_neg->main == Clause::of({-1, -2}));

    // Forcing an orientation on a variable that is not 1-singular only
    // works for the forced polarity.
    CHECK(singular_profile(f, 1, true).has_value());
    CHECK_FALSE(singular_profile(f, 1, false).has_value());
    CHECK_FALSE(singular_profile(d2(), 1).has_value());
    CHECK_FALSE(is_singular(d2(), 1));
}

TEST_CASE("structural conditions for a preserving elimination") {
    SingularReductionCheck good = check_singular_reduction(two_results(), 3);
    CHECK(good.all_pass());

    // A side clause clashing with the main clause outside the eliminated
    // variable breaks the single-clash condition.
    ClauseSet bad = cs({{3, 1, 2}, {-3, -2}, {-3, 1}, {-1}});
    SingularReductionCheck multi = check_singular_reduction(bad, 3);
    CHECK_FALSE(multi.single_clash);
    REQUIRE(multi.multi_clash_side.has_value());
    CHECK(multi.multi_clash_side->first == Clause::of({-3, -2}));
    CHECK(multi.multi_clash_side->second == 2);
}

TEST_CASE("all five singular tuples of the unit chain") {
    ClauseSet f = unit_chain();
    CHECK(count_singular_tuples(f) == 5);

    std::optional<SingularTuple> ab = validate_tuple(f, {1, 2});
    REQUIRE(ab.has_value());
    CHECK(ab->degrees == std::vector<int>{2, 1});

    std::optional<SingularTuple> ba = validate_tuple(f, {2, 1});
    REQUIRE(ba.has_value());
    CHECK(ba->degrees == std::vector<int>{1, 1});

    CHECK(validate_tuple(f, {}).has_value());
    CHECK_FALSE(validate_tuple(d2(), {1}).has_value());
    CHECK_FALSE(validate_tuple(f, {1, 1}).has_value());
}

TEST_CASE("degree tuples across swapped pairs, family one") {
    for (int k = 1; k <= 4; ++k) {
        ClauseSet f = turnable(k);
        REQUIRE(classify_mu(f).is_mu());
        CHECK(f.deficiency() == 1);

        std::optional<SingularTuple> vw = validate_tuple(f, {1, 2});
        REQUIRE(vw.has_value());
        CHECK(vw->degrees == std::vector<int>{k, k});

        std::optional<SingularTuple> wv = validate_tuple(f, {2, 1});
        REQUIRE(wv.has_value());
        CHECK(wv->degrees == std::vector<int>{1, k});
    }
}

TEST_CASE("degree tuples across swapped pairs, remaining families") {
    // {v,¬w}, {¬v,¬w,x_i}..., {¬x_1..¬x_k}, {w}: (v,w) gives (k,k) and
    // (w,v) gives (k+1,k).
    for (int k = 1; k <= 3; ++k) {
        std::vector<Clause> clauses{Clause::of({1, -2})};
        std::vector<Lit> last;
        for (int i = 1; i <= k; ++i) {
            clauses.push_back(
                Clause({Lit::neg(1), Lit::neg(2), Lit::pos(2 + i)}));
            last.push_back(Lit::neg(2 + i));
        }
        clauses.emplace_back(std::move(last));
        clauses.push_back(Clause::of({2}));
        ClauseSet f1{std::move(clauses)};
        REQUIRE(classify_mu(f1).is_mu());
        CHECK(validate_tuple(f1, {1, 2})->degrees == std::vector<int>{k, k});
        CHECK(validate_tuple(f1, {2, 1})->degrees ==
              std::vector<int>{k + 1, k});
    }

    // {v}, {¬v,w,y}, {¬v,¬y}, {¬w,x_i}..., {¬x_1..¬x_p}: (v,w) gives (2,p)
    // and (w,v) gives (p,p+1).
    for (int p = 1; p <= 3; ++p) {
        std::vector<Clause> clauses{Clause::of({1}), Clause::of({-1, 2, 3}),
                                    Clause::of({-1, -3})};
        std::vector<Lit> last;
        for (int i = 1; i <= p; ++i) {
            clauses.push_back(Clause({Lit::neg(2), Lit::pos(3 + i)}));
            last.push_back(Lit::neg(3 + i));
        }
        clauses.emplace_back(std::move(last));
        ClauseSet f2{std::move(clauses)};
        REQUIRE(classify_mu(f2).is_mu());
        CHECK(validate_tuple(f2, {1, 2})->degrees == std::vector<int>{2, p});
        CHECK(validate_tuple(f2, {2, 1})->degrees ==
              std::vector<int>{p, p + 1});
    }

    // {v}, {¬v,x_i}..., {w,¬x_1..¬x_k}, {¬w,¬x_1..¬x_k}: (v,w) gives (k,1)
    // and (w,v) gives (1,k).
    for (int k = 2; k <= 3; ++k) {
        std::vector<Clause> clauses{Clause::of({1})};
        std::vector<Lit> pos{Lit::pos(2)};
        std::vector<Lit> neg{Lit::neg(2)};
        for (int i = 1; i <= k; ++i) {
            clauses.push_back(Clause({Lit::neg(1), Lit::pos(2 + i)}));
            pos.push_back(Lit::neg(2 + i));
            neg.push_back(Lit::neg(2 + i));
        }
        clauses.emplace_back(std::move(pos));
        clauses.emplace_back(std::move(neg));
        ClauseSet f4{std::move(clauses)};
        REQUIRE(classify_mu(f4).is_mu());
        CHECK(validate_tuple(f4, {1, 2})->degrees == std::vector<int>{k, 1});
        CHECK(validate_tuple(f4, {2, 1})->degrees == std::vector<int>{1, k});
    }
}

TEST_CASE("a 1-singular step can make the swap impossible") {
    // {v,w}, {¬v,w}, {¬w,x_i}..., {¬x_1..¬x_k}: (v,w) is valid with (1,k),
    // while (w,v) is not singular at its second step.
    for (int k = 2; k <= 3; ++k) {
        std::vector<Clause> clauses{Clause::of({1, 2}), Clause::of({-1, 2})};
        std::vector<Lit> last;
        for (int i = 1; i <= k; ++i) {
            clauses.push_back(Clause({Lit::neg(2), Lit::pos(2 + i)}));
            last.push_back(Lit::neg(2 + i));
        }
        clauses.emplace_back(std::move(last));
        ClauseSet f{std::move(clauses)};
        REQUIRE(classify_mu(f).is_mu());

        std::optional<SingularTuple> vw = validate_tuple(f, {1, 2});
        REQUIRE(vw.has_value());
        CHECK(vw->degrees == std::vector<int>{1, k});
        CHECK_FALSE(validate_tuple(f, {2, 1}).has_value());

        DpOptions verifying;
        verifying.verify = true;
        ExchangeVerdict verdict = neighbour_exchange_allowed(f, *vw, 1,
                                                             verifying);
        CHECK_FALSE(verdict.allowed);
        CHECK(verdict.rule == ExchangeRule::degree1_then_ge2);
    }
}

TEST_CASE("admissible exchanges keep the end clause-set") {
    DpOptions verifying;
    verifying.verify = true;

    ClauseSet f = unit_chain();
    SingularTuple t = *validate_tuple(f, {1, 2});
    ExchangeVerdict ge2_first = neighbour_exchange_allowed(f, t, 1, verifying);
    CHECK(ge2_first.allowed);
    CHECK(ge2_first.rule == ExchangeRule::first_degree_ge2);
    CHECK(swap_equality_check(f, t, {2, 1}));

    for (int k = 1; k <= 3; ++k) {
        ClauseSet g = turnable(k);
        SingularTuple vw = *validate_tuple(g, {1, 2});
        ExchangeVerdict verdict = neighbour_exchange_allowed(g, vw, 1,
                                                             verifying);
        if (k == 1) CHECK(verdict.rule == ExchangeRule::both_degree1);
        CHECK(verdict.allowed);
        CHECK(swap_equality_check(g, vw, {2, 1}));
    }

    SingularTuple full = *validate_tuple(all_singular_delta2(),
                                         {1, 3, 4, 5});
    for (int i = 1; i <= 3; ++i) {
        std::vector<Var> perm{1, 3, 4, 5};
        std::swap(perm[static_cast<std::size_t>(i - 1)],
                  perm[static_cast<std::size_t>(i)]);
        CHECK(neighbour_exchange_allowed(all_singular_delta2(), full, i,
                                         verifying)
                  .allowed);
        CHECK(swap_equality_check(all_singular_delta2(), full, perm));
    }
}

TEST_CASE("tuple normalization moves the 1-singular prefix to the front") {
    ClauseSet f = unit_chain();
    SingularTuple t = *validate_tuple(f, {1, 2});
    SingularTuple normalized = normalize_tuple_front1(f, t, {2});
    CHECK(normalized.variables == std::vector<Var>{2, 1});
    CHECK(normalized.degrees == std::vector<int>{1, 1});
    CHECK_THROWS_AS(normalize_tuple_front1(f, t, {1}), PreconditionError);
}

TEST_CASE("step traces replay exactly") {
    DpOptions verifying;
    verifying.verify = true;

    ClauseSet f = all_singular_delta2();
    ReductionTrace trace;
    trace.initial_hash = dimacs_hash(f);
    ClauseSet cur = f;
    while (!singular_vars(cur).empty()) {
        Var v = singular_vars(cur).front();
        auto [next, step] = sdp_step(cur, v, verifying);
        CHECK(step.variable == v);
        CHECK(step.result_hash == dimacs_hash(next));
        trace.steps.push_back(step);
        cur = std::move(next);
    }
    trace.final_hash = dimacs_hash(cur);
    CHECK(trace.steps.size() == 4);
    CHECK(cur.var_count() == 2);

    CHECK(replay(f, trace) == cur);

    ReductionTrace tampered = trace;
    tampered.steps.back().degree += 1;
    CHECK_THROWS_AS(replay(f, tampered), PropertyError);

    CHECK_THROWS_AS(sdp_step(d2(), 1), PreconditionError);
}

TEST_CASE("degree ledger balances on every singular step") {
    Rng rng(0xabc123);
    GeneratorRecipe recipe;
    recipe.seed = 99;
    recipe.count = 8;
    recipe.delta = 2;
    recipe.steps = 6;
    for (const ClauseSet& f : generate_mu_corpus(recipe, {})) {
        ClauseSet cur = f;
        while (!singular_vars(cur).empty()) {
            Var v = singular_vars(cur)[rng.below(singular_vars(cur).size())];
            SingularProfile prof = *singular_profile(cur, v);
            ClauseSet after = dp(cur, v);
            CHECK_FALSE(check_degree_ledger(cur, after, prof).has_value());
            cur = after;
        }
    }

    // A deliberately wrong profile (side clause dropped) must be reported.
    ClauseSet f = two_results();
    SingularProfile wrong = *singular_profile(f, 3);
    wrong.sides.pop_back();
    CHECK(check_degree_ledger(f, dp(f, 3), wrong).has_value());
}

TEST_CASE("saturation commits unsatisfiability-preserving additions") {
    DpOptions verifying;
    verifying.verify = true;

    ClauseSet weakened = cs({{3},
                             {1, 2, -3},
                             {-1, -2, -3},
                             {-1, 2, -3},
                             {1, -2}});
    ClauseSet saturated = saturation(weakened, verifying);
    CHECK(is_saturated_mu(saturated).saturated);
    CHECK(saturated.deficiency() == weakened.deficiency());
    CHECK(saturated.var_count() == weakened.var_count());
    CHECK(saturated ==
          cs({{3}, {1, 2, -3}, {-1, -2, -3}, {-1, 2, -3}, {1, -2, -3}}));

    ClauseSet glued = all_singular_delta2();
    ClauseSet sat_glued = saturation(glued, verifying);
    CHECK(is_saturated_mu(sat_glued).saturated);
    CHECK(sat_glued.deficiency() == 2);

    SaturateResult step =
        saturate_step(weakened, Clause::of({1, -2}), Lit::neg(3));
    CHECK_FALSE(step.merged);
    CHECK(step.result.contains(Clause::of({1, -2, -3})));
}

TEST_CASE("partial saturation keeps the elimination result") {
    DpOptions verifying;
    verifying.verify = true;
    ClauseSet f = two_results();
    ClauseSet partial = partial_saturate_for(f, 3, verifying);
    CHECK(dp(partial, 3) == dp(f, 3));
    CHECK(partial.clause_count() == f.clause_count());
    // Main clause minus the singular literal is {1}; both sides grow it.
    CHECK(partial.contains(Clause::of({-3, 2, 1})));
    CHECK(partial.contains(Clause::of({-3, -2, 1})));
}

TEST_CASE("saturated elimination conditions") {
    ClauseSet uhit = cs({{3},
                         {1, 2, -3},
                         {-1, -2, -3},
                         {-1, 2, -3},
                         {1, -2, -3}});
    SaturatedReductionCheck pass = check_smu_singular(uhit, 3);
    CHECK(pass.all_pass());
    CHECK(pass.side_core == Clause());

    ClauseSet weakened = cs({{3},
                             {1, 2, -3},
                             {-1, -2, -3},
                             {-1, 2, -3},
                             {1, -2}});
    SaturatedReductionCheck fail = check_smu_singular(weakened, 3);
    CHECK_FALSE(fail.core_not_covered);
    REQUIRE(fail.covering_clause.has_value());
    CHECK(*fail.covering_clause == Clause::of({1, -2}));
}

TEST_CASE("singularity hypergraph respects the orientation choice") {
    ClauseSet f = cs({{1, 3}, {-1, 4}, {-1, -4}, {2, -3}, {-2, 4}, {-2, -4}});
    CHECK(singular_vars(f) == std::vector<Var>{1, 2, 3});
    CHECK(one_singular_vars(f) == std::vector<Var>{3});

    SingularityHypergraph pos = singularity_hypergraph(f, {{3, true}});
    CHECK(pos.vertices == f.vars());
    CHECK(pos.edges ==
          std::vector<std::vector<Var>>{{1, 3}, {2}});

    SingularityHypergraph neg = singularity_hypergraph(f, {{3, false}});
    CHECK(neg.edges ==
          std::vector<std::vector<Var>>{{1}, {2, 3}});

    CHECK_THROWS_AS(singularity_hypergraph(f, {{1, false}}),
                    PreconditionError);

    CHECK(minimal_transversals(pos) ==
          std::vector<std::vector<Var>>({{1, 2}, {2, 3}}));
}

TEST_CASE("maximal tuples, transversals and the index") {
    ClauseSet f = all_singular_delta2();
    CHECK(one_singular_vars(f).empty());

    SingularityHypergraph h = singularity_hypergraph(f);
    CHECK(h.edges == std::vector<std::vector<Var>>{{1, 2}, {3}, {4}, {5, 6}});

    std::vector<std::vector<Var>> trans = minimal_transversals(h);
    CHECK(trans == std::vector<std::vector<Var>>(
                       {{1, 3, 4, 5}, {1, 3, 4, 6}, {2, 3, 4, 5},
                        {2, 3, 4, 6}}));

    std::vector<SingularTuple> tuples = maximal_singular_tuples(f);
    CHECK(tuples.size() == 96);
    CHECK(singularity_index(f) == 4);
    for (const SingularTuple& t : tuples) {
        CHECK(t.size() == 4);
        std::vector<Var> sorted_vars = t.variables;
        std::sort(sorted_vars.begin(), sorted_vars.end());
        CHECK(std::find(trans.begin(), trans.end(), sorted_vars) !=
              trans.end());
    }

    CHECK_THROWS_AS(maximal_singular_tuples(f, 10), BoundError);

    Rng rng(0xfeed);
    for (int round = 0; round < 10; ++round)
        CHECK(random_maximal_tuple(f, rng).size() == 4);

    CHECK(singularity_index(two_results()) == 1);
    CHECK(singularity_index(d2()) == 0);
    CHECK(maximal_singular_tuples(d2()) ==
          std::vector<SingularTuple>{SingularTuple{}});
}

TEST_CASE("reachable end points with traces") {
    std::vector<SdpResult> ends = sdp_set(two_results());
    REQUIRE(ends.size() == 2);
    for (const SdpResult& e : ends) {
        CHECK(singular_vars(e.result).empty());
        CHECK(e.result.var_count() == 2);
        CHECK(replay(two_results(), e.trace) == e.result);
    }
    CHECK(ends[0].result != ends[1].result);

    std::vector<SdpResult> four = sdp_set(all_singular_delta2());
    CHECK(four.size() == 4);

    CHECK(sdp_set(d2()).size() == 1);
    CHECK(sdp_set(d2()).front().result == d2());
    CHECK_THROWS_AS(sdp_set(all_singular_delta2(), {}, 2), BoundError);
}

TEST_CASE("bounded elimination preprocessing") {
    // Unit chain collapses entirely under threshold 0.
    PreprocessResult collapsed = bounded_dp_preprocess(unit_chain(), 0);
    CHECK(collapsed.result == contradiction());
    CHECK_FALSE(collapsed.steps.empty());

    Rng rng(0x9f3a);
    for (int round = 0; round < 60; ++round) {
        ClauseSet f = random_clause_set(rng, 6, 9);
        PreprocessResult pre = bounded_dp_preprocess(f, 2);
        CHECK(brute_satisfiable(pre.result) == brute_satisfiable(f));
        for (const PreprocessStep& s : pre.steps)
            CHECK(s.clauses_after <= s.clauses_before + 2);
    }
}
