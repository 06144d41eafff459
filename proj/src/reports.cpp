#include "muforge/reports.hpp"

#include <utility>

#include "muforge/dimacs.hpp"
#include "muforge/sat.hpp"

namespace muforge {

namespace {

Clause clause_from_json(const Json& j) {
    std::vector<Lit> lits;
    lits.reserve(j.size());
    for (const Json& code : j) lits.push_back(Lit(code.get<int>()));
    return Clause(std::move(lits));
}

}  // namespace

Json to_json(const Clause& c) {
    Json arr = Json::array();
    for (Lit x : c) arr.push_back(x.code());
    return arr;
}

Json to_json(const ClauseSet& f) {
    Json arr = Json::array();
    for (const Clause& c : f) arr.push_back(to_json(c));
    return arr;
}

Json to_json(const IsoWitness& w) {
    Json arr = Json::array();
    for (const auto& [v, img] : w.positive_images())
        arr.push_back(Json{{"variable", v}, {"image", img.code()}});
    return arr;
}

Json to_json(const TraceStep& s) {
    Json sides = Json::array();
    for (const Clause& d : s.sides) sides.push_back(to_json(d));
    return Json{{"variable", s.variable},
                {"degree", s.degree},
                {"mainClause", to_json(s.main)},
                {"sideClauses", std::move(sides)},
                {"resultHash", s.result_hash}};
}

Json to_json(const ReductionTrace& t) {
    Json steps = Json::array();
    for (const TraceStep& s : t.steps) steps.push_back(to_json(s));
    return Json{{"initialHash", t.initial_hash},
                {"steps", std::move(steps)},
                {"finalHash", t.final_hash}};
}

ReductionTrace trace_from_json(const Json& j) {
    ReductionTrace t;
    t.initial_hash = j.at("initialHash").get<std::string>();
    t.final_hash = j.at("finalHash").get<std::string>();
    for (const Json& js : j.at("steps")) {
        TraceStep s;
        s.variable = js.at("variable").get<Var>();
        s.degree = js.at("degree").get<int>();
        s.main = clause_from_json(js.at("mainClause"));
        for (const Json& jd : js.at("sideClauses"))
            s.sides.push_back(clause_from_json(jd));
        s.result_hash = js.at("resultHash").get<std::string>();
        t.steps.push_back(std::move(s));
    }
    return t;
}

Json to_json(const ConfluenceReport& rep) {
    Json j{{"classification", to_string(rep.classification)},
           {"resultCount", static_cast<int>(rep.results.size())},
           {"nAfterReduction", rep.n_after},
           {"eventuallySaturated", rep.eventually_saturated}};
    Json results = Json::array();
    for (const ClauseSet& r : rep.results) results.push_back(to_json(r));
    j["results"] = std::move(results);
    if (rep.classification == Confluence::confluent_mod_iso) {
        Json ws = Json::array();
        for (const IsoWitness& w : rep.witnesses) ws.push_back(to_json(w));
        j["witnesses"] = std::move(ws);
    }
    if (rep.non_iso_pair)
        j["counterexamplePair"] =
            Json::array({rep.non_iso_pair->first, rep.non_iso_pair->second});
    j["nonSingularityType"] =
        rep.nonsingularity_type ? Json(*rep.nonsingularity_type) : Json();
    return j;
}

Json to_json(const GeneratorRecipe& r) {
    return Json{{"seed", r.seed},
                {"count", r.count},
                {"delta", r.delta},
                {"steps", r.steps},
                {"saturate", r.saturate}};
}

GeneratorRecipe recipe_from_json(const Json& j) {
    GeneratorRecipe r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.count = j.at("count").get<int>();
    r.delta = j.at("delta").get<int>();
    if (j.contains("steps")) r.steps = j.at("steps").get<int>();
    if (j.contains("saturate")) r.saturate = j.at("saturate").get<bool>();
    return r;
}

Json to_json(const PreprocessResult& r) {
    Json steps = Json::array();
    for (const PreprocessStep& s : r.steps)
        steps.push_back(Json{{"variable", s.variable},
                             {"clausesBefore", s.clauses_before},
                             {"clausesAfter", s.clauses_after},
                             {"resultHash", s.result_hash}});
    return Json{{"steps", std::move(steps)},
                {"removedBySubsumption", r.removed_by_subsumption}};
}

AnalysisReport build_analysis(const ClauseSet& f, const DpOptions& opts,
                              const std::map<Var, bool>& choice) {
    AnalysisReport rep;
    rep.n = f.var_count();
    rep.c = f.clause_count();
    rep.deficiency = f.deficiency();
    rep.hash = dimacs_hash(f);
    rep.sat = is_satisfiable(f, opts.var_bound).has_value();
    rep.mu = classify_mu(f, opts.var_bound).is_mu();
    if (rep.mu) {
        rep.smu = is_saturated_mu(f, opts.var_bound).saturated;
        rep.singularity_index = singularity_index(f, opts);
    }
    rep.hitting = is_hitting(f);
    rep.uhit = is_uhit(f);
    rep.renamable_horn = is_renamable_horn(f).has_value();

    for (Var v : singular_vars(f)) {
        auto it = choice.find(v);
        if (it == choice.end()) {
            rep.singular.push_back(*singular_profile(f, v));
        } else {
            std::optional<SingularProfile> p =
                singular_profile(f, v, it->second);
            if (!p)
                throw PreconditionError(
                    "chosen orientation is not singular for variable " +
                    std::to_string(v));
            rep.singular.push_back(std::move(*p));
        }
    }
    rep.nonsingular = rep.singular.empty();
    rep.one_singular = one_singular_vars(f);

    ClauseSet u1 = r1(f);
    rep.r1_clauses = u1.clause_count();
    rep.r1_contradiction = u1.has_empty_clause();
    ClauseSet u2 = r2(f);
    rep.r2_clauses = u2.clause_count();
    rep.r2_contradiction = u2.has_empty_clause();
    return rep;
}

Json to_json(const AnalysisReport& rep) {
    Json singular = Json::array();
    for (const SingularProfile& p : rep.singular)
        singular.push_back(Json{{"variable", p.variable},
                                {"degree", p.degree},
                                {"singularLiteral", p.singular_literal.code()},
                                {"is1Singular", p.is_1_singular}});
    return Json{
        {"n", rep.n},
        {"c", rep.c},
        {"deficiency", rep.deficiency},
        {"hash", rep.hash},
        {"flags",
         Json{{"sat", rep.sat},
              {"mu", rep.mu},
              {"smu", rep.smu},
              {"hitting", rep.hitting},
              {"uhit", rep.uhit},
              {"renamableHorn", rep.renamable_horn},
              {"nonsingular", rep.nonsingular}}},
        {"singularVariables", std::move(singular)},
        {"oneSingularVariables", rep.one_singular},
        {"singularityIndex",
         rep.singularity_index ? Json(*rep.singularity_index) : Json()},
        {"r1",
         Json{{"clauseCount", rep.r1_clauses},
              {"contradiction", rep.r1_contradiction}}},
        {"r2",
         Json{{"clauseCount", rep.r2_clauses},
              {"contradiction", rep.r2_contradiction}}}};
}

Json corpus_manifest(const GeneratorRecipe& recipe,
                     const std::vector<ManifestEntry>& entries) {
    Json list = Json::array();
    for (const ManifestEntry& e : entries)
        list.push_back(Json{{"fileName", e.file_name},
                            {"n", e.n},
                            {"c", e.c},
                            {"deficiency", e.deficiency},
                            {"mu", e.mu},
                            {"classification", e.classification}});
    return Json{{"recipe", to_json(recipe)}, {"instances", std::move(list)}};
}

}  // namespace muforge
