#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "muforge/classify.hpp"
#include "muforge/iso.hpp"

namespace muforge {

using Json = nlohmann::json;

// Clauses serialize as arrays of literal codes in canonical order,
// clause-sets as arrays of clauses; all other JSON shapes are stable and
// documented by the schema files shipped with the project.
Json to_json(const Clause& c);
Json to_json(const ClauseSet& f);
Json to_json(const IsoWitness& w);
Json to_json(const TraceStep& s);
Json to_json(const ReductionTrace& t);
Json to_json(const ConfluenceReport& rep);
Json to_json(const GeneratorRecipe& r);
Json to_json(const PreprocessResult& r);

ReductionTrace trace_from_json(const Json& j);
GeneratorRecipe recipe_from_json(const Json& j);

// Everything the analyze command reports about one clause-set. Saturation
// and the singularity index are only defined for minimally unsatisfiable
// inputs; the orientation choice overrides the singular-literal polarity of
// selected 1-singular variables.
struct AnalysisReport {
    int n = 0;
    int c = 0;
    int deficiency = 0;
    std::string hash;
    bool sat = false;
    bool mu = false;
    bool smu = false;
    bool hitting = false;
    bool uhit = false;
    bool renamable_horn = false;
    bool nonsingular = false;
    std::vector<SingularProfile> singular;
    std::vector<Var> one_singular;
    std::optional<int> singularity_index;
    int r1_clauses = 0;
    bool r1_contradiction = false;
    int r2_clauses = 0;
    bool r2_contradiction = false;
};

AnalysisReport build_analysis(const ClauseSet& f, const DpOptions& opts = {},
                              const std::map<Var, bool>& choice = {});
Json to_json(const AnalysisReport& rep);

struct ManifestEntry {
    std::string file_name;
    int n = 0;
    int c = 0;
    int deficiency = 0;
    bool mu = false;
    std::string classification;
};

Json corpus_manifest(const GeneratorRecipe& recipe,
                     const std::vector<ManifestEntry>& entries);

}  // namespace muforge
