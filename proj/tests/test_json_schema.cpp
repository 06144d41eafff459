#include <doctest.h>

#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "muforge/classify.hpp"
#include "muforge/dimacs.hpp"
#include "muforge/reports.hpp"
#include "muforge/sat.hpp"

using namespace muforge;
using muforge::testing::cs;

namespace {

// Minimal JSON-schema checker covering the keywords the shipped schemas
// use: type (single or list), enum, minimum/maximum, required, properties,
// additionalProperties as a boolean, items as a single schema, and
// minItems/maxItems. Returns the path of the first violation.
std::optional<std::string> validate(const Json& schema, const Json& value,
                                    const std::string& path = "$") {
    if (schema.contains("enum")) {
        bool hit = false;
        for (const Json& option : schema.at("enum"))
            if (option == value) hit = true;
        if (!hit) return path + ": not one of the allowed values";
    }

    if (schema.contains("type")) {
        auto matches = [&value](const std::string& t) {
            if (t == "integer") return value.is_number_integer();
            if (t == "number") return value.is_number();
            if (t == "string") return value.is_string();
            if (t == "boolean") return value.is_boolean();
            if (t == "object") return value.is_object();
            if (t == "array") return value.is_array();
            if (t == "null") return value.is_null();
            return false;
        };
        const Json& ty = schema.at("type");
        bool ok = false;
        if (ty.is_string()) {
            ok = matches(ty.get<std::string>());
        } else {
            for (const Json& t : ty)
                if (matches(t.get<std::string>())) ok = true;
        }
        if (!ok) return path + ": wrong type";
    }

    if (value.is_number()) {
        double x = value.get<double>();
        if (schema.contains("minimum") && x < schema.at("minimum").get<double>())
            return path + ": below minimum";
        if (schema.contains("maximum") && x > schema.at("maximum").get<double>())
            return path + ": above maximum";
    }

    if (value.is_object()) {
        if (schema.contains("required"))
            for (const Json& key : schema.at("required"))
                if (!value.contains(key.get<std::string>()))
                    return path + ": missing required key " +
                           key.get<std::string>();
        const Json* props =
            schema.contains("properties") ? &schema.at("properties") : nullptr;
        for (const auto& [key, sub] : value.items()) {
            if (props && props->contains(key)) {
                auto err = validate(props->at(key), sub, path + "." + key);
                if (err) return err;
            } else if (schema.contains("additionalProperties") &&
                       !schema.at("additionalProperties").get<bool>()) {
                return path + ": unexpected key " + key;
            }
        }
    }

    if (value.is_array()) {
        if (schema.contains("minItems") &&
            value.size() < schema.at("minItems").get<std::size_t>())
            return path + ": too few items";
        if (schema.contains("maxItems") &&
            value.size() > schema.at("maxItems").get<std::size_t>())
            return path + ": too many items";
        if (schema.contains("items")) {
            const Json& item_schema = schema.at("items");
            for (std::size_t i = 0; i < value.size(); ++i) {
                auto err = validate(item_schema, value[i],
                                    path + "[" + std::to_string(i) + "]");
                if (err) return err;
            }
        }
    }

    return std::nullopt;
}

Json load_schema(const std::string& name) {
    std::string file = std::string(MUFORGE_SCHEMA_DIR) + "/" + name;
    std::ifstream in(file);
    REQUIRE_MESSAGE(in.good(), "cannot open ", file);
    std::ostringstream buf;
    buf << in.rdbuf();
    return Json::parse(buf.str());
}

void check_valid(const Json& schema, const Json& doc) {
    auto err = validate(schema, doc);
    CHECK_MESSAGE(!err.has_value(), err.value_or(""));
}

ClauseSet two_results() {
    return cs({{3, 1}, {-3, 2}, {-3, -2}, {-1, 2}, {-1, -2}});
}

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

}  // namespace

TEST_CASE("the schema checker itself flags violations") {
    Json schema = Json::parse(R"({
        "type": "object",
        "additionalProperties": false,
        "required": ["a"],
        "properties": {
            "a": {"type": "integer", "minimum": 1},
            "b": {"enum": ["x", "y"]},
            "c": {"type": "array", "minItems": 2, "items": {"type": "string"}}
        }
    })");
    CHECK_FALSE(validate(schema, Json{{"a", 1}}).has_value());
    CHECK(validate(schema, Json::object()).has_value());
    CHECK(validate(schema, Json{{"a", 0}}).has_value());
    CHECK(validate(schema, Json{{"a", "1"}}).has_value());
    CHECK(validate(schema, Json{{"a", 1}, {"z", 2}}).has_value());
    CHECK(validate(schema, Json{{"a", 1}, {"b", "z"}}).has_value());
    CHECK(validate(schema, Json{{"a", 1}, {"c", Json::array({"s"})}})
              .has_value());
    CHECK(validate(schema, Json{{"a", 1}, {"c", Json::array({"s", 3})}})
              .has_value());
}

TEST_CASE("analysis reports match their schema") {
    Json schema = load_schema("analysis.schema.json");

    check_valid(schema, to_json(build_analysis(all_singular_delta2())));
    check_valid(schema, to_json(build_analysis(two_results())));
    check_valid(schema, to_json(build_analysis(ClauseSet())));
    check_valid(schema, to_json(build_analysis(cs({{}}))));
    check_valid(schema, to_json(build_analysis(cs({{1, 2}, {-1, 2}}))));

    // Orientation choices show up in the reported singular literal.
    ClauseSet chain = cs({{1}, {-1, 2}, {-1, -2}});
    AnalysisReport rep = build_analysis(chain, {}, {{2, false}});
    Json j = to_json(rep);
    check_valid(schema, j);
    bool found = false;
    for (const Json& p : j.at("singularVariables"))
        if (p.at("variable") == 2) {
            CHECK(p.at("singularLiteral") == -2);
            found = true;
        }
    CHECK(found);
    CHECK_THROWS_AS(build_analysis(two_results(), {}, {{1, false}}),
                    PreconditionError);

    Json mutated = to_json(build_analysis(two_results()));
    mutated.erase("hash");
    CHECK(validate(schema, mutated).has_value());
    mutated = to_json(build_analysis(two_results()));
    mutated["flags"]["mu"] = 3;
    CHECK(validate(schema, mutated).has_value());
    mutated = to_json(build_analysis(two_results()));
    mutated["extra"] = 1;
    CHECK(validate(schema, mutated).has_value());
}

TEST_CASE("confluence reports match their schema") {
    Json schema = load_schema("confluence.schema.json");

    Json mod_iso = to_json(classify_confluence(two_results()));
    check_valid(schema, mod_iso);
    CHECK(mod_iso.contains("witnesses"));
    CHECK_FALSE(mod_iso.contains("counterexamplePair"));

    ClauseSet divergent = cs({{6, 1, 2},
                              {-6, 3},
                              {-6, 1, -3},
                              {1, -2, 3},
                              {1, -2, -3},
                              {-1, 4, 5},
                              {-1, 4, -5},
                              {-1, -4, 5},
                              {-1, -4, -5}});
    Json div = to_json(classify_confluence(divergent));
    check_valid(schema, div);
    CHECK(div.contains("counterexamplePair"));
    CHECK(div.at("classification") == "divergent");

    Json flat = to_json(classify_confluence(cs({{}})));
    check_valid(schema, flat);
    CHECK(flat.at("classification") == "confluent");

    Json mutated = mod_iso;
    mutated["classification"] = "sometimes";
    CHECK(validate(schema, mutated).has_value());
}

TEST_CASE("reduction traces match their schema and round-trip") {
    Json schema = load_schema("trace.schema.json");

    ClauseSet f = all_singular_delta2();
    ReductionTrace trace;
    trace.initial_hash = dimacs_hash(f);
    ClauseSet cur = f;
    while (!singular_vars(cur).empty()) {
        Var v = singular_vars(cur).front();
        auto [next, step] = sdp_step(cur, v);
        trace.steps.push_back(step);
        cur = std::move(next);
    }
    trace.final_hash = dimacs_hash(cur);
    REQUIRE(trace.steps.size() == 4);

    Json j = to_json(trace);
    check_valid(schema, j);

    ReductionTrace back = trace_from_json(j);
    CHECK(back.initial_hash == trace.initial_hash);
    CHECK(back.final_hash == trace.final_hash);
    REQUIRE(back.steps.size() == trace.steps.size());
    for (std::size_t i = 0; i < back.steps.size(); ++i) {
        CHECK(back.steps[i].variable == trace.steps[i].variable);
        CHECK(back.steps[i].degree == trace.steps[i].degree);
        CHECK(back.steps[i].main == trace.steps[i].main);
        CHECK(back.steps[i].sides == trace.steps[i].sides);
        CHECK(back.steps[i].result_hash == trace.steps[i].result_hash);
    }
    CHECK(replay(f, back) == cur);

    Json mutated = j;
    mutated["steps"][0].erase("resultHash");
    CHECK(validate(schema, mutated).has_value());
}

TEST_CASE("preprocessing reports match their schema") {
    Json schema = load_schema("preprocess.schema.json");
    ClauseSet f = two_results();
    PreprocessResult pre = bounded_dp_preprocess(f, 4);
    Json j = to_json(pre);
    check_valid(schema, j);
    check_valid(schema, to_json(bounded_dp_preprocess(ClauseSet(), 3)));
}

TEST_CASE("recipes and manifests match their schemas") {
    Json recipe_schema = load_schema("recipe.schema.json");
    Json manifest_schema = load_schema("manifest.schema.json");

    GeneratorRecipe recipe;
    recipe.seed = 11;
    recipe.count = 4;
    recipe.delta = 2;
    recipe.steps = 4;
    Json rj = to_json(recipe);
    check_valid(recipe_schema, rj);

    GeneratorRecipe back = recipe_from_json(rj);
    CHECK(back.seed == recipe.seed);
    CHECK(back.count == recipe.count);
    CHECK(back.delta == recipe.delta);
    CHECK(back.steps == recipe.steps);
    CHECK(back.saturate == recipe.saturate);

    // steps and saturate are optional on input and default sensibly.
    Json minimal = Json{{"seed", 1}, {"count", 2}, {"delta", 1}};
    check_valid(recipe_schema, minimal);
    GeneratorRecipe defaults = recipe_from_json(minimal);
    CHECK(defaults.steps == 6);
    CHECK_FALSE(defaults.saturate);
    CHECK(validate(recipe_schema, Json{{"seed", 1}, {"count", 2}, {"delta", 4}})
              .has_value());

    std::vector<ManifestEntry> entries;
    int idx = 0;
    for (const ClauseSet& f : generate_mu_corpus(recipe)) {
        ManifestEntry e;
        e.file_name = "inst_00" + std::to_string(idx++) + ".cnf";
        e.n = f.var_count();
        e.c = f.clause_count();
        e.deficiency = f.deficiency();
        e.mu = true;
        e.classification =
            to_string(classify_confluence(f).classification);
        entries.push_back(std::move(e));
    }
    Json manifest = corpus_manifest(recipe, entries);
    check_valid(manifest_schema, manifest);
    CHECK(manifest.at("instances").size() == 4);

    Json mutated = manifest;
    mutated["instances"][0]["classification"] = "unknown";
    CHECK(validate(manifest_schema, mutated).has_value());
}
