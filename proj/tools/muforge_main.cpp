#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "muforge/dimacs.hpp"
#include "muforge/reports.hpp"
#include "muforge/suites.hpp"

namespace fs = std::filesystem;
using namespace muforge;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << text;
    if (!out) throw ParseError("write failed: " + path);
}

ClauseSet load(const std::string& path) { return parse_dimacs(read_file(path)); }

int resolve_bound(std::optional<int> flag_bound) {
    if (flag_bound) return *flag_bound;
    if (const char* env = std::getenv("MU_FORGE_BOUND")) {
        try {
            return std::stoi(env);
        } catch (const std::exception&) {
            throw ParseError(std::string("MU_FORGE_BOUND is not an integer: ") +
                             env);
        }
    }
    return kDefaultVarBound;
}

std::map<Var, bool> parse_choices(const std::vector<std::string>& raw) {
    std::map<Var, bool> out;
    for (const std::string& s : raw) {
        std::size_t colon = s.find(':');
        std::string pol = s.substr(0, colon == std::string::npos ? s.size()
                                                                 : colon);
        if (colon == std::string::npos || (pol != "pos" && pol != "neg"))
            throw ParseError("choice must look like pos:<var> or neg:<var>, "
                             "got: " +
                             s);
        int v = 0;
        try {
            v = std::stoi(s.substr(colon + 1));
        } catch (const std::exception&) {
            v = 0;
        }
        if (v <= 0)
            throw ParseError("choice variable must be positive, got: " + s);
        out[v] = pol == "pos";
    }
    return out;
}

std::vector<Var> parse_var_list(const std::string& s) {
    std::vector<Var> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        int v = 0;
        try {
            v = std::stoi(item);
        } catch (const std::exception&) {
            v = 0;
        }
        if (v <= 0)
            throw ParseError("variable list must hold positive integers, "
                             "got: " +
                             item);
        out.push_back(v);
    }
    if (out.empty()) throw ParseError("empty variable list");
    return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

std::string render_analysis(const AnalysisReport& rep) {
    std::ostringstream os;
    os << "n=" << rep.n << " c=" << rep.c << " deficiency=" << rep.deficiency
       << " hash=" << rep.hash << '\n';
    os << "flags: sat=" << (rep.sat ? "yes" : "no")
       << " mu=" << (rep.mu ? "yes" : "no")
       << " smu=" << (rep.smu ? "yes" : "no")
       << " hitting=" << (rep.hitting ? "yes" : "no")
       << " uhit=" << (rep.uhit ? "yes" : "no")
       << " renamable-horn=" << (rep.renamable_horn ? "yes" : "no") << '\n';
    if (rep.nonsingular) {
        os << "singular variables: none\n";
    } else {
        os << "singular variables:";
        for (const SingularProfile& p : rep.singular)
            os << ' ' << p.variable << "(m=" << p.degree
               << (p.is_1_singular ? ",1-singular" : "") << ")";
        os << '\n';
    }
    if (rep.singularity_index)
        os << "singularity index: " << *rep.singularity_index << '\n';
    os << "r1: " << rep.r1_clauses << " clauses"
       << (rep.r1_contradiction ? " (contradiction)" : "") << '\n';
    os << "r2: " << rep.r2_clauses << " clauses"
       << (rep.r2_contradiction ? " (contradiction)" : "") << '\n';
    return os.str();
}

Json suite_json(const std::vector<PropertyResult>& results) {
    Json arr = Json::array();
    for (const PropertyResult& p : results) {
        Json notes = Json::array();
        for (const std::string& n : p.notes) notes.push_back(n);
        arr.push_back(Json{{"property", p.name},
                           {"checked", p.checked},
                           {"violations", p.violations},
                           {"notes", notes}});
    }
    return arr;
}

std::string render_suite(const std::vector<PropertyResult>& results) {
    std::ostringstream os;
    for (const PropertyResult& p : results) {
        os << (p.ok() ? "PASS" : "FAIL") << ' ' << p.name
           << " checked=" << p.checked;
        if (!p.ok()) os << " violations=" << p.violations;
        os << '\n';
        for (const std::string& n : p.notes) os << "  note: " << n << '\n';
    }
    return os.str();
}

// Per-file checks for a user-supplied corpus directory: each suite name maps
// to the property that makes sense for one standalone instance.
std::vector<PropertyResult> check_corpus_dir(const std::string& suite,
                                             const std::string& dir,
                                             const DpOptions& opts) {
    if (!fs::is_directory(dir))
        throw PreconditionError("corpus directory not found: " + dir);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".cnf")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw PreconditionError("corpus directory holds no .cnf files: " +
                                dir);

    PropertyResult r{"corpus-" + suite};
    for (const std::string& path : files) {
        ClauseSet f = load(path);
        try {
            if (suite == "degrees") {
                ClauseSet cur = f;
                std::vector<Var> sing = singular_vars(cur);
                while (!sing.empty()) {
                    Var v = sing.front();
                    SingularProfile prof = *singular_profile(cur, v);
                    ClauseSet after = dp(cur, v);
                    std::optional<std::string> bad =
                        check_degree_ledger(cur, after, prof);
                    ++r.checked;
                    if (bad) {
                        ++r.violations;
                        if (r.notes.size() < 8)
                            r.notes.push_back(path + ": " + *bad);
                    }
                    cur = after;
                    sing = singular_vars(cur);
                }
            } else if (suite == "exchange") {
                Rng rng(0xc0ffee);
                SingularTuple t = random_maximal_tuple(f, rng, opts);
                for (int i = 1; i < static_cast<int>(t.size()); ++i) {
                    ++r.checked;
                    try {
                        ExchangeVerdict verdict =
                            neighbour_exchange_allowed(f, t, i, opts);
                        if (verdict.allowed) {
                            std::vector<Var> perm = t.variables;
                            std::swap(perm[static_cast<std::size_t>(i - 1)],
                                      perm[static_cast<std::size_t>(i)]);
                            if (!swap_equality_check(f, t, perm, opts)) {
                                ++r.violations;
                                if (r.notes.size() < 8)
                                    r.notes.push_back(
                                        path +
                                        ": admissible swap changed the end "
                                        "set");
                            }
                        }
                    } catch (const Error& e) {
                        ++r.violations;
                        if (r.notes.size() < 8)
                            r.notes.push_back(path + ": " + e.what());
                    }
                }
            } else if (suite == "index") {
                Rng rng(0xc0ffee);
                int ind = singularity_index(f, opts);
                for (int k = 0; k < 10; ++k) {
                    SingularTuple t = random_maximal_tuple(f, rng, opts);
                    ++r.checked;
                    if (static_cast<int>(t.size()) != ind) {
                        ++r.violations;
                        if (r.notes.size() < 8)
                            r.notes.push_back(path +
                                              ": maximal tuple length differs");
                    }
                }
            } else if (suite == "confluence-smu") {
                if (classify_mu(f, opts.var_bound).is_mu() &&
                    is_saturated_mu(f, opts.var_bound).saturated) {
                    ConfluenceReport rep = classify_confluence(f, opts);
                    ++r.checked;
                    if (rep.classification != Confluence::confluent) {
                        ++r.violations;
                        if (r.notes.size() < 8)
                            r.notes.push_back(path +
                                              ": saturated but not confluent");
                    }
                }
            } else if (suite == "mu2") {
                if (classify_mu(f, opts.var_bound).is_mu() &&
                    f.deficiency() == 2) {
                    DpOptions verifying = opts;
                    verifying.verify = true;
                    nonsingularity_type(f, verifying);
                    ++r.checked;
                }
            } else if (suite == "hitting") {
                if (is_hitting(f)) {
                    ++r.checked;
                    bool sat = is_satisfiable(f, opts.var_bound).has_value();
                    if (is_uhit(f) != !sat) {
                        ++r.violations;
                        if (r.notes.size() < 8)
                            r.notes.push_back(
                                path + ": weight criterion mismatch");
                    }
                }
            }
        } catch (const Error& e) {
            ++r.checked;
            ++r.violations;
            if (r.notes.size() < 8)
                r.notes.push_back(path + ": " + e.what());
        }
    }
    return {r};
}

int cmd_analyze(const std::string& file, bool json, bool verify,
                std::optional<int> bound,
                const std::vector<std::string>& choices,
                const std::string& out_path) {
    DpOptions opts;
    opts.verify = verify;
    opts.var_bound = resolve_bound(bound);
    AnalysisReport rep = build_analysis(load(file), opts,
                                        parse_choices(choices));
    emit(json ? dump(to_json(rep)) : render_analysis(rep), out_path);
    return 0;
}

int cmd_reduce(const std::string& mode, const std::string& file,
               const std::string& vars_csv, int var, int threshold,
               bool verify, std::optional<int> bound,
               const std::string& out_path, const std::string& trace_path) {
    DpOptions opts;
    opts.verify = verify;
    opts.var_bound = resolve_bound(bound);
    ClauseSet f = load(file);

    ClauseSet result;
    Json trace_json;
    if (mode == "sdp-greedy" || mode == "sdp-tuple") {
        std::vector<Var> order;
        if (mode == "sdp-greedy") {
            ClauseSet cur = f;
            std::vector<Var> sing = singular_vars(cur);
            while (!sing.empty()) {
                order.push_back(sing.front());
                cur = dp(cur, sing.front());
                sing = singular_vars(cur);
            }
        } else {
            order = parse_var_list(vars_csv);
        }
        ReductionTrace trace;
        trace.initial_hash = dimacs_hash(f);
        ClauseSet cur = f;
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (!is_singular(cur, order[i]))
                throw PreconditionError(
                    "variable " + std::to_string(order[i]) +
                    " is not singular at step " + std::to_string(i + 1));
            auto [next, step] = sdp_step(cur, order[i], opts);
            trace.steps.push_back(step);
            cur = std::move(next);
        }
        trace.final_hash = dimacs_hash(cur);
        result = std::move(cur);
        trace_json = to_json(trace);
    } else if (mode == "dp") {
        if (var <= 0)
            throw ParseError("mode dp needs --var <positive variable>");
        result = dp(f, var);
        ReductionTrace trace;
        trace.initial_hash = dimacs_hash(f);
        trace.final_hash = dimacs_hash(result);
        trace_json = to_json(trace);
    } else if (mode == "r1" || mode == "r2") {
        result = mode == "r1" ? r1(f) : r2(f);
        ReductionTrace trace;
        trace.initial_hash = dimacs_hash(f);
        trace.final_hash = dimacs_hash(result);
        trace_json = to_json(trace);
    } else if (mode == "preprocess") {
        PreprocessResult pre = bounded_dp_preprocess(f, threshold);
        result = pre.result;
        trace_json = to_json(pre);
    } else {
        throw ParseError("unknown reduce mode: " + mode);
    }

    emit(emit_dimacs(result), out_path);
    if (!trace_path.empty()) write_file(trace_path, dump(trace_json));
    return 0;
}

int cmd_classify(const std::string& file, bool json, bool verify,
                 std::optional<int> bound, int iso_bound,
                 const std::string& out_path) {
    DpOptions opts;
    opts.verify = verify;
    opts.var_bound = resolve_bound(bound);
    ConfluenceReport rep = classify_confluence(load(file), opts, iso_bound);
    if (json) {
        emit(dump(to_json(rep)), out_path);
    } else {
        std::ostringstream os;
        os << "classification: " << to_string(rep.classification) << '\n'
           << "reduction results: " << rep.results.size() << '\n'
           << "variables after reduction: " << rep.n_after << '\n'
           << "eventually saturated: "
           << (rep.eventually_saturated ? "yes" : "no") << '\n';
        if (rep.nonsingularity_type)
            os << "type: " << *rep.nonsingularity_type << '\n';
        emit(os.str(), out_path);
    }
    return 0;
}

int cmd_generate_dn(int n, const std::string& out_path) {
    emit(emit_dimacs(gen_dn(n)), out_path);
    return 0;
}

int cmd_generate_corpus(const std::string& recipe_file,
                        std::optional<std::uint64_t> seed, bool verify,
                        std::optional<int> bound, const std::string& out_dir) {
    DpOptions opts;
    opts.verify = verify;
    opts.var_bound = resolve_bound(bound);
    Json j;
    try {
        j = Json::parse(read_file(recipe_file));
    } catch (const Json::exception& e) {
        throw ParseError(std::string("recipe is not valid JSON: ") + e.what());
    }
    GeneratorRecipe recipe = recipe_from_json(j);
    if (seed) recipe.seed = *seed;

    std::vector<ClauseSet> instances = generate_mu_corpus(recipe, opts);
    fs::create_directories(out_dir);
    std::vector<ManifestEntry> entries;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        std::ostringstream name;
        name << "inst_" << (i < 10 ? "00" : i < 100 ? "0" : "") << i << ".cnf";
        write_file((fs::path(out_dir) / name.str()).string(),
                   emit_dimacs(instances[i]));
        ManifestEntry entry;
        entry.file_name = name.str();
        entry.n = instances[i].var_count();
        entry.c = instances[i].clause_count();
        entry.deficiency = instances[i].deficiency();
        entry.mu = classify_mu(instances[i], opts.var_bound).is_mu();
        entry.classification =
            to_string(classify_confluence(instances[i], opts).classification);
        entries.push_back(std::move(entry));
    }
    write_file((fs::path(out_dir) / "manifest.json").string(),
               dump(corpus_manifest(recipe, entries)));
    std::cout << "wrote " << instances.size() << " instances to " << out_dir
              << '\n';
    return 0;
}

int cmd_check(const std::vector<std::string>& suites, bool json,
              std::optional<int> bound, const std::string& corpus_dir) {
    DpOptions opts;
    opts.verify = true;  // checks always revalidate their own shortcuts
    opts.var_bound = resolve_bound(bound);

    static const std::vector<std::string> kAll = {
        "degrees", "exchange", "index", "confluence-smu", "mu2", "hitting"};
    std::vector<std::string> chosen = suites.empty() ? kAll : suites;

    std::vector<PropertyResult> results;
    for (const std::string& s : chosen) {
        std::vector<PropertyResult> part;
        if (!corpus_dir.empty()) {
            part = check_corpus_dir(s, corpus_dir, opts);
        } else if (s == "degrees") {
            part = run_degree_suite(opts);
        } else if (s == "exchange") {
            part = run_exchange_suite(opts);
        } else if (s == "index") {
            part = run_index_suite(opts);
        } else if (s == "confluence-smu") {
            part = run_confluence_suite(opts);
        } else if (s == "mu2") {
            part = run_deficiency2_suite(opts);
        } else if (s == "hitting") {
            part = run_hitting_suite(opts);
        } else {
            throw ParseError("unknown suite: " + s);
        }
        for (PropertyResult& p : part) results.push_back(std::move(p));
    }

    if (json)
        std::cout << dump(suite_json(results));
    else
        std::cout << render_suite(results);
    for (const PropertyResult& p : results)
        if (!p.ok()) throw PropertyError("suite reported violations");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mu-forge: analysis and reduction of minimally "
                 "unsatisfiable clause-sets"};
    app.require_subcommand(1);
    // Global flags may appear before or after the subcommand name.
    app.fallthrough();

    bool json = false;
    bool verify = false;
    std::optional<int> bound;
    app.add_flag("--json", json, "machine-readable JSON output");
    app.add_flag("--verify", verify,
                 "re-check internal invariants while computing");
    app.add_option("--bound", bound,
                   "variable bound for the satisfiability oracle "
                   "(default 28, or MU_FORGE_BOUND)");

    auto* analyze = app.add_subcommand("analyze", "report structure of one "
                                                  "DIMACS clause-set");
    std::string an_file;
    std::string an_out;
    std::vector<std::string> an_choices;
    analyze->add_option("file", an_file, "input DIMACS file")->required();
    analyze->add_option("--choice", an_choices,
                        "orientation pos|neg:<var> for a 1-singular variable");
    analyze->add_option("--out", an_out, "write output to this file");

    auto* reduce = app.add_subcommand("reduce", "apply a reduction and print "
                                                "the resulting DIMACS");
    std::string rd_mode;
    std::string rd_file;
    std::string rd_vars;
    std::string rd_out;
    std::string rd_trace;
    int rd_var = 0;
    int rd_threshold = 0;
    reduce
        ->add_option("mode", rd_mode,
                     "sdp-greedy | sdp-tuple | dp | r1 | r2 | preprocess")
        ->required();
    reduce->add_option("file", rd_file, "input DIMACS file")->required();
    reduce->add_option("--vars", rd_vars,
                       "comma-separated variables for sdp-tuple");
    reduce->add_option("--var", rd_var, "variable for mode dp");
    reduce->add_option("--K", rd_threshold,
                       "clause-growth threshold for mode preprocess");
    reduce->add_option("--out", rd_out, "write the reduced set to this file");
    reduce->add_option("--trace", rd_trace, "write a JSON trace sidecar");

    auto* classify = app.add_subcommand(
        "classify", "classify the reduction behaviour of one clause-set");
    std::string cl_file;
    std::string cl_out;
    int cl_limit = kDefaultIsoBound;
    classify->add_option("file", cl_file, "input DIMACS file")->required();
    classify->add_option("--limit", cl_limit,
                         "variable bound for canonicalization (default 16)");
    classify->add_option("--out", cl_out, "write output to this file");

    auto* generate = app.add_subcommand("generate", "emit DIMACS instances");
    auto* gen_dn_cmd = generate->add_subcommand(
        "dn", "the canonical deficiency-2 instance with n variables");
    int gd_n = 0;
    std::string gd_out;
    gen_dn_cmd->add_option("n", gd_n, "number of variables (>= 2)")
        ->required();
    gen_dn_cmd->add_option("--out", gd_out, "write output to this file");
    auto* gen_corpus = generate->add_subcommand(
        "corpus", "a generated corpus described by a JSON recipe");
    std::string gc_recipe;
    std::string gc_out = "corpus";
    std::optional<std::uint64_t> gc_seed;
    gen_corpus->add_option("recipe", gc_recipe, "JSON recipe file")
        ->required();
    gen_corpus->add_option("--seed", gc_seed, "override the recipe seed");
    gen_corpus->add_option("--out", gc_out,
                           "output directory (default: corpus)");
    generate->require_subcommand(1);

    auto* check = app.add_subcommand("check", "run the property suites");
    std::vector<std::string> ck_suites;
    std::string ck_corpus;
    check->add_option("suite", ck_suites,
                      "degrees | exchange | index | confluence-smu | mu2 | "
                      "hitting (default: all)");
    check->add_option("--corpus", ck_corpus,
                      "run per-instance checks over .cnf files in this "
                      "directory instead of the built-in corpus");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze)
            return cmd_analyze(an_file, json, verify, bound, an_choices,
                               an_out);
        if (*reduce)
            return cmd_reduce(rd_mode, rd_file, rd_vars, rd_var, rd_threshold,
                              verify, bound, rd_out, rd_trace);
        if (*classify)
            return cmd_classify(cl_file, json, verify, bound, cl_limit,
                                cl_out);
        if (*generate) {
            if (*gen_dn_cmd) return cmd_generate_dn(gd_n, gd_out);
            return cmd_generate_corpus(gc_recipe, gc_seed, verify, bound,
                                       gc_out);
        }
        if (*check) return cmd_check(ck_suites, json, bound, ck_corpus);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
