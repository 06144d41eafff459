#include "muforge/iso.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <utility>

#include "muforge/sat.hpp"

namespace muforge {

namespace {

// Encoding of a (target) literal: 2*(var-1) + (positive ? 1 : 0). This is
// the canonical literal order, so lexicographic comparison of encoded
// clause lists agrees with ClauseSet ordering. kCont marks a clause that
// still has unassigned variables; it sorts after every real literal, and a
// fully-assigned clause (no marker) sorts before its own extensions.
constexpr int kCont = std::numeric_limits<int>::max();
constexpr std::size_t kFrontierCap = 1 << 18;

using Encoding = std::vector<std::vector<int>>;

struct Labeling {
    std::vector<int> target;  // per source-variable index: 0-based target, -1 open
    std::vector<char> flip;   // per source-variable index: polarity swap
};

struct Indexed {
    std::vector<Var> vars;
    std::vector<std::vector<std::pair<int, bool>>> clauses;  // (var index, positive)
};

Indexed index_clauses(const ClauseSet& f) {
    Indexed ix;
    ix.vars = f.vars();
    ix.clauses.reserve(f.clauses().size());
    for (const Clause& c : f) {
        std::vector<std::pair<int, bool>> enc;
        enc.reserve(c.size());
        for (Lit x : c) {
            auto it = std::lower_bound(ix.vars.begin(), ix.vars.end(), x.var());
            enc.emplace_back(static_cast<int>(it - ix.vars.begin()),
                             x.positive());
        }
        ix.clauses.push_back(std::move(enc));
    }
    return ix;
}

Encoding prefix_encoding(const Indexed& ix, const Labeling& lab) {
    Encoding enc;
    enc.reserve(ix.clauses.size());
    for (const auto& clause : ix.clauses) {
        std::vector<int> row;
        row.reserve(clause.size() + 1);
        bool open = false;
        for (auto [vi, pos] : clause) {
            int t = lab.target[vi];
            if (t < 0) {
                open = true;
            } else {
                bool target_pos = pos != static_cast<bool>(lab.flip[vi]);
                row.push_back(2 * t + (target_pos ? 1 : 0));
            }
        }
        std::sort(row.begin(), row.end());
        if (open) row.push_back(kCont);
        enc.push_back(std::move(row));
    }
    std::sort(enc.begin(), enc.end());
    return enc;
}

ClauseSet decode(const Encoding& enc) {
    std::vector<Clause> out;
    out.reserve(enc.size());
    for (const auto& row : enc) {
        std::vector<Lit> lits;
        lits.reserve(row.size());
        for (int ord : row)
            lits.push_back((ord & 1) ? Lit::pos(ord / 2 + 1)
                                     : Lit::neg(ord / 2 + 1));
        out.emplace_back(std::move(lits));
    }
    return ClauseSet(std::move(out));
}

// Maps a's source onto b's source by passing through the shared canonical
// form: inverse(b.map) after a.map.
IsoWitness compose_through_canon(const CanonicalResult& a,
                                 const CanonicalResult& b) {
    std::unordered_map<int, Lit> inverse_b;
    for (const auto& [w, img] : b.map.positive_images()) {
        inverse_b.emplace(img.code(), Lit::pos(w));
        inverse_b.emplace(img.complement().code(), Lit::neg(w));
    }
    std::vector<std::pair<Var, Lit>> images;
    images.reserve(a.map.positive_images().size());
    for (const auto& [v, img] : a.map.positive_images()) {
        auto it = inverse_b.find(img.code());
        if (it == inverse_b.end())
            throw PropertyError("canonical maps do not compose");
        images.emplace_back(v, it->second);
    }
    return IsoWitness(std::move(images));
}

std::vector<std::size_t> sorted_sizes(const ClauseSet& f) {
    std::vector<std::size_t> sizes;
    sizes.reserve(f.clauses().size());
    for (const Clause& c : f) sizes.push_back(c.size());
    std::sort(sizes.begin(), sizes.end());
    return sizes;
}

// Degree pairs up to polarity flip: (min, max) per variable, sorted.
std::vector<std::pair<int, int>> degree_shape(const ClauseSet& f) {
    std::vector<std::pair<int, int>> shape;
    shape.reserve(f.vars().size());
    for (Var v : f.vars()) {
        int p = f.ldeg(Lit::pos(v));
        int n = f.ldeg(Lit::neg(v));
        shape.emplace_back(std::min(p, n), std::max(p, n));
    }
    std::sort(shape.begin(), shape.end());
    return shape;
}

}  // namespace

IsoWitness::IsoWitness(std::vector<std::pair<Var, Lit>> positive_images)
    : images_(std::move(positive_images)) {
    std::sort(images_.begin(), images_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < images_.size(); ++i)
        if (images_[i].first == images_[i - 1].first)
            throw PreconditionError("duplicate source variable in witness");
}

Lit IsoWitness::image(Lit x) const {
    auto it = std::lower_bound(
        images_.begin(), images_.end(), x.var(),
        [](const auto& entry, Var v) { return entry.first < v; });
    if (it == images_.end() || it->first != x.var())
        throw PreconditionError("literal outside witness domain");
    return x.positive() ? it->second : it->second.complement();
}

Clause IsoWitness::apply(const Clause& c) const {
    std::vector<Lit> lits;
    lits.reserve(c.size());
    for (Lit x : c) lits.push_back(image(x));
    return Clause(std::move(lits));
}

ClauseSet IsoWitness::apply(const ClauseSet& f) const {
    std::vector<Clause> out;
    out.reserve(f.clauses().size());
    for (const Clause& c : f) out.push_back(apply(c));
    return ClauseSet(std::move(out));
}

bool IsoWitness::verifies(const ClauseSet& f, const ClauseSet& g) const {
    std::vector<Var> sources, targets;
    sources.reserve(images_.size());
    targets.reserve(images_.size());
    for (const auto& [v, img] : images_) {
        sources.push_back(v);
        targets.push_back(img.var());
    }
    std::sort(targets.begin(), targets.end());
    if (std::adjacent_find(targets.begin(), targets.end()) != targets.end())
        return false;
    if (sources != f.vars() || targets != g.vars()) return false;
    try {
        return apply(f) == g;
    } catch (const Error&) {
        return false;
    }
}

CanonicalResult canonical_form_with_map(const ClauseSet& f, int iso_bound) {
    if (f.var_count() > iso_bound)
        throw BoundError("clause-set exceeds the isomorphism bound of " +
                         std::to_string(iso_bound) + " variables");
    const Indexed ix = index_clauses(f);
    const int n = static_cast<int>(ix.vars.size());

    // Levelwise greedy search: extend every surviving labeling by one
    // (variable, flip) choice for the next target and keep exactly the
    // extensions whose prefix encoding is minimal. Since the prefix
    // encoding of a complete labeling is the full encoding, the survivors
    // at the last level all realize the canonical form.
    std::vector<Labeling> frontier{
        Labeling{std::vector<int>(n, -1), std::vector<char>(n, 0)}};
    for (int level = 0; level < n; ++level) {
        std::optional<Encoding> best;
        std::vector<Labeling> next;
        for (const Labeling& lab : frontier) {
            for (int vi = 0; vi < n; ++vi) {
                if (lab.target[vi] >= 0) continue;
                for (int fl = 0; fl < 2; ++fl) {
                    Labeling cand = lab;
                    cand.target[vi] = level;
                    cand.flip[vi] = static_cast<char>(fl);
                    Encoding enc = prefix_encoding(ix, cand);
                    if (!best || enc < *best) {
                        best = std::move(enc);
                        next.clear();
                        next.push_back(std::move(cand));
                    } else if (enc == *best) {
                        next.push_back(std::move(cand));
                    }
                }
            }
        }
        frontier = std::move(next);
        if (frontier.size() > kFrontierCap)
            throw BoundError("label search frontier exceeded " +
                             std::to_string(kFrontierCap) + " candidates");
    }

    const Labeling& chosen = frontier.front();
    CanonicalResult out;
    out.canon = decode(prefix_encoding(ix, chosen));
    std::vector<std::pair<Var, Lit>> images;
    images.reserve(ix.vars.size());
    for (int vi = 0; vi < n; ++vi) {
        Var t = chosen.target[vi] + 1;
        images.emplace_back(ix.vars[vi],
                            chosen.flip[vi] ? Lit::neg(t) : Lit::pos(t));
    }
    out.map = IsoWitness(std::move(images));
    if (!out.map.verifies(f, out.canon))
        throw PropertyError("canonical labeling failed verification");
    return out;
}

ClauseSet canonical_form(const ClauseSet& f, int iso_bound) {
    return canonical_form_with_map(f, iso_bound).canon;
}

std::optional<IsoWitness> are_isomorphic(const ClauseSet& f,
                                         const ClauseSet& g, int iso_bound) {
    if (f.var_count() != g.var_count() ||
        f.clause_count() != g.clause_count())
        return std::nullopt;
    if (sorted_sizes(f) != sorted_sizes(g)) return std::nullopt;
    if (degree_shape(f) != degree_shape(g)) return std::nullopt;

    CanonicalResult cf = canonical_form_with_map(f, iso_bound);
    CanonicalResult cg = canonical_form_with_map(g, iso_bound);
    if (!(cf.canon == cg.canon)) return std::nullopt;
    IsoWitness w = compose_through_canon(cf, cg);
    if (!w.verifies(f, g))
        throw PropertyError("isomorphism witness failed verification");
    return w;
}

std::string to_string(Confluence c) {
    switch (c) {
        case Confluence::confluent:
            return "confluent";
        case Confluence::confluent_mod_iso:
            return "confluent-mod-iso";
        case Confluence::divergent:
            return "divergent";
    }
    return "unknown";
}

ConfluenceReport classify_confluence(const ClauseSet& f, const DpOptions& opts,
                                     int iso_bound) {
    if (!classify_mu(f, opts.var_bound).is_mu())
        throw PreconditionError(
            "confluence classification needs a minimally unsatisfiable input");

    ConfluenceReport rep;
    std::vector<SdpResult> ends = sdp_set(f, opts);
    rep.results.reserve(ends.size());
    rep.traces.reserve(ends.size());
    for (SdpResult& e : ends) {
        rep.results.push_back(std::move(e.result));
        rep.traces.push_back(std::move(e.trace));
    }

    rep.n_after = rep.results.front().var_count();
    for (const ClauseSet& r : rep.results)
        if (r.var_count() != rep.n_after)
            throw PropertyError("reduction results disagree on variable count");

    rep.eventually_saturated = true;
    for (const ClauseSet& r : rep.results)
        if (!is_saturated_mu(r, opts.var_bound).saturated) {
            rep.eventually_saturated = false;
            break;
        }

    if (rep.results.size() == 1) {
        rep.classification = Confluence::confluent;
    } else {
        std::vector<CanonicalResult> canon;
        canon.reserve(rep.results.size());
        for (const ClauseSet& r : rep.results)
            canon.push_back(canonical_form_with_map(r, iso_bound));
        std::size_t mismatch = 0;
        for (std::size_t i = 1; i < canon.size(); ++i)
            if (!(canon[i].canon == canon[0].canon)) {
                mismatch = i;
                break;
            }
        if (mismatch == 0) {
            rep.classification = Confluence::confluent_mod_iso;
            for (std::size_t i = 1; i < canon.size(); ++i) {
                IsoWitness w = compose_through_canon(canon[0], canon[i]);
                if (!w.verifies(rep.results[0], rep.results[i]))
                    throw PropertyError(
                        "isomorphism witness failed verification");
                rep.witnesses.push_back(std::move(w));
            }
        } else {
            rep.classification = Confluence::divergent;
            rep.non_iso_pair = std::make_pair(0, static_cast<int>(mismatch));
        }
    }

    if (f.deficiency() == 2) rep.nonsingularity_type = rep.n_after;
    return rep;
}

DescentResult check_divergence_descent(const ClauseSet& f,
                                       const DpOptions& opts, int iso_bound) {
    if (classify_confluence(f, opts, iso_bound).classification !=
        Confluence::divergent)
        throw PreconditionError("divergence descent needs a divergent input");

    DescentResult out;
    ClauseSet cur = f;
    int index = singularity_index(cur, opts);
    while (index > 1) {
        // Some singular step keeps the set divergent: otherwise every
        // one-step reduct would be confluent modulo isomorphism, and so
        // would the input.
        bool advanced = false;
        for (Var v : singular_vars(cur)) {
            ClauseSet next = dp(cur, v);
            if (classify_confluence(next, opts, iso_bound).classification ==
                Confluence::divergent) {
                out.tuple.variables.push_back(v);
                out.tuple.degrees.push_back(singular_profile(cur, v)->degree);
                cur = std::move(next);
                advanced = true;
                break;
            }
        }
        if (!advanced)
            throw PropertyError("no singular step keeps the set divergent");
        int next_index = singularity_index(cur, opts);
        if (next_index != index - 1)
            throw PropertyError("singularity index did not drop by one");
        index = next_index;
    }
    out.reduced = std::move(cur);
    return out;
}

Index1Report check_index1_structure(const ClauseSet& f, const DpOptions& opts,
                                    int iso_bound) {
    if (!classify_mu(f, opts.var_bound).is_mu())
        throw PreconditionError(
            "index-1 structure needs a minimally unsatisfiable input");
    Index1Report rep;
    rep.singular = singular_vars(f);
    if (rep.singular.size() < 2)
        throw PreconditionError(
            "index-1 structure needs at least two singular variables");
    if (singularity_index(f, opts) != 1)
        throw PreconditionError("input does not have singularity index 1");

    rep.all_non_1_singular = one_singular_vars(f).empty();

    std::vector<SingularProfile> profiles;
    profiles.reserve(rep.singular.size());
    for (Var v : rep.singular) profiles.push_back(*singular_profile(f, v));
    bool same_main = true;
    for (const SingularProfile& p : profiles)
        if (!(p.main == profiles.front().main)) same_main = false;
    if (same_main) rep.common_main = profiles.front().main;

    std::vector<ClauseSet> reducts;
    reducts.reserve(profiles.size());
    for (const SingularProfile& p : profiles)
        reducts.push_back(dp(f, p.variable));

    rep.eventually_saturated = true;
    for (const ClauseSet& r : reducts)
        if (!is_saturated_mu(r, opts.var_bound).saturated) {
            rep.eventually_saturated = false;
            break;
        }

    rep.cfli = true;
    for (std::size_t i = 1; i < reducts.size(); ++i)
        if (!are_isomorphic(reducts[0], reducts[i], iso_bound)) {
            rep.cfli = false;
            break;
        }

    if (rep.eventually_saturated) {
        rep.pair_of_two = rep.singular.size() == 2;
        if (rep.pair_of_two && rep.common_main) {
            Clause chosen({profiles[0].singular_literal,
                           profiles[1].singular_literal});
            Clause core = rep.common_main->difference(chosen);
            rep.side_inclusion = true;
            for (const SingularProfile& p : profiles)
                for (const Clause& side : p.sides)
                    if (!core.subset_of(side)) rep.side_inclusion = false;

            // Constructive renaming from dp on the first singular variable
            // onto dp on the second: send the second singular literal to
            // the complement of the first, fix everything else.
            Lit x = profiles[0].singular_literal;
            Lit y = profiles[1].singular_literal;
            std::vector<std::pair<Var, Lit>> images;
            for (Var v : reducts[0].vars()) {
                if (v == y.var())
                    images.emplace_back(
                        v, y.positive() ? x.complement() : x);
                else
                    images.emplace_back(v, Lit::pos(v));
            }
            rep.constructive_witness_valid =
                IsoWitness(std::move(images)).verifies(reducts[0], reducts[1]);
        }
    }
    return rep;
}

}  // namespace muforge
