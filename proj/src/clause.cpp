#include "muforge/clause.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace muforge {

Clause::Clause(std::vector<Lit> lits) : lits_(std::move(lits)) {
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
    for (std::size_t i = 1; i < lits_.size(); ++i) {
        if (lits_[i - 1].var() == lits_[i].var())
            throw PreconditionError("clashing literal pair on variable " +
                                    std::to_string(lits_[i].var()));
    }
}

Clause Clause::of(std::initializer_list<int> codes) {
    std::vector<Lit> lits;
    lits.reserve(codes.size());
    for (int c : codes) lits.push_back(Lit(c));
    return Clause(std::move(lits));
}

bool Clause::contains(Lit x) const {
    return std::binary_search(lits_.begin(), lits_.end(), x);
}

bool Clause::mentions(Var v) const {
    return contains(Lit::pos(v)) || contains(Lit::neg(v));
}

bool Clause::subset_of(const Clause& other) const {
    return std::includes(other.lits_.begin(), other.lits_.end(),
                         lits_.begin(), lits_.end());
}

int Clause::clash_count(const Clause& other) const {
    int n = 0;
    for (Lit x : lits_)
        if (other.contains(x.complement())) ++n;
    return n;
}

Clause Clause::with(Lit x) const {
    auto lits = lits_;
    lits.push_back(x);
    return Clause(std::move(lits));
}

Clause Clause::without(Lit x) const {
    std::vector<Lit> lits;
    lits.reserve(lits_.size());
    for (Lit y : lits_)
        if (!(y == x)) lits.push_back(y);
    return Clause(std::move(lits));
}

Clause Clause::union_with(const Clause& other) const {
    auto lits = lits_;
    lits.insert(lits.end(), other.lits_.begin(), other.lits_.end());
    return Clause(std::move(lits));
}

Clause Clause::difference(const Clause& other) const {
    std::vector<Lit> lits;
    for (Lit x : lits_)
        if (!other.contains(x)) lits.push_back(x);
    return Clause(std::move(lits));
}

Clause Clause::intersection(const Clause& other) const {
    std::vector<Lit> lits;
    for (Lit x : lits_)
        if (other.contains(x)) lits.push_back(x);
    return Clause(std::move(lits));
}

std::vector<Var> Clause::vars() const {
    std::vector<Var> vs;
    vs.reserve(lits_.size());
    for (Lit x : lits_) vs.push_back(x.var());
    return vs;  // already ascending: literal order groups by variable
}

std::strong_ordering operator<=>(const Clause& a, const Clause& b) {
    return std::lexicographical_compare_three_way(
        a.lits_.begin(), a.lits_.end(), b.lits_.begin(), b.lits_.end());
}

std::ostream& operator<<(std::ostream& os, const Clause& c) {
    os << '{';
    bool first = true;
    for (Lit x : c) {
        if (!first) os << ',';
        os << x.code();
        first = false;
    }
    return os << '}';
}

ClauseSet::ClauseSet(std::vector<Clause> clauses) : clauses_(std::move(clauses)) {
    std::sort(clauses_.begin(), clauses_.end());
    clauses_.erase(std::unique(clauses_.begin(), clauses_.end()),
                   clauses_.end());
    for (const Clause& c : clauses_)
        for (Lit x : c) vars_.push_back(x.var());
    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
    degs_.assign(vars_.size(), {0, 0});
    for (const Clause& c : clauses_)
        for (Lit x : c) {
            auto it = std::lower_bound(vars_.begin(), vars_.end(), x.var());
            auto& entry = degs_[static_cast<std::size_t>(it - vars_.begin())];
            (x.positive() ? entry.first : entry.second) += 1;
        }
}

const std::pair<int, int>* ClauseSet::deg_entry(Var v) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
    if (it == vars_.end() || *it != v) return nullptr;
    return &degs_[static_cast<std::size_t>(it - vars_.begin())];
}

int ClauseSet::ldeg(Lit x) const {
    const auto* e = deg_entry(x.var());
    if (!e) return 0;
    return x.positive() ? e->first : e->second;
}

bool ClauseSet::contains(const Clause& c) const {
    return std::binary_search(clauses_.begin(), clauses_.end(), c);
}

bool ClauseSet::mentions(Var v) const { return deg_entry(v) != nullptr; }

bool ClauseSet::has_empty_clause() const {
    return !clauses_.empty() && clauses_.front().empty();
}

ClauseSet ClauseSet::with(const Clause& c) const {
    auto clauses = clauses_;
    clauses.push_back(c);
    return ClauseSet(std::move(clauses));
}

ClauseSet ClauseSet::without(const Clause& c) const {
    std::vector<Clause> clauses;
    clauses.reserve(clauses_.size());
    for (const Clause& d : clauses_)
        if (!(d == c)) clauses.push_back(d);
    return ClauseSet(std::move(clauses));
}

std::uint64_t ClauseSet::hash() const {
    // FNV-1a over literal codes with clause separators.
    std::uint64_t h = 14695981039346656037ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    for (const Clause& c : clauses_) {
        for (Lit x : c) mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(x.code())));
        mix(0x9e3779b97f4a7c15ULL);
    }
    return h;
}

std::ostream& operator<<(std::ostream& os, const ClauseSet& f) {
    os << '{';
    bool first = true;
    for (const Clause& c : f) {
        if (!first) os << ',';
        os << c;
        first = false;
    }
    return os << '}';
}

ClauseSet contradiction() { return ClauseSet({Clause()}); }

Clause resolvent(const Clause& c, const Clause& d) {
    std::vector<Lit> clash;
    for (Lit x : c)
        if (d.contains(x.complement())) clash.push_back(x);
    if (clash.size() != 1) throw ResolutionError(static_cast<int>(clash.size()));
    return c.without(clash[0]).union_with(d.without(clash[0].complement()));
}

bool is_hitting(const ClauseSet& f) {
    const auto& cs = f.clauses();
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i + 1; j < cs.size(); ++j)
            if (cs[i].clash_count(cs[j]) == 0) return false;
    return true;
}

ClauseSet subsumption_eliminate(const ClauseSet& f) {
    std::vector<Clause> keep;
    for (const Clause& c : f) {
        bool minimal = true;
        for (const Clause& d : f) {
            if (!(d == c) && d.subset_of(c)) {
                minimal = false;
                break;
            }
        }
        if (minimal) keep.push_back(c);
    }
    return ClauseSet(std::move(keep));
}

RefinementVerdict refines(const ClauseSet& f, const ClauseSet& g) {
    for (const Clause& c : f) {
        bool covered = false;
        for (const Clause& d : g) {
            if (c.subset_of(d)) {
                covered = true;
                break;
            }
        }
        if (!covered) return {false, c};
    }
    return {true, std::nullopt};
}

}  // namespace muforge
