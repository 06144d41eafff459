#include "muforge/dimacs.hpp"

#include <charconv>
#include <sstream>
#include <vector>

namespace muforge {

namespace {

bool parse_int(std::string_view tok, long& out) {
    if (tok.empty()) return false;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

ClauseSet parse_dimacs(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    bool have_header = false;
    long head_vars = 0, head_clauses = 0;

    std::vector<std::string> tokens;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;  // blank line
        if (first == "c") continue;
        if (!have_header) {
            if (first != "p") throw ParseError("expected 'p cnf' header");
            std::string fmt, nv, nc, extra;
            if (!(ls >> fmt >> nv >> nc) || fmt != "cnf" || (ls >> extra))
                throw ParseError("malformed 'p cnf' header line: " + line);
            if (!parse_int(nv, head_vars) || !parse_int(nc, head_clauses) ||
                head_vars < 0 || head_clauses < 0)
                throw ParseError("malformed 'p cnf' header counts: " + line);
            have_header = true;
            continue;
        }
        std::string tok;
        tokens.push_back(first);
        while (ls >> tok) tokens.push_back(tok);
    }
    if (!have_header) throw ParseError("missing 'p cnf' header");

    std::vector<Clause> clauses;
    std::vector<Lit> current;
    for (const std::string& tok : tokens) {
        long code;
        if (!parse_int(tok, code))
            throw ParseError("non-integer token '" + tok + "'");
        if (code == 0) {
            try {
                clauses.push_back(Clause(std::move(current)));
            } catch (const PreconditionError& e) {
                throw ParseError(std::string("tautological clause: ") + e.what());
            }
            current.clear();
            continue;
        }
        if (code < -1000000000L || code > 1000000000L)
            throw ParseError("literal out of range: " + tok);
        current.push_back(Lit(static_cast<int>(code)));
    }
    if (!current.empty()) throw ParseError("final clause not terminated by 0");
    return ClauseSet(std::move(clauses));
}

std::string emit_dimacs(const ClauseSet& f) {
    Var max_var = f.vars().empty() ? 0 : f.vars().back();
    std::string out = "p cnf " + std::to_string(max_var) + ' ' +
                      std::to_string(f.clause_count()) + '\n';
    for (const Clause& c : f) {
        for (Lit x : c) {
            out += std::to_string(x.code());
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

std::string dimacs_hash(const ClauseSet& f) {
    std::string bytes = emit_dimacs(f);
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = hex[h & 0xF];
        h >>= 4;
    }
    return s;
}

}  // namespace muforge
