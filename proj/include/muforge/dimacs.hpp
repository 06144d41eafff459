#pragma once

#include <string>
#include <string_view>

#include "muforge/clause.hpp"

namespace muforge {

// Strict DIMACS CNF reader. Accepts `c` comment lines and a single
// `p cnf <vars> <clauses>` header; clauses are zero-terminated literal
// sequences. Duplicate literals and duplicate clauses are merged (set
// semantics). Rejected with ParseError: missing or malformed header,
// non-integer tokens, an unterminated final clause, and tautological
// clauses (clash-free clause representation is an invariant, not a warning).
ClauseSet parse_dimacs(std::string_view text);

// Canonical emission: literals within a clause sorted by variable with
// negative polarity first, clauses sorted lexicographically, header counts
// the maximal variable index and the number of clauses. parse/emit
// round-trips exactly; equal clause-sets produce identical bytes.
std::string emit_dimacs(const ClauseSet& f);

// Stable identity for trace and report files: 64-bit FNV-1a over the
// canonical DIMACS bytes, as 16 hex digits.
std::string dimacs_hash(const ClauseSet& f);

}  // namespace muforge
