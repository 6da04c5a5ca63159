#ifndef BUCHI_DECIDE_HPP
#define BUCHI_DECIDE_HPP

#include "buchi/dfa.hpp"
#include "buchi/formula.hpp"

namespace buchi {

struct CompileOptions {
    size_t state_cap = kDefaultStateCap;
    size_t dnf_cap = 100000;
};

// Canonical DFA over the free variables of f in declaration order; the
// language is all encodings of the solution set (closed under leading zero
// columns). Structural recursion: atoms via the linear/valuation builders,
// connectives via products, negation via complement, quantifiers via
// saturated projection (innermost first, minimizing after each step).
Dfa compile(const Formula& f, const CompileOptions& opts = {});

struct NotExistentialError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// DNF fast path for existential formulas: negation elimination, prenex, one
// system automaton per disjunct, union, then projection of the quantified
// variables. Equivalent to compile() on its domain.
Dfa compile_existential_fast(const Formula& f, const CompileOptions& opts = {});

struct SatResult {
    bool sat = false;
    Assignment witness;  // minimal-length encoding, decoded
};
SatResult is_sat(const Formula& f, const CompileOptions& opts = {});

bool membership(const Formula& f, const Assignment& v, const CompileOptions& opts = {});

// First `limit` solutions in (length, lexicographic) order of their canonical
// encodings, deduplicated by value.
std::vector<Assignment> enumerate_solutions(const Formula& f, size_t limit,
                                            const CompileOptions& opts = {});

// Decides quantified subformulas by compilation; pluggable into
// EvalOptions::quantifier_hook.
std::function<std::optional<bool>(const Formula&, const Assignment&)> automaton_quantifier_hook(
    const CompileOptions& opts = {});

}  // namespace buchi

#endif
