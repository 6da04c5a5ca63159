#ifndef BUCHI_SYNTHESIS_HPP
#define BUCHI_SYNTHESIS_HPP

#include "buchi/block_regex.hpp"
#include "buchi/decide.hpp"
#include "buchi/dfa.hpp"
#include "buchi/formula.hpp"
#include "buchi/upset.hpp"

namespace buchi {

struct RoundTripError : std::runtime_error {
    DigitWord counterexample;
    RoundTripError(const std::string& msg, DigitWord w)
        : std::runtime_error(msg + " (counterexample word " + w.str() + ")"),
          counterexample(std::move(w)) {}
};

// y is the smallest power of the base strictly greater than x.
Formula phi_w(int base, const std::string& x, const std::string& y);

// x = p^r and y = p^(r + ell*i) for some i, r >= 0.
Formula phi_s(int base, uint64_t ell, const std::string& x, const std::string& y);

// x = p^r and y = p^(r+u) for some u in the set; false for the empty set.
Formula phi_s_u(int base, const UpSet& u, const std::string& x, const std::string& y);

// [[w*]] as an existential formula of the target variable.
Formula phi_w_star(const DigitWord& w, const std::string& x = "x");

// [[w+ 0^U]]: one or more copies of w followed by a number of zero columns
// drawn from the set.
Formula phi_w_plus_zeros(const DigitWord& w, const UpSet& u, const std::string& x = "x");

// x = p^k and digit k of y equals j; existential variant.
Formula phi_digit(int base, int j, const std::string& x, const std::string& y);
// Same predicate with a universal prefix, for use under a universal
// quantifier.
Formula phi_digit_pi1(int base, int j, const std::string& x, const std::string& y);

struct SynthOptions {
    // Extra base factor in the head-word composition step; kept as a switch
    // while round trips arbitrate the two candidate readings.
    bool head_gap_extra_base_factor = false;
    CompileOptions compile;
};

// Existential formula defining the encoded values of a union of block
// regexes; round-trip validated against the zero closure of the regex DFA
// before returning.
Formula synth_existential(const std::vector<BlockRegex>& rs, const std::string& target = "x",
                          const SynthOptions& opts = {});

// One-alternation formula defining the decode-set of a zero-closed
// automaton; round-trip validated by recompilation.
Formula synth_sigma2(const Dfa& a, const SynthOptions& opts = {});

struct ShapeAudit {
    bool universal_free = true;       // no universal quantifier in NNF
    bool exists_under_forall = false; // an existential inside a universal scope
    int alternations = 0;             // quantifier block switches along the worst path
};
ShapeAudit quantifier_shape(const Formula& f);

}  // namespace buchi

#endif
