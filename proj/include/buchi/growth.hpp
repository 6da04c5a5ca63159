#ifndef BUCHI_GROWTH_HPP
#define BUCHI_GROWTH_HPP

#include <optional>

#include "buchi/block_regex.hpp"
#include "buchi/dfa.hpp"
#include "buchi/upset.hpp"

namespace buchi {

// Number of accepted words of length n.
Int density_words(const Dfa& a, uint64_t n);

// Number of members of the decode-set with exactly n significant digits,
// i.e. in [p^(n-1), p^n). Requires a dim-1, zero-closed automaton.
Int density_values(const Dfa& a, uint64_t n);

// Number of distinct track projections of loops of length n at state q.
Int cycle_count(const Dfa& a, int state, int track, uint64_t n);

// Eventual quasi-polynomial values in y = base^n, with branch selection by
// n mod modulus: value(n) = polys[n mod modulus](base^n) for n > threshold.
struct EQPoly {
    int base = 2;
    uint64_t threshold = 0;
    uint64_t modulus = 1;
    std::vector<std::vector<Rat>> polys;  // coefficient lists, ascending degree

    Rat eval(uint64_t n) const;
    int degree() const;
    std::string str() const;
};

// Least-degree fit (degree <= 1 in base^n) over all samples beyond a fitted
// threshold, moduli tried ascending up to max_modulus. nullopt when no such
// fit exists.
std::optional<EQPoly> fit_eqp(const std::vector<std::pair<uint64_t, Int>>& samples, int base,
                              uint64_t max_modulus = 4);

enum class GrowthKind { Polynomial, ExponentialBelowBase, ExponentialEqualBase };
enum class Sigma1Verdict { InSigma1, NotInSigma1, Unknown };

struct GrowthVerdict {
    GrowthKind kind = GrowthKind::Polynomial;
    int degree = 0;  // meaningful for Polynomial
    Sigma1Verdict sigma1 = Sigma1Verdict::Unknown;
    std::string evidence;
    std::vector<BlockRegex> decomposition;  // Polynomial only

    // Exponential certificate: a state with two distinct cycles in the
    // canonical-representation DFA, packaged for census cross-checks.
    struct TwoCycles {
        DigitWord prefix;   // initial -> q
        DigitWord cycle_a;  // q -> q
        DigitWord cycle_b;  // q -> q, distinct first letter
        DigitWord suffix;   // q -> accepting
    };
    std::optional<TwoCycles> two_cycles;
    std::vector<int> complete_scc;  // equal-base certificate states (canon DFA)
    Dfa canon;                      // the analyzed canonical-representation DFA
};

// Growth of the value census of a dim-1 automaton, decided on the exact
// graph structure of its canonical-representation DFA.
GrowthVerdict classify(const Dfa& a);

struct NotPolynomialError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Szilard decomposition of a bounded-growth language into block regexes;
// validated internally by automaton equivalence.
std::vector<BlockRegex> decompose_poly(const Dfa& a);

}  // namespace buchi

#endif
