#ifndef BUCHI_DFA_HPP
#define BUCHI_DFA_HPP

#include <optional>
#include <string>
#include <vector>

#include "buchi/digit_word.hpp"
#include "buchi/upset.hpp"

namespace buchi {

constexpr size_t kDefaultStateCap = 1'000'000;

struct StateExplosionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic automaton over Sigma_p^d with a sparse, partial transition
// map (a missing entry is the rejecting sink). Canonical automata are trim,
// minimal, and numbered in BFS order with letters ascending, so equal
// languages have identical representations.
struct Dfa {
    int base = 2;
    int dim = 1;
    int initial = 0;
    // trans[s] sorted by letter; at most one entry per letter.
    std::vector<std::vector<std::pair<Letter, int>>> trans;
    std::vector<bool> accepting;
    std::vector<std::string> labels;  // optional provenance, may be empty

    size_t num_states() const { return trans.size(); }
    int step(int state, Letter a) const;
    bool accepts(const std::vector<Letter>& word) const;
    bool accepts(const DigitWord& w) const;
    Letter num_letters() const { return alphabet_size(base, dim); }
};

struct Nfa {
    int base = 2;
    int dim = 1;
    std::vector<int> initials;
    // trans[s] sorted by (letter, dst), duplicates removed.
    std::vector<std::vector<std::pair<Letter, int>>> trans;
    std::vector<bool> accepting;

    size_t num_states() const { return trans.size(); }
    Letter num_letters() const { return alphabet_size(base, dim); }
};

enum class BoolOp { And, Or };

// --- constructors -----------------------------------------------------------

Dfa empty_dfa(int base, int dim);      // rejects everything
Dfa universal_dfa(int base, int dim);  // accepts (Sigma_p^d)*
Dfa word_dfa(const DigitWord& w);      // accepts exactly {w}

// --- canonicalization --------------------------------------------------------

// Trim + minimize + canonical BFS renumbering. Every public operation returns
// canonical automata.
Dfa canonical(const Dfa& a);
bool is_empty_language(const Dfa& a);

// --- boolean operations ------------------------------------------------------

Dfa product(const Dfa& a, const Dfa& b, BoolOp op);
Dfa complement(const Dfa& a);

// --- projection & determinization ---------------------------------------------

// Removes one track, existential semantics: initial states are saturated
// with everything reachable by columns that are zero on all remaining tracks
// (arbitrary on the projected one), which realizes leading-zero padding of
// the erased variable beyond the length of the remaining word.
Nfa project(const Dfa& a, int component);

// Keeps exactly the given tracks (ascending), with or without the initial
// saturation. Plain (unsaturated) projection is the literal letter-wise map.
Nfa project_tracks(const Dfa& a, const std::vector<int>& kept, bool saturate);

Dfa determinize_minimize(const Nfa& a, size_t state_cap = kDefaultStateCap);

// Adds an unconstrained track at the given position.
Dfa insert_track(const Dfa& a, int position);

// --- equivalence -------------------------------------------------------------

// nullopt if equal; otherwise a shortest (then lexicographically least)
// distinguishing word.
std::optional<DigitWord> equivalence_counterexample(const Dfa& a, const Dfa& b);
bool equivalent(const Dfa& a, const Dfa& b);

// --- counting & words ---------------------------------------------------------

Int count_words(const Dfa& a, uint64_t n);
std::optional<DigitWord> shortest_word(const Dfa& a);
// Accepted words of length exactly n in lexicographic order, up to limit.
std::vector<DigitWord> words_of_length(const Dfa& a, size_t n, size_t limit);

// --- encoding-specific operations ---------------------------------------------

// Smallest language containing L(a) that is closed under prepending and
// stripping all-zero columns; equivalently, all encodings of the decode-set
// of a. Idempotent.
Dfa zero_closure(const Dfa& a);
bool is_zero_closed(const Dfa& a);

// Intersection with (epsilon | nonzero-column . Sigma*): puts accepted words
// in bijection with the decode-set.
Dfa canonical_representation(const Dfa& a);

Nfa reverse(const Dfa& a);

// Language concatenation L(a).L(b).
Dfa concat(const Dfa& a, const Dfa& b);

// Lengths of accepted words as an ultimately periodic set.
UpSet length_set(const Dfa& a);
// {j : 0^j in L(a)}.
UpSet zero_word_lengths(const Dfa& a);
// {j : some word of L(a) outside 0^* has exactly j leading zero columns}.
UpSet leading_zero_lengths(const Dfa& a);

// --- file format ---------------------------------------------------------------

// Versioned text format; write/read round-trips bit-exactly on canonical
// automata.
std::string write_automaton(const Dfa& a);
Dfa read_automaton(const std::string& text);
void write_automaton_file(const Dfa& a, const std::string& path);
Dfa read_automaton_file(const std::string& path);

}  // namespace buchi

#endif
