#ifndef BUCHI_LINEQ_HPP
#define BUCHI_LINEQ_HPP

#include "buchi/dfa.hpp"
#include "buchi/formula.hpp"

namespace buchi {

// DFA for A.x = c whose states carry integer m-vector labels obeying
// label(delta(q, u)) = base * label(q) + A.u, with initial label 0 and the
// unique accepting label c. Built by exact backward reachability from c; the
// norm bound max(|A|_{1,inf}, |c|_inf) is only an exploration safety cap.
struct EqAutomaton {
    Dfa dfa;  // trim, unminimized; state i labeled state_labels[i]
    std::vector<std::vector<Int>> state_labels;
    std::vector<std::vector<Int>> matrix;
    std::vector<Int> rhs;
    Int norm_bound;
};

EqAutomaton build_eq_automaton(const std::vector<std::vector<Int>>& matrix,
                               const std::vector<Int>& rhs, int base, int dim);

// Two-state DFA for V_p(x, y) over Sigma_p^dim. Also covers the macro
// P_p(x) when both indices coincide.
Dfa build_vp_automaton(int base, int dim, int x_index, int y_index);

// Minimized, canonical DFA for the full system (equations and valuation
// constraints).
Dfa build_system_automaton(const LinSystem& s);

// Unminimized labeled product of the equation automaton with one valuation
// DFA per constraint, trimmed only. The growth analyses count loops on these
// labeled states. Labels look like "(q1,q2|b1b2)".
struct SystemProduct {
    Dfa dfa;
    std::vector<std::string> state_labels;
};
SystemProduct build_system_product(const LinSystem& s);

// Algebraic reachability oracle: source reaches target on word w iff
// target = base^|w| * source + A . [[w]]. Must coincide with stepping the
// unpruned transition law.
bool check_reach_char(const std::vector<Int>& source, const std::vector<Int>& target,
                      const DigitWord& w, const std::vector<std::vector<Int>>& matrix, int base);

// Steps the unpruned transition law along w (total on Z^m).
std::vector<Int> step_transition_law(const std::vector<Int>& source, const DigitWord& w,
                                     const std::vector<std::vector<Int>>& matrix, int base);

}  // namespace buchi

#endif
