#ifndef BUCHI_FORMULA_HPP
#define BUCHI_FORMULA_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "buchi/digit_word.hpp"

namespace buchi {

enum class Rel { Eq, Le, Lt, Ge, Gt };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// coeffs . vars rel rhs, variables over N, coefficients over Z.
struct LinearAtom {
    std::map<std::string, Int> coeffs;
    Rel rel = Rel::Eq;
    Int rhs = 0;
};

struct ValAtom {
    std::string x, y;  // V_p(x, y)
};

struct PowAtom {
    std::string x;  // P_p(x), the macro V_p(x, x)
};

struct BoolConst {
    bool value = false;
};

struct NaryNode {
    bool conj = true;  // true: and, false: or
    std::vector<FormulaPtr> children;
};

struct NotNode {
    FormulaPtr child;
};

struct QuantNode {
    bool exists = true;
    std::string var;
    FormulaPtr body;
};

// AST of a base-p formula; all variables range over N.
struct Formula {
    int base = 2;
    std::variant<LinearAtom, ValAtom, PowAtom, BoolConst, NaryNode, NotNode, QuantNode> node;
};

// --- constructors -------------------------------------------------------------

Formula f_true(int base);
Formula f_false(int base);
Formula f_linear(int base, std::map<std::string, Int> coeffs, Rel rel, Int rhs);
Formula f_eq_const(int base, const std::string& var, Int value);
Formula f_val(int base, const std::string& x, const std::string& y);
Formula f_pow(int base, const std::string& x);
Formula f_and(std::vector<Formula> children);
Formula f_or(std::vector<Formula> children);
Formula f_not(Formula child);
Formula f_exists(const std::string& var, Formula body);
Formula f_forall(const std::string& var, Formula body);

// --- inspection -----------------------------------------------------------------

// Free variables in order of first occurrence (the track order of compiled
// automata).
std::vector<std::string> free_variables(const Formula& f);
std::string print_formula(const Formula& f);

// Renames shadowed bound variables apart; no two nested quantifiers share a
// name and bound names avoid free names.
Formula rename_apart(const Formula& f);

// --- parsing --------------------------------------------------------------------

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(const std::string& msg, int line, int column);
};

// Grammar (whitespace-insensitive, '#' starts a line comment):
//   formula := quant | or ;   quant := ("E"|"A") ident "." formula ;
//   or := and { "|" and } ;   and := lit { "&" lit } ;
//   lit := ["~"] atom | ["~"] "(" formula ")" ;
//   atom := linexp rel linexp | "V(" ident "," ident ")" | "P(" ident ")"
//         | "true" | "false" ;
//   rel := "=" | "<=" | "<" | ">=" | ">" ;
//   linexp := ["-"] term { ("+"|"-") term } ;
//   term := [integer "*"] (ident | integer).
// With declared query variables, any other free variable is wrapped in an
// existential quantifier.
Formula parse_formula(const std::string& text, int base,
                      const std::optional<std::vector<std::string>>& query_vars = std::nullopt);

// --- ground evaluation ------------------------------------------------------------

using Assignment = std::map<std::string, Int>;

struct UnboundedQuantifierError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvalOptions {
    // Quantified variables are enumerated up to this bound (inclusive).
    Int quantifier_cap = Int(1) << 13;
    // When set, an inconclusive enumeration (existential with no witness or
    // universal with no counterexample below the cap) raises
    // UnboundedQuantifierError instead of trusting the bounded verdict.
    bool strict = false;
    // Optional exact decision procedure for quantified subformulas; used
    // before enumeration when provided.
    std::function<std::optional<bool>(const Formula& quantified, const Assignment&)> quantifier_hook;
};

bool eval_ground(const Formula& f, const Assignment& assignment, const EvalOptions& opts = {});

// --- linear systems ------------------------------------------------------------------

// A . x = c plus valuation constraints V_p(vars[i], vars[j]); the DNF
// building block of existential formulas.
struct LinSystem {
    int base = 2;
    std::vector<std::string> vars;
    std::vector<std::vector<Int>> matrix;  // m rows, each of size vars.size()
    std::vector<Int> rhs;                  // size m
    std::vector<std::pair<int, int>> valuations;
    size_t num_shared_vars = 0;  // leading vars shared across the DNF; the rest are slacks

    std::string str() const;
};

// --- normalization ---------------------------------------------------------------------

// Equivalent negation-free formula. Linear negations flip relations,
// ~V_p and ~P_p expand to existential characterizations, quantifiers
// dualize.
Formula eliminate_negation(const Formula& f);

// Prenex normal form of a negation-free formula; fresh names avoid capture;
// outer-to-inner quantifier order preserved left to right.
Formula to_prenex(const Formula& f);

struct PrenexParts {
    std::vector<std::pair<bool, std::string>> prefix;  // (exists?, var)
    Formula matrix;
};
PrenexParts split_prenex(const Formula& f);

struct DnfExplosionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// DNF expansion of a negation-free quantifier-free matrix; one LinSystem per
// disjunct, inequalities converted to equations via fresh slack variables,
// P_p(x) encoded as V_p(x,x). shared_vars fixes the common variable order.
std::vector<LinSystem> matrix_to_systems(const Formula& matrix,
                                         const std::vector<std::string>& shared_vars,
                                         size_t disjunct_cap = 100000);

}  // namespace buchi

#endif
