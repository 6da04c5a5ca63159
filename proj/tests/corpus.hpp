#ifndef BUCHI_TESTS_CORPUS_HPP
#define BUCHI_TESTS_CORPUS_HPP

// Shared desk-scale corpus for the unit and acceptance suites.

#include <string>
#include <vector>

#include "buchi/block_regex.hpp"
#include "buchi/formula.hpp"

namespace buchi::corpus {

// Bounded-growth block regexes over bases 2 and 3 (k <= 3, |v|, |w| <= 3).
inline std::vector<BlockRegex> polynomial_regexes() {
    auto w2 = [](const std::string& s) { return word_from_string(2, s); };
    auto w3 = [](const std::string& s) { return word_from_string(3, s); };
    DigitWord e2(2, 1), e3(3, 1);
    std::vector<BlockRegex> out;
    // base 2
    out.push_back({w2("101"), {}});
    out.push_back({w2("1"), {{w2("0"), false, e2}}});
    out.push_back({e2, {{w2("10"), false, e2}}});
    out.push_back({e2, {{w2("1"), false, w2("0")}}});
    out.push_back({e2, {{w2("10"), false, w2("1")}}});
    out.push_back({w2("11"), {{w2("01"), false, e2}}});
    out.push_back({e2, {{w2("100"), false, w2("11")}}});
    out.push_back({e2, {{w2("1"), false, e2}, {w2("0"), false, e2}}});
    out.push_back({e2, {{w2("01"), false, e2}}});
    out.push_back({w2("0"), {{w2("1"), false, e2}}});
    out.push_back({w2("1"), {{w2("01"), false, w2("0")}}});
    out.push_back({e2, {{w2("110"), true, e2}}});
    out.push_back({w2("1"), {{w2("0"), false, w2("1")}, {w2("01"), false, e2}}});
    out.push_back({w2("0"), {{w2("10"), true, w2("0")}}});
    out.push_back({e2, {{w2("1"), false, w2("0")}, {w2("0"), true, w2("1")}}});
    out.push_back({e2, {{w2("10"), false, e2}, {w2("01"), false, e2}, {w2("11"), false, e2}}});
    // base 3
    out.push_back({w3("12"), {}});
    out.push_back({e3, {{w3("12"), false, e3}}});
    out.push_back({w3("2"), {{w3("0"), false, e3}}});
    out.push_back({e3, {{w3("2"), false, e3}, {w3("1"), true, e3}}});
    out.push_back({w3("20"), {{w3("21"), false, w3("1")}}});
    out.push_back({e3, {{w3("102"), false, w3("2")}}});
    out.push_back({w3("1"), {{w3("0"), false, e3}, {w3("12"), false, e3}}});
    out.push_back({e3, {{w3("01"), false, e3}}});
    return out;
}

struct SystemSpec {
    int base;
    std::vector<std::vector<long long>> matrix;
    std::vector<long long> rhs;
    std::vector<std::pair<int, int>> valuations;
    std::vector<std::string> vars;
};

// Fixed linear systems with valuation constraints for the cycle-count and
// reach-char checks.
inline std::vector<SystemSpec> fixed_systems() {
    return {
        {2, {{1, 2}}, {3}, {}, {"x", "y"}},
        {2, {{1, 2}}, {3}, {{0, 1}}, {"x", "y"}},
        {2, {{1, -1}}, {0}, {}, {"x", "y"}},
        {2, {{2, -3}}, {1}, {}, {"x", "y"}},
        {2, {{1}}, {4}, {}, {"x"}},
        {2, {{1, 1, -1}}, {2}, {}, {"x", "y", "z"}},
        {3, {{1, -1}}, {0}, {}, {"x", "y"}},
        {3, {{1, 1}}, {5}, {{0, 0}}, {"x", "y"}},
        {2, {{1, 1}, {1, -1}}, {4, 2}, {}, {"x", "y"}},
        {3, {{2, -1}}, {1}, {{1, 1}}, {"x", "y"}},
    };
}

inline LinSystem to_lin_system(const SystemSpec& spec) {
    LinSystem s;
    s.base = spec.base;
    s.vars = spec.vars;
    s.num_shared_vars = spec.vars.size();
    for (const auto& row : spec.matrix) {
        std::vector<Int> r;
        for (long long v : row) r.emplace_back(v);
        s.matrix.push_back(std::move(r));
    }
    for (long long v : spec.rhs) s.rhs.emplace_back(v);
    s.valuations = spec.valuations;
    return s;
}

// Existential formulas with one free variable for the growth dichotomy.
inline std::vector<std::pair<std::string, int>> existential_formulas() {
    return {
        {"E y. x = 2*y", 2},
        {"E y. x = 3*y", 2},
        {"V(x,x)", 2},
        {"E y. x = y + y & V(y,y)", 2},
        {"E y. E z. x = y + z & P(y) & P(z)", 2},
        {"x <= 12", 2},
        {"E y. V(y,x)", 2},
        {"E y. x = 4*y & V(y,y)", 2},
        {"E y. x = 2*y", 3},
        {"V(x,x)", 3},
        {"E y. x = 3*y & y <= 9", 3},
    };
}

// Formulas for the membership/evaluation cross-check; quantifier witnesses
// stay within a small multiple of the drawn values.
inline std::vector<std::pair<std::string, int>> ground_check_formulas() {
    return {
        {"E y. x = 2*y", 2},
        {"V(x,y)", 2},
        {"E y. x = 3*y & P(y)", 2},
        {"x <= 700", 2},
        {"~(x = 12) & x < 20", 2},
        {"P(x)", 2},
        {"E y. V(y,x) & y <= 16", 2},
        {"A y. y + x = y", 2},
        {"E y. x = 2*y", 3},
        {"~P(x) & x <= 100", 3},
    };
}

}  // namespace buchi::corpus

#endif
