#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "buchi/block_regex.hpp"
#include "buchi/lineq.hpp"

using namespace buchi;

namespace {

using ValueSet = std::set<std::vector<Int>>;

ValueSet decode_set(const Dfa& a, long long box, size_t pad) {
    ValueSet out;
    int d = a.dim;
    std::vector<Int> v(static_cast<size_t>(d), 0);
    std::function<void(int)> walk = [&](int track) {
        if (track == d) {
            if (a.accepts(encode(v, a.base, pad))) out.insert(v);
            return;
        }
        for (long long x = 0; x <= box; ++x) {
            v[static_cast<size_t>(track)] = x;
            walk(track + 1);
        }
    };
    walk(0);
    return out;
}

ValueSet brute_solutions(const LinSystem& s, long long box) {
    ValueSet out;
    size_t d = s.vars.size();
    std::vector<Int> v(d, 0);
    auto val_holds = [&](const Int& a, const Int& b) {
        if (b == 0 || a < 1) return false;
        Int x = a;
        while (x % s.base == 0) x /= s.base;
        if (x != 1) return false;
        return b % a == 0 && b % (a * s.base) != 0;
    };
    std::function<void(size_t)> walk = [&](size_t track) {
        if (track == d) {
            for (size_t r = 0; r < s.matrix.size(); ++r) {
                Int sum = 0;
                for (size_t c = 0; c < d; ++c) sum += s.matrix[r][c] * v[c];
                if (sum != s.rhs[r]) return;
            }
            for (auto [i, j] : s.valuations)
                if (!val_holds(v[static_cast<size_t>(i)], v[static_cast<size_t>(j)])) return;
            out.insert(v);
            return;
        }
        for (long long x = 0; x <= box; ++x) {
            v[track] = x;
            walk(track + 1);
        }
    };
    walk(0);
    return out;
}

}  // namespace

TEST_CASE("equation automaton for x + 2y = 3") {
    EqAutomaton eq = build_eq_automaton({{Int(1), Int(2)}}, {Int(3)}, 2, 2);
    ValueSet expected{{Int(3), Int(0)}, {Int(1), Int(1)}};
    CHECK(decode_set(eq.dfa, 8, 6) == expected);
    // State labels follow the transition law and stay inside the norm bound.
    for (size_t s = 0; s < eq.dfa.num_states(); ++s) {
        for (auto [l, t] : eq.dfa.trans[s]) {
            auto digits = unpack_column(l, 2, 2);
            Int expect = Int(2) * eq.state_labels[s][0] + digits[0] + 2 * digits[1];
            CHECK(eq.state_labels[static_cast<size_t>(t)][0] == expect);
        }
        Int norm = eq.state_labels[s][0] < 0 ? Int(-eq.state_labels[s][0]) : eq.state_labels[s][0];
        CHECK(norm <= eq.norm_bound);
    }
    CHECK(eq.state_labels[static_cast<size_t>(eq.dfa.initial)] == std::vector<Int>{Int(0)});
}

TEST_CASE("equation automaton for x = 0 is the zero-column loop") {
    EqAutomaton eq = build_eq_automaton({{Int(1)}}, {Int(0)}, 2, 1);
    CHECK(equivalent(canonical(eq.dfa), parse_regex("0*", 2)));
}

TEST_CASE("equality automaton x = y") {
    EqAutomaton eq = build_eq_automaton({{Int(1), Int(-1)}}, {Int(0)}, 2, 2);
    for (long long n = 0; n <= 64; ++n) {
        CHECK(eq.dfa.accepts(encode({Int(n), Int(n)}, 2)));
        CHECK_FALSE(eq.dfa.accepts(encode({Int(n), Int(n + 1)}, 2, 8)));
    }
    CHECK(eq.dfa.num_states() == 1);
}

TEST_CASE("contradictory equations give the empty automaton") {
    EqAutomaton eq = build_eq_automaton({{Int(2)}}, {Int(1)}, 2, 1);
    CHECK(is_empty_language(eq.dfa));
}

TEST_CASE("valuation automaton matches the two-state table") {
    Dfa v = build_vp_automaton(2, 2, 0, 1);
    CHECK(v.num_states() == 2);
    CHECK(v.accepts(word_from_tracks(2, {"0100", "1100"})));  // (4, 12)
    CHECK_FALSE(v.accepts(encode({Int(4), Int(0)}, 2)));
    CHECK_FALSE(v.accepts(encode({Int(3), Int(6)}, 2)));
    // Base 10, wider tuples, arbitrary placement of the tracks.
    Dfa w = build_vp_automaton(10, 3, 2, 0);
    CHECK(w.accepts(encode({Int(2500), Int(7), Int(100)}, 10)));
    CHECK_FALSE(w.accepts(encode({Int(2500), Int(7), Int(10)}, 10)));
}

TEST_CASE("valuation automaton against ground evaluation") {
    std::mt19937 rng(31337);
    for (int base : {2, 3}) {
        Dfa v = build_vp_automaton(base, 2, 0, 1);
        Formula f = parse_formula("V(x,y)", base);
        for (int iter = 0; iter < 400; ++iter) {
            Int x = rng() % 700;
            Int y = rng() % 700;
            Assignment sigma{{"x", x}, {"y", y}};
            CHECK(v.accepts(encode({x, y}, base, 1)) == eval_ground(f, sigma));
        }
    }
}

TEST_CASE("system automaton solves equations with valuation constraints") {
    LinSystem s;
    s.base = 2;
    s.vars = {"x", "y"};
    s.num_shared_vars = 2;
    s.matrix = {{Int(1), Int(2)}};
    s.rhs = {Int(3)};
    s.valuations = {{0, 1}};
    Dfa d = build_system_automaton(s);
    CHECK(decode_set(d, 8, 6) == ValueSet{{Int(1), Int(1)}});

    LinSystem contradictory = s;
    contradictory.matrix.push_back({Int(1), Int(2)});
    contradictory.rhs.push_back(Int(4));
    CHECK(is_empty_language(build_system_automaton(contradictory)));

    LinSystem no_val = s;
    no_val.valuations.clear();
    EqAutomaton eq = build_eq_automaton(s.matrix, s.rhs, 2, 2);
    CHECK(equivalent(build_system_automaton(no_val), canonical(eq.dfa)));
}

TEST_CASE("labeled system product keeps tuple labels and the same language") {
    LinSystem s;
    s.base = 2;
    s.vars = {"x", "y"};
    s.num_shared_vars = 2;
    s.matrix = {{Int(1), Int(2)}};
    s.rhs = {Int(3)};
    s.valuations = {{0, 1}};
    SystemProduct prod = build_system_product(s);
    CHECK(equivalent(canonical(prod.dfa), build_system_automaton(s)));
    REQUIRE(prod.state_labels.size() == prod.dfa.num_states());
    for (const auto& lab : prod.state_labels) CHECK(lab.find('|') != std::string::npos);
}

TEST_CASE("reach-char agrees with stepping the transition law") {
    std::vector<std::vector<Int>> a{{Int(1), Int(2)}};
    // One step from 0 on column (1,1) lands on 3.
    DigitWord step1 = word_from_tracks(2, {"1", "1"});
    CHECK(check_reach_char({Int(0)}, {Int(3)}, step1, a, 2));
    CHECK_FALSE(check_reach_char({Int(0)}, {Int(2)}, step1, a, 2));
    DigitWord zeros = word_from_tracks(2, {"0", "0"});
    CHECK(check_reach_char({Int(1)}, {Int(2)}, zeros, a, 2));
    CHECK(step_transition_law({Int(1)}, zeros, a, 2) == std::vector<Int>{Int(2)});
}

TEST_CASE("reach-char equals word-walk reachability on random systems") {
    std::mt19937 rng(777);
    for (int iter = 0; iter < 12; ++iter) {
        int base = iter % 2 ? 2 : 3;
        size_t m = 1 + rng() % 2;
        size_t d = 1 + rng() % 2;
        std::vector<std::vector<Int>> a(m, std::vector<Int>(d));
        std::vector<Int> c(m);
        for (auto& row : a)
            for (auto& e : row) e = Int(rng() % 7) - 3;
        for (auto& e : c) e = Int(rng() % 7) - 3;
        EqAutomaton eq = build_eq_automaton(a, c, base, static_cast<int>(d));
        if (eq.dfa.num_states() == 0) continue;
        Letter letters = alphabet_size(base, static_cast<int>(d));
        // All words of length <= 6, all automaton states as sources.
        std::vector<DigitWord> words{DigitWord(base, static_cast<int>(d))};
        for (size_t len = 0; len < 6; ++len) {
            size_t start = 0, stop = words.size();
            for (size_t i = start; i < stop; ++i)
                if (words[i].size() == len)
                    for (Letter l = 0; l < letters; ++l) {
                        DigitWord w = words[i];
                        w.push_letter(l);
                        words.push_back(std::move(w));
                    }
        }
        for (const auto& w : words) {
            for (const auto& src : eq.state_labels) {
                std::vector<Int> dst = step_transition_law(src, w, a, base);
                CHECK(check_reach_char(src, dst, w, a, base));
                std::vector<Int> wrong = dst;
                wrong[0] += 1;
                CHECK_FALSE(check_reach_char(src, wrong, w, a, base));
            }
        }
    }
}
