#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "buchi/decide.hpp"
#include "buchi/growth.hpp"
#include "buchi/lineq.hpp"

using namespace buchi;

TEST_CASE("word census") {
    Dfa pairs = parse_regex("(10|01)*", 2);
    CHECK(density_words(pairs, 4) == 4);
    CHECK(density_words(pairs, 6) == 8);
    CHECK(density_words(pairs, 3) == 0);
    CHECK(density_words(parse_regex("1*0*", 2), 3) == 4);
}

TEST_CASE("value census") {
    Dfa closed = zero_closure(parse_regex("(10|01)*", 2));
    CHECK(density_values(closed, 3) == 2);  // 5 and 6
    CHECK(density_values(closed, 4) == 2);  // 9 and 10
    Dfa all = universal_dfa(2, 1);
    for (uint64_t n = 1; n <= 10; ++n) CHECK(density_values(all, n) == Int(1) << (n - 1));
    CHECK_THROWS_AS(density_values(parse_regex("(10|01)*", 2), 3), std::invalid_argument);
    CHECK_THROWS_AS(density_values(universal_dfa(2, 2), 3), std::invalid_argument);
}

TEST_CASE("value census against brute-force value enumeration") {
    // Membership of a value in [[ (10|01)* ]] is checked directly on its
    // canonical digits: padding with at most one zero must land in the block
    // language.
    auto in_set = [](long long v) {
        std::string bits;
        for (long long x = v; x > 0; x /= 2) bits = char('0' + (x & 1)) + bits;
        for (int pad = 0; pad < 2; ++pad) {
            std::string w = std::string(static_cast<size_t>(pad), '0') + bits;
            if (w.size() % 2 == 0) {
                bool ok = true;
                for (size_t i = 0; i < w.size(); i += 2)
                    if (!((w[i] == '1' && w[i + 1] == '0') || (w[i] == '0' && w[i + 1] == '1')))
                        ok = false;
                if (ok) return true;
            }
        }
        return v == 0;
    };
    Dfa closed = zero_closure(parse_regex("(10|01)*", 2));
    for (uint64_t n = 1; n <= 12; ++n) {
        long long expected = 0;
        for (long long v = 1LL << (n - 1); v < (1LL << n); ++v)
            if (in_set(v)) ++expected;
        CHECK(density_values(closed, n) == expected);
    }
}

TEST_CASE("cycle counts") {
    EqAutomaton eq = build_eq_automaton({{Int(1), Int(-1)}}, {Int(0)}, 2, 2);
    REQUIRE(eq.dfa.num_states() == 1);
    CHECK(cycle_count(eq.dfa, 0, 0, 2) == 4);
    CHECK(cycle_count(eq.dfa, 0, 0, 0) == 1);
    CHECK(cycle_count(eq.dfa, 0, 0, 5) == 32);

    Dfa v = build_vp_automaton(2, 2, 0, 1);
    for (uint64_t n = 0; n <= 6; ++n) CHECK(cycle_count(v, 1, 0, n) == 1);
    // State 0 loops exactly on x-digit zero, y-digit free: one projection.
    for (uint64_t n = 1; n <= 6; ++n) CHECK(cycle_count(v, 0, 0, n) == 1);
    // Projected onto the y track the loops are free.
    for (uint64_t n = 1; n <= 6; ++n) CHECK(cycle_count(v, 0, 1, n) == Int(1) << n);
}

TEST_CASE("cycle counts by brute-force loop enumeration") {
    EqAutomaton eq = build_eq_automaton({{Int(1), Int(2)}}, {Int(3)}, 2, 2);
    for (size_t q = 0; q < eq.dfa.num_states(); ++q) {
        for (uint64_t n = 0; n <= 6; ++n) {
            // Enumerate loop words explicitly.
            std::set<std::vector<Letter>> projections;
            std::function<void(int, std::vector<Letter>&)> walk = [&](int s, std::vector<Letter>& w) {
                if (w.size() == n) {
                    if (s == static_cast<int>(q)) {
                        std::vector<Letter> proj;
                        for (Letter l : w) proj.push_back(static_cast<Letter>(column_digit(l, 2, 2, 0)));
                        projections.insert(proj);
                    }
                    return;
                }
                for (auto [l, t] : eq.dfa.trans[static_cast<size_t>(s)]) {
                    w.push_back(l);
                    walk(t, w);
                    w.pop_back();
                }
            };
            std::vector<Letter> w;
            walk(static_cast<int>(q), w);
            CHECK(cycle_count(eq.dfa, static_cast<int>(q), 0, n) == projections.size());
        }
    }
}

TEST_CASE("quasi-polynomial fitting") {
    std::vector<std::pair<uint64_t, Int>> geometric;
    for (uint64_t n = 1; n <= 8; ++n) geometric.emplace_back(n, (Int(1) << n) - 1);
    auto fit = fit_eqp(geometric, 2);
    REQUIRE(fit.has_value());
    CHECK(fit->modulus == 1);
    CHECK(fit->degree() == 1);
    CHECK(fit->polys[0] == std::vector<Rat>{Rat(-1), Rat(1)});
    for (uint64_t n = 9; n <= 12; ++n) CHECK(fit->eval(n) == Rat((Int(1) << n) - 1));

    std::vector<std::pair<uint64_t, Int>> constant;
    for (uint64_t n = 1; n <= 8; ++n) constant.emplace_back(n, Int(1));
    auto cfit = fit_eqp(constant, 2);
    REQUIRE(cfit.has_value());
    CHECK(cfit->modulus == 1);
    CHECK(cfit->degree() == 0);
    CHECK(cfit->eval(11) == 1);

    std::vector<std::pair<uint64_t, Int>> alternating;
    for (uint64_t n = 1; n <= 8; ++n)
        alternating.emplace_back(n, n % 2 == 1 ? Int(1) << n : Int(0));
    auto afit = fit_eqp(alternating, 2);
    REQUIRE(afit.has_value());
    CHECK(afit->modulus == 2);
    for (uint64_t n = 9; n <= 12; ++n)
        CHECK(afit->eval(n) == (n % 2 == 1 ? Rat(Int(1) << n) : Rat(0)));

    std::vector<std::pair<uint64_t, Int>> quadratic;
    for (uint64_t n = 1; n <= 8; ++n) quadratic.emplace_back(n, (Int(1) << n) * (Int(1) << n));
    CHECK_FALSE(fit_eqp(quadratic, 2).has_value());
}

TEST_CASE("cycle-count fits predict beyond the sample window") {
    std::vector<LinSystem> corpus;
    {
        LinSystem s;
        s.base = 2;
        s.vars = {"x", "y"};
        s.num_shared_vars = 2;
        s.matrix = {{Int(1), Int(2)}};
        s.rhs = {Int(3)};
        corpus.push_back(s);
        s.valuations = {{0, 1}};
        corpus.push_back(s);
        LinSystem eqs;
        eqs.base = 3;
        eqs.vars = {"x", "y"};
        eqs.num_shared_vars = 2;
        eqs.matrix = {{Int(1), Int(-1)}};
        eqs.rhs = {Int(0)};
        corpus.push_back(eqs);
    }
    for (const auto& s : corpus) {
        SystemProduct prod = build_system_product(s);
        for (size_t q = 0; q < prod.dfa.num_states(); ++q) {
            for (int track = 0; track < prod.dfa.dim; ++track) {
                std::vector<std::pair<uint64_t, Int>> samples;
                for (uint64_t n = 1; n <= 8; ++n)
                    samples.emplace_back(n, cycle_count(prod.dfa, static_cast<int>(q), track, n));
                auto fit = fit_eqp(samples, s.base);
                REQUIRE(fit.has_value());
                CHECK(fit->degree() <= 1);
                for (uint64_t n = 9; n <= 12; ++n)
                    CHECK(fit->eval(n) == Rat(cycle_count(prod.dfa, static_cast<int>(q), track, n)));
            }
        }
    }
}

TEST_CASE("classification of the three regimes") {
    GrowthVerdict pairs = classify(parse_regex("(10|01)*", 2));
    CHECK(pairs.kind == GrowthKind::ExponentialBelowBase);
    CHECK(pairs.sigma1 == Sigma1Verdict::NotInSigma1);
    REQUIRE(pairs.two_cycles.has_value());

    GrowthVerdict ones = classify(parse_regex("1*0*", 2));
    CHECK(ones.kind == GrowthKind::Polynomial);
    CHECK(ones.degree == 1);
    CHECK(ones.sigma1 == Sigma1Verdict::InSigma1);
    CHECK_FALSE(ones.decomposition.empty());

    GrowthVerdict all = classify(universal_dfa(2, 1));
    CHECK(all.kind == GrowthKind::ExponentialEqualBase);
    CHECK(all.sigma1 == Sigma1Verdict::Unknown);
    CHECK_FALSE(all.complete_scc.empty());
}

TEST_CASE("classification is invariant under minimization and closure") {
    for (const char* pattern : {"(10|01)*", "1*0*", "(0|1)*", "1(0)*", "(100)*(11)*"}) {
        Dfa d = parse_regex(pattern, 2);
        GrowthVerdict base_verdict = classify(zero_closure(d));
        GrowthVerdict closed = classify(canonical(zero_closure(d)));
        CHECK(base_verdict.kind == closed.kind);
        CHECK(base_verdict.sigma1 == closed.sigma1);
        if (base_verdict.kind == GrowthKind::Polynomial) CHECK(base_verdict.degree == closed.degree);
    }
}

TEST_CASE("two-cycle certificates pump the census") {
    GrowthVerdict v = classify(zero_closure(parse_regex("(10|01)*", 2)));
    REQUIRE(v.two_cycles.has_value());
    const auto& cert = *v.two_cycles;
    size_t L = cert.cycle_a.size() + cert.cycle_b.size();
    // 2^k distinct words of length |prefix| + kL + |suffix| from block shuffles.
    for (uint64_t k = 1; k * L + cert.prefix.size() + cert.suffix.size() <= 14; ++k) {
        uint64_t n = cert.prefix.size() + k * L + cert.suffix.size();
        CHECK(density_words(v.canon, n) >= Int(1) << k);
    }
}

TEST_CASE("Szilard decompositions rebuild the language") {
    Dfa one_zero = parse_regex("1(0)*", 2);
    auto blocks = decompose_poly(one_zero);
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0].head.str() == "1");
    REQUIRE(blocks[0].blocks.size() == 1);
    CHECK(blocks[0].blocks[0].loop.str() == "0");
    CHECK(equivalent(block_regex_to_dfa(blocks), one_zero));

    Dfa ten_one = parse_regex("(10)*1", 2);
    auto tb = decompose_poly(ten_one);
    REQUIRE(tb.size() == 1);
    CHECK(tb[0].blocks.size() == 1);
    CHECK(tb[0].blocks[0].loop.str() == "10");
    CHECK(tb[0].blocks[0].tail.str() == "1");
    CHECK(equivalent(block_regex_to_dfa(tb), ten_one));

    Dfa ones_zeros = parse_regex("1*0*", 2);
    auto ob = decompose_poly(ones_zeros);
    CHECK(equivalent(block_regex_to_dfa(ob), ones_zeros));
    size_t max_blocks = 0;
    for (const auto& r : ob) max_blocks = std::max(max_blocks, r.blocks.size());
    CHECK(max_blocks == 2);

    CHECK_THROWS_AS(decompose_poly(parse_regex("(10|01)*", 2)), NotPolynomialError);
    CHECK(decompose_poly(empty_dfa(2, 1)).empty());
}

TEST_CASE("decomposition branch count stays within the state bound") {
    std::mt19937 rng(10);
    for (const char* pattern : {"1(0)*1(1)*", "(10)*(01)*", "12*0*", "(2)*(1)*(0)*"}) {
        Dfa d = parse_regex(pattern, 3);
        auto blocks = decompose_poly(d);
        CHECK(equivalent(block_regex_to_dfa(blocks), canonical(d)));
        for (const auto& r : blocks) CHECK(r.blocks.size() <= d.num_states());
    }
}
