#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <chrono>
#include <cstdio>
#include <deque>
#include <iostream>
#include <random>
#include <sstream>

#include "buchi/decide.hpp"
#include "buchi/growth.hpp"
#include "buchi/lineq.hpp"
#include "buchi/synthesis.hpp"
#include "corpus.hpp"

using namespace buchi;

namespace {

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::cout << "ACCEPTANCE " << criterion << " " << name << ": " << (pass ? "PASS" : "FAIL")
              << " (" << detail << ")" << std::endl;
}

std::string run_cli(const std::string& args, int* exit_code = nullptr) {
    std::string cmd = std::string(BUCHI_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::string out;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    if (exit_code) *exit_code = WEXITSTATUS(status);
    return out;
}

// Membership of a value in [[ (10|01)* ]]_2, decided directly on digits.
bool in_pair_set(long long v) {
    if (v == 0) return true;
    std::string bits;
    for (long long x = v; x > 0; x /= 2) bits = char('0' + (x & 1)) + bits;
    for (int pad = 0; pad < 2; ++pad) {
        std::string w = std::string(static_cast<size_t>(pad), '0') + bits;
        if (w.size() % 2) continue;
        bool ok = true;
        for (size_t i = 0; i < w.size(); i += 2)
            if (!((w[i] == '1' && w[i + 1] == '0') || (w[i] == '0' && w[i + 1] == '1'))) ok = false;
        if (ok) return true;
    }
    return false;
}

std::vector<Int> parse_density_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    std::vector<Int> counts;
    while (std::getline(in, line)) {
        auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        counts.emplace_back(line.substr(comma + 1));
    }
    return counts;
}

// Shortest word between states of a DFA, for certificate assembly.
std::optional<std::vector<Letter>> bfs_between(const Dfa& a, int src,
                                               const std::function<bool(int)>& pred) {
    std::vector<int> parent(a.num_states(), -2);
    std::vector<Letter> via(a.num_states(), 0);
    std::deque<int> queue{src};
    parent[static_cast<size_t>(src)] = -1;
    if (pred(src)) return std::vector<Letter>{};
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (auto [l, t] : a.trans[static_cast<size_t>(s)]) {
            if (parent[static_cast<size_t>(t)] != -2) continue;
            parent[static_cast<size_t>(t)] = s;
            via[static_cast<size_t>(t)] = l;
            if (pred(t)) {
                std::vector<Letter> w;
                for (int c = t; parent[static_cast<size_t>(c)] != -1; c = parent[static_cast<size_t>(c)])
                    w.push_back(via[static_cast<size_t>(c)]);
                std::reverse(w.begin(), w.end());
                return w;
            }
            queue.push_back(t);
        }
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("criterion 1: separation witness") {
    Stopwatch watch;
    bool pass = true;
    std::string detail;

    // Exact value census via the CLI against direct enumeration.
    std::string csv = run_cli("-p 2 density --regex \"(10|01)*\" --mode values --upto 16");
    std::vector<Int> counts = parse_density_csv(csv);
    pass = counts.size() == 16;
    for (uint64_t n = 1; n <= 16 && pass; ++n) {
        long long expected = 0;
        for (long long v = 1LL << (n - 1); v < (1LL << n); ++v)
            if (in_pair_set(v)) ++expected;
        if (counts[n - 1] != expected) {
            pass = false;
            detail = "census mismatch at n=" + std::to_string(n);
        }
        // d_M(n) <= 2^(n/2), squared to stay in integers for odd n.
        if (counts[n - 1] * counts[n - 1] > (Int(1) << n)) {
            pass = false;
            detail = "bound 2^(n/2) violated at n=" + std::to_string(n);
        }
    }
    CHECK(counts.size() == 16);
    if (counts.size() == 16 && (counts[2] != 2 || counts[3] != 2)) {
        pass = false;
        detail = "d_M(3), d_M(4) expected to be 2, 2";
    }

    std::string verdict = run_cli("-p 2 classify --regex \"(10|01)*\"");
    if (verdict.find("Exponential(below-p)") == std::string::npos ||
        verdict.find("NotInSigma1") == std::string::npos) {
        pass = false;
        detail = "classify verdict wrong";
    }

    Dfa closed = zero_closure(parse_regex("(10|01)*", 2));
    try {
        synth_sigma2(closed);  // validates its own round trip
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("sigma2 round trip: ") + e.what();
    }

    double secs = watch.seconds();
    if (secs >= 10.0) {
        pass = false;
        detail = "too slow";
    }
    report(1, "separation witness", pass,
           detail.empty() ? "census 1..16 exact, verdict below-p/NotInSigma1, round trip ok, " +
                                std::to_string(secs) + "s"
                          : detail);
    REQUIRE(pass);
}

TEST_CASE("criterion 2: existential synthesis round trips") {
    Stopwatch watch;
    auto regexes = corpus::polynomial_regexes();
    REQUIRE(regexes.size() >= 20);
    size_t failures = 0;
    std::string first_failure;
    for (const auto& r : regexes) {
        try {
            synth_existential({r});  // validates compile(formula) == closure(dfa(r))
        } catch (const std::exception& e) {
            ++failures;
            if (first_failure.empty()) first_failure = r.str() + ": " + e.what();
        }
    }
    double secs = watch.seconds();
    bool pass = failures == 0 && secs < 60.0;
    report(2, "sigma1 synthesis round trips", pass,
           std::to_string(regexes.size()) + " regexes, " + std::to_string(failures) +
               " failures, " + std::to_string(secs) + "s" +
               (first_failure.empty() ? "" : "; first: " + first_failure));
    REQUIRE(pass);
}

TEST_CASE("criterion 3: one-alternation synthesis round trips") {
    Stopwatch watch;
    std::vector<std::pair<std::string, Dfa>> corpus_automata;
    corpus_automata.emplace_back("multiples of 3", compile(parse_formula("E y. x = 3*y", 2)));
    corpus_automata.emplace_back("zero-closed (10|01)*", zero_closure(parse_regex("(10|01)*", 2)));
    corpus_automata.emplace_back("evens", compile(parse_formula("E y. x = 2*y", 2)));
    corpus_automata.emplace_back("powers of 2", compile(parse_formula("V(x,x)", 2)));
    corpus_automata.emplace_back("x mod 3 = 1", compile(parse_formula("E y. x = 3*y + 1", 2)));
    corpus_automata.emplace_back("all naturals", universal_dfa(2, 1));
    REQUIRE(corpus_automata.size() >= 5);
    size_t failures = 0;
    std::string first_failure;
    size_t small = 0;
    for (const auto& [name, a] : corpus_automata) {
        if (a.num_states() <= 4) ++small;
        try {
            Formula f = synth_sigma2(a);
            ShapeAudit audit = quantifier_shape(f);
            if (audit.exists_under_forall || audit.alternations > 1)
                throw std::logic_error("quantifier shape not one-alternation");
        } catch (const std::exception& e) {
            ++failures;
            if (first_failure.empty()) first_failure = name + ": " + e.what();
        }
    }
    double secs = watch.seconds();
    bool pass = failures == 0 && secs < 300.0 && small >= 5;
    report(3, "sigma2 synthesis round trips", pass,
           std::to_string(corpus_automata.size()) + " automata, " + std::to_string(failures) +
               " failures, " + std::to_string(secs) + "s" +
               (first_failure.empty() ? "" : "; first: " + first_failure));
    REQUIRE(pass);
}

TEST_CASE("criterion 4: reach-char agrees with walking the transition law") {
    Stopwatch watch;
    std::mt19937 rng(20260810);
    uint64_t checked = 0, disagreements = 0;
    int systems = 0;
    while (systems < 12) {
        int base = systems % 2 ? 3 : 2;
        size_t m = 1 + rng() % 2;
        size_t d = 1 + rng() % (base == 2 ? 3 : 2);
        std::vector<std::vector<Int>> a(m, std::vector<Int>(d));
        std::vector<Int> c(m);
        for (auto& row : a)
            for (auto& e : row) e = Int(rng() % 7) - 3;
        for (auto& e : c) e = Int(rng() % 7) - 3;
        EqAutomaton eq = build_eq_automaton(a, c, base, static_cast<int>(d));
        if (is_empty_language(eq.dfa)) continue;
        ++systems;
        // Sources: every automaton state (evenly sampled beyond a dozen).
        std::vector<std::vector<Int>> sources;
        size_t step = std::max<size_t>(1, eq.state_labels.size() / 12);
        for (size_t i = 0; i < eq.state_labels.size(); i += step) sources.push_back(eq.state_labels[i]);
        // All words of length <= 5.
        std::vector<DigitWord> words{DigitWord(base, static_cast<int>(d))};
        Letter letters = alphabet_size(base, static_cast<int>(d));
        for (size_t i = 0; i < words.size(); ++i) {
            if (words[i].size() >= 5) continue;
            for (Letter l = 0; l < letters; ++l) {
                DigitWord w = words[i];
                w.push_letter(l);
                words.push_back(std::move(w));
            }
        }
        for (const auto& w : words) {
            for (const auto& src : sources) {
                std::vector<Int> dst = step_transition_law(src, w, a, base);
                if (!check_reach_char(src, dst, w, a, base)) ++disagreements;
                std::vector<Int> wrong = dst;
                wrong[rng() % m] += 1 + rng() % 3;
                if (check_reach_char(src, wrong, w, a, base)) ++disagreements;
                checked += 2;
            }
        }
    }
    bool pass = disagreements == 0 && systems >= 10;
    report(4, "reach-char oracle agreement", pass,
           std::to_string(systems) + " systems, " + std::to_string(checked) + " checks, " +
               std::to_string(disagreements) + " disagreements, " +
               std::to_string(watch.seconds()) + "s");
    REQUIRE(pass);
}

TEST_CASE("criterion 5: cycle counts are linear quasi-polynomials in base^n") {
    Stopwatch watch;
    size_t states_checked = 0, failures = 0;
    std::string first_failure;
    for (const auto& spec : corpus::fixed_systems()) {
        LinSystem s = corpus::to_lin_system(spec);
        SystemProduct prod = build_system_product(s);
        for (size_t q = 0; q < prod.dfa.num_states(); ++q) {
            for (int track = 0; track < prod.dfa.dim; ++track) {
                ++states_checked;
                std::vector<std::pair<uint64_t, Int>> samples;
                for (uint64_t n = 1; n <= 8; ++n)
                    samples.emplace_back(n, cycle_count(prod.dfa, static_cast<int>(q), track, n));
                auto fit = fit_eqp(samples, s.base);
                bool ok = fit.has_value() && fit->degree() <= 1;
                for (uint64_t n = 9; n <= 12 && ok; ++n)
                    if (fit->eval(n) != Rat(cycle_count(prod.dfa, static_cast<int>(q), track, n)))
                        ok = false;
                if (!ok) {
                    ++failures;
                    if (first_failure.empty())
                        first_failure = s.str() + " state " + prod.state_labels[q] + " track " +
                                        std::to_string(track);
                }
            }
        }
    }
    bool pass = failures == 0;
    report(5, "quasi-polynomial cycle counts", pass,
           std::to_string(states_checked) + " (state,track) pairs fitted on n=1..8, predicted 9..12, " +
               std::to_string(failures) + " failures, " + std::to_string(watch.seconds()) + "s" +
               (first_failure.empty() ? "" : "; first: " + first_failure));
    REQUIRE(pass);
}

TEST_CASE("criterion 6: growth dichotomy for existential formulas") {
    Stopwatch watch;
    size_t failures = 0;
    std::string first_failure;
    for (const auto& [text, base] : corpus::existential_formulas()) {
        Formula f = parse_formula(text, base);
        Dfa d = compile(f);
        GrowthVerdict v = classify(d);
        std::string why;
        if (v.kind == GrowthKind::ExponentialBelowBase) {
            // An existential formula in the strictly-between regime would
            // contradict the density dichotomy.
            why = "below-base verdict for an existential formula";
        } else if (v.kind == GrowthKind::Polynomial) {
            size_t branches = std::max<size_t>(1, v.decomposition.size());
            for (uint64_t n = 1; n <= 16 && why.empty(); ++n) {
                Int bound = Int(branches);
                for (int i = 0; i < v.degree; ++i) bound *= n + 1;
                if (density_values(d, n) > bound)
                    why = "polynomial envelope broken at n=" + std::to_string(n);
            }
        } else {
            // Geometric lower bound along the complete-SCC certificate.
            const Dfa& canon = v.canon;
            REQUIRE_FALSE(v.complete_scc.empty());
            int entry = v.complete_scc[0];
            auto prefix = bfs_between(canon, canon.initial, [&](int s) { return s == entry; });
            REQUIRE(prefix.has_value());
            std::vector<int> scc = v.complete_scc;
            std::vector<Int> counts(scc.size(), 0);
            counts[0] = 1;  // paths from entry, inside the SCC
            auto index_of = [&](int s) {
                for (size_t i = 0; i < scc.size(); ++i)
                    if (scc[i] == s) return static_cast<int>(i);
                return -1;
            };
            for (uint64_t k = 1; k <= 16 && why.empty(); ++k) {
                std::vector<Int> next(scc.size(), 0);
                for (size_t i = 0; i < scc.size(); ++i) {
                    if (counts[i] == 0) continue;
                    for (auto [l, t] : canon.trans[static_cast<size_t>(scc[i])]) {
                        int j = index_of(t);
                        if (j >= 0) next[static_cast<size_t>(j)] += counts[i];
                    }
                }
                counts = std::move(next);
                // All base letters stay internal, so the counts total base^k.
                Int total = 0;
                for (const Int& c : counts) total += c;
                Int expect = 1;
                for (uint64_t i = 0; i < k; ++i) expect *= canon.base;
                if (total != expect) {
                    why = "complete SCC certificate lost paths at k=" + std::to_string(k);
                    break;
                }
                size_t best = 0;
                for (size_t i = 0; i < scc.size(); ++i)
                    if (counts[i] > counts[best]) best = i;
                auto suffix = bfs_between(canon, scc[best],
                                          [&](int s) { return canon.accepting[static_cast<size_t>(s)]; });
                if (!suffix) {
                    why = "certificate state cannot accept";
                    break;
                }
                uint64_t n = prefix->size() + k + suffix->size();
                if (n > 16) break;
                if (density_words(canon, n) < counts[best])
                    why = "geometric lower bound broken at n=" + std::to_string(n);
            }
        }
        if (!why.empty()) {
            ++failures;
            if (first_failure.empty()) first_failure = text + ": " + why;
        }
    }
    bool pass = failures == 0;
    report(6, "growth dichotomy", pass,
           std::to_string(corpus::existential_formulas().size()) + " formulas, " +
               std::to_string(failures) + " inconsistencies, " + std::to_string(watch.seconds()) +
               "s" + (first_failure.empty() ? "" : "; first: " + first_failure));
    REQUIRE(pass);
}

TEST_CASE("criterion 7: membership equals ground evaluation") {
    Stopwatch watch;
    std::mt19937 rng(90125);
    EvalOptions opts;
    opts.quantifier_cap = 1 << 11;
    uint64_t checked = 0, disagreements = 0;
    for (const auto& [text, base] : corpus::ground_check_formulas()) {
        Formula f = parse_formula(text, base);
        Dfa d = compile(f);
        auto vars = free_variables(f);
        for (int iter = 0; iter < 200; ++iter) {
            Assignment sigma;
            std::vector<Int> values;
            for (const auto& v : vars) {
                Int value = rng() % 1024;
                sigma[v] = value;
                values.push_back(value);
            }
            bool aut = d.accepts(encode(values, base, 1));
            bool ground = eval_ground(f, sigma, opts);
            if (aut != ground) ++disagreements;
            ++checked;
        }
    }
    bool pass = disagreements == 0;
    report(7, "membership vs ground evaluation", pass,
           std::to_string(checked) + " instances, " + std::to_string(disagreements) +
               " disagreements, " + std::to_string(watch.seconds()) + "s");
    REQUIRE(pass);
}

TEST_CASE("criterion 8: full-corpus determinism") {
    Stopwatch watch;
    auto one_run = [&] {
        std::string blob;
        for (const auto& [text, base] : corpus::ground_check_formulas())
            blob += write_automaton(compile(parse_formula(text, base)));
        auto regexes = corpus::polynomial_regexes();
        for (size_t i = 0; i < regexes.size(); i += 7)
            blob += print_formula(synth_existential({regexes[i]})) + "\n";
        blob += print_formula(synth_sigma2(compile(parse_formula("E y. x = 2*y", 2)))) + "\n";
        blob += print_formula(synth_sigma2(compile(parse_formula("E y. x = 3*y", 2)))) + "\n";
        Dfa closed = zero_closure(parse_regex("(10|01)*", 2));
        std::ostringstream census;
        for (uint64_t n = 1; n <= 16; ++n) census << density_values(closed, n) << ",";
        blob += census.str();
        return blob;
    };
    std::string first = one_run();
    std::string second = one_run();
    bool pass = first == second;

    // Cross-process determinism through the CLI.
    for (const std::string args :
         {std::string("-p 2 compile \"E y. x = 2*y & V(y,y)\""),
          std::string("-p 2 synth --regex \"(10)*\" --target sigma1"),
          std::string("-p 2 density --regex \"(10|01)*\" --mode values --upto 12")}) {
        if (run_cli(args) != run_cli(args)) pass = false;
    }
    report(8, "determinism", pass,
           "in-process corpus blob " + std::to_string(first.size()) + " bytes + 3 CLI commands, " +
               std::to_string(watch.seconds()) + "s");
    REQUIRE(pass);
}
