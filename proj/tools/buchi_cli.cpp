#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "buchi/decide.hpp"
#include "buchi/growth.hpp"
#include "buchi/synthesis.hpp"

using namespace buchi;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitExplosion = 3;
constexpr int kExitDim = 4;
constexpr int kExitInfeasible = 5;
constexpr int kExitRoundTrip = 6;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct InputSpec {
    std::string formula;       // inline text
    std::string formula_file;  // -f
    std::string aut_path;      // --aut
    std::string regex;         // --regex
};

// Resolves one of formula / file / automaton / regex into an automaton.
Dfa load_automaton(const InputSpec& in, int base, std::vector<std::string>* vars_out = nullptr) {
    int sources = !in.formula.empty() + !in.formula_file.empty() + !in.aut_path.empty() +
                  !in.regex.empty();
    if (sources != 1) throw CLI::ValidationError("give exactly one of formula, -f, --aut, --regex");
    if (!in.aut_path.empty()) return read_automaton_file(in.aut_path);
    if (!in.regex.empty()) return parse_regex(in.regex, base);
    std::string text = in.formula.empty() ? read_file(in.formula_file) : in.formula;
    Formula f = parse_formula(text, base);
    if (vars_out) *vars_out = free_variables(f);
    return compile(f);
}

std::string growth_kind_str(const GrowthVerdict& v) {
    switch (v.kind) {
        case GrowthKind::Polynomial: return "Polynomial(degree " + std::to_string(v.degree) + ")";
        case GrowthKind::ExponentialBelowBase: return "Exponential(below-p)";
        case GrowthKind::ExponentialEqualBase: return "Exponential(equal-p)";
    }
    return "?";
}

std::string sigma1_str(Sigma1Verdict s) {
    switch (s) {
        case Sigma1Verdict::InSigma1: return "InSigma1";
        case Sigma1Verdict::NotInSigma1: return "NotInSigma1";
        case Sigma1Verdict::Unknown: return "Unknown";
    }
    return "?";
}

int run(int argc, char** argv) {
    CLI::App app{"base-p arithmetic-to-automata toolkit"};
    app.require_subcommand(1);
    int base = 2;
    app.add_option("-p,--base", base, "numeral base (>= 2)")->capture_default_str();

    // compile
    auto* cmd_compile = app.add_subcommand("compile", "compile a formula to an automaton file");
    InputSpec cin_spec;
    std::string out_path;
    cmd_compile->add_option("formula", cin_spec.formula, "formula text");
    cmd_compile->add_option("-f,--file", cin_spec.formula_file, "read the formula from a file");
    cmd_compile->add_option("-o,--output", out_path, "output path (default stdout)");

    // decide
    auto* cmd_decide = app.add_subcommand("decide", "report SAT/UNSAT with a witness");
    InputSpec din_spec;
    cmd_decide->add_option("formula", din_spec.formula, "formula text");
    cmd_decide->add_option("-f,--file", din_spec.formula_file, "read the formula from a file");

    // enum
    auto* cmd_enum = app.add_subcommand("enum", "list solutions in value order");
    InputSpec ein_spec;
    size_t limit = 10;
    cmd_enum->add_option("formula", ein_spec.formula, "formula text");
    cmd_enum->add_option("-f,--file", ein_spec.formula_file, "read the formula from a file");
    cmd_enum->add_option("--limit", limit, "number of solutions")->capture_default_str();

    // density
    auto* cmd_density = app.add_subcommand("density", "census CSV for words or values");
    InputSpec nin_spec;
    std::string mode = "values";
    uint64_t upto = 12;
    cmd_density->add_option("formula", nin_spec.formula, "formula text");
    cmd_density->add_option("-f,--file", nin_spec.formula_file, "read the formula from a file");
    cmd_density->add_option("--aut", nin_spec.aut_path, "automaton file");
    cmd_density->add_option("--regex", nin_spec.regex, "regular expression over digits");
    cmd_density->add_option("--mode", mode, "words|values")->check(CLI::IsMember({"words", "values"}));
    cmd_density->add_option("--upto", upto, "largest length")->capture_default_str();
    std::string density_out;
    cmd_density->add_option("-o,--output", density_out, "output path (default stdout)");

    // classify
    auto* cmd_classify = app.add_subcommand("classify", "growth and definability verdict");
    InputSpec kin_spec;
    cmd_classify->add_option("formula", kin_spec.formula, "formula text");
    cmd_classify->add_option("-f,--file", kin_spec.formula_file, "read the formula from a file");
    cmd_classify->add_option("--aut", kin_spec.aut_path, "automaton file");
    cmd_classify->add_option("--regex", kin_spec.regex, "regular expression over digits");

    // synth
    auto* cmd_synth = app.add_subcommand("synth", "synthesize a formula from a language");
    InputSpec sin_spec;
    std::string target = "sigma1";
    cmd_synth->add_option("--aut", sin_spec.aut_path, "automaton file");
    cmd_synth->add_option("--regex", sin_spec.regex, "regular expression over digits");
    cmd_synth->add_option("--target", target, "sigma1|sigma2")
        ->check(CLI::IsMember({"sigma1", "sigma2"}));

    CLI11_PARSE(app, argc, argv);
    if (base < 2) throw CLI::ValidationError("base must be >= 2");

    if (cmd_compile->parsed()) {
        std::string text =
            cin_spec.formula.empty() ? read_file(cin_spec.formula_file) : cin_spec.formula;
        Formula f = parse_formula(text, base);
        Dfa d = compile(f);
        std::string payload = write_automaton(d);
        if (out_path.empty()) {
            std::cout << payload;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            out << payload;
        }
        auto vars = free_variables(f);
        std::cerr << "states " << d.num_states() << "\n";
        std::cerr << "vars";
        for (const auto& v : vars) std::cerr << ' ' << v;
        std::cerr << "\n";
        if (is_empty_language(d)) std::cerr << "language UNSAT (empty)\n";
        return 0;
    }

    if (cmd_decide->parsed()) {
        std::string text =
            din_spec.formula.empty() ? read_file(din_spec.formula_file) : din_spec.formula;
        Formula f = parse_formula(text, base);
        SatResult r = is_sat(f);
        if (!r.sat) {
            std::cout << "UNSAT\n";
        } else {
            std::cout << "SAT";
            for (const auto& [v, value] : r.witness) std::cout << ' ' << v << '=' << value;
            std::cout << "\n";
        }
        return 0;
    }

    if (cmd_enum->parsed()) {
        std::string text =
            ein_spec.formula.empty() ? read_file(ein_spec.formula_file) : ein_spec.formula;
        Formula f = parse_formula(text, base);
        auto vars = free_variables(f);
        for (const auto& sol : enumerate_solutions(f, limit)) {
            bool first = true;
            for (const auto& v : vars) {
                if (!first) std::cout << ' ';
                std::cout << sol.at(v);
                first = false;
            }
            std::cout << "\n";
        }
        return 0;
    }

    if (cmd_density->parsed()) {
        Dfa d = load_automaton(nin_spec, base);
        if (!nin_spec.regex.empty() && mode == "values") d = zero_closure(d);
        if (mode == "values" && d.dim != 1) {
            std::cerr << "error: values mode needs a dim-1 language\n";
            return kExitDim;
        }
        if (mode == "values" && !is_zero_closed(d)) {
            std::cerr << "error: values mode needs a zero-closed automaton (apply zero closure "
                         "first)\n";
            return kExitDim;
        }
        std::ostringstream csv;
        csv << "n,count\n";
        for (uint64_t n = 1; n <= upto; ++n)
            csv << n << ',' << (mode == "words" ? density_words(d, n) : density_values(d, n))
                << "\n";
        if (density_out.empty()) {
            std::cout << csv.str();
        } else {
            std::ofstream out(density_out, std::ios::binary);
            out << csv.str();
        }
        return 0;
    }

    if (cmd_classify->parsed()) {
        Dfa d = load_automaton(kin_spec, base);
        if (d.dim != 1) {
            std::cerr << "error: classify needs a dim-1 language\n";
            return kExitDim;
        }
        // Verdicts concern the encoded value set; make the input value-faithful.
        GrowthVerdict v = classify(zero_closure(d));
        std::cout << "kind " << growth_kind_str(v) << "\n";
        std::cout << "sigma1 " << sigma1_str(v.sigma1) << "\n";
        std::cout << "evidence " << v.evidence << "\n";
        if (v.kind == GrowthKind::Polynomial) {
            std::cout << "decomposition";
            for (const auto& r : v.decomposition) std::cout << ' ' << r.str();
            std::cout << "\n";
        }
        return 0;
    }

    if (cmd_synth->parsed()) {
        if ((sin_spec.aut_path.empty()) == (sin_spec.regex.empty()))
            throw CLI::ValidationError("give exactly one of --aut, --regex");
        Dfa d = sin_spec.aut_path.empty() ? parse_regex(sin_spec.regex, base)
                                          : read_automaton_file(sin_spec.aut_path);
        if (d.dim != 1) {
            std::cerr << "error: synthesis needs a dim-1 language\n";
            return kExitDim;
        }
        Dfa closed_input = zero_closure(d);
        if (target == "sigma1") {
            GrowthVerdict v = classify(closed_input);
            if (v.kind != GrowthKind::Polynomial) {
                std::cerr << "error: sigma1 target infeasible: classify says " << growth_kind_str(v)
                          << " / " << sigma1_str(v.sigma1) << "\n";
                return kExitInfeasible;
            }
            std::vector<BlockRegex> blocks = decompose_poly(canonical_representation(closed_input));
            if (blocks.empty()) blocks.push_back(BlockRegex{DigitWord(base, 1), {}});
            Formula f = synth_existential(blocks);
            std::cout << "# synthesized existential formula (block decomposition, "
                      << blocks.size() << " branch(es))\n";
            std::cout << "# loop step convention: base^(loop word length), gap gates offset by "
                         "trailing zeros\n";
            std::cout << "# round-trip: ok\n";
            std::cout << print_formula(f) << "\n";
            return 0;
        }
        Dfa closed = closed_input;
        Formula f = synth_sigma2(closed);
        std::cout << "# synthesized one-alternation formula (run encoding over "
                  << determinize_minimize(reverse(closed)).num_states() << " reversed states)\n";
        std::cout << "# round-trip: ok\n";
        std::cout << print_formula(f) << "\n";
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const StateExplosionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitExplosion;
    } catch (const DnfExplosionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitExplosion;
    } catch (const RoundTripError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRoundTrip;
    } catch (const CLI::Error&) {
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
