#include "buchi/decide.hpp"

#include <algorithm>
#include <set>

#include "buchi/lineq.hpp"

namespace buchi {

namespace {

// A compiled subformula: automaton over its own free variables, tracks
// named by `vars` in ascending scope rank.
struct Compiled {
    Dfa dfa;
    std::vector<std::string> vars;
};

struct Compiler {
    int base;
    CompileOptions opts;
    std::map<std::string, int> rank;  // scope order of every variable

    int rank_of(const std::string& v) {
        auto it = rank.find(v);
        if (it == rank.end()) throw std::logic_error("unranked variable " + v);
        return it->second;
    }

    // Extends both sides to the union of their track sets.
    std::pair<Compiled, Compiled> align(Compiled a, Compiled b) {
        std::vector<std::string> merged;
        std::merge(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                   std::back_inserter(merged),
                   [&](const std::string& x, const std::string& y) { return rank_of(x) < rank_of(y); });
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        auto extend = [&](Compiled c) {
            for (size_t i = 0; i < merged.size(); ++i) {
                if (i < c.vars.size() && c.vars[i] == merged[i]) continue;
                c.dfa = insert_track(c.dfa, static_cast<int>(i));
                c.vars.insert(c.vars.begin() + static_cast<long>(i), merged[i]);
            }
            return c;
        };
        return {extend(std::move(a)), extend(std::move(b))};
    }

    Compiled combine(Compiled a, Compiled b, BoolOp op) {
        auto [ea, eb] = align(std::move(a), std::move(b));
        Compiled out;
        out.vars = ea.vars;
        out.dfa = product(ea.dfa, eb.dfa, op);
        guard(out.dfa);
        return out;
    }

    void guard(const Dfa& d) {
        if (d.num_states() > opts.state_cap)
            throw StateExplosionError("compile: state cap exceeded");
    }

    Compiled compile_linear(const LinearAtom& atom) {
        Compiled out;
        for (const auto& [v, c] : atom.coeffs) out.vars.push_back(v);
        std::sort(out.vars.begin(), out.vars.end(),
                  [&](const std::string& x, const std::string& y) { return rank_of(x) < rank_of(y); });
        std::vector<Int> row;
        for (const auto& v : out.vars) row.push_back(atom.coeffs.at(v));
        Int rhs = atom.rhs;
        Int slack = 0;
        switch (atom.rel) {
            case Rel::Eq: break;
            case Rel::Le: slack = 1; break;
            case Rel::Lt: slack = 1; rhs -= 1; break;
            case Rel::Ge: slack = -1; break;
            case Rel::Gt: slack = -1; rhs += 1; break;
        }
        if (slack != 0) row.push_back(slack);
        int dim = static_cast<int>(row.size());
        EqAutomaton eq = build_eq_automaton({row}, {rhs}, base, dim);
        if (slack == 0) {
            out.dfa = canonical(eq.dfa);
            return out;
        }
        Dfa projected = determinize_minimize(project(eq.dfa, dim - 1), opts.state_cap);
        out.dfa = zero_closure(projected);
        return out;
    }

    Compiled compile_rec(const Formula& f) {
        return std::visit(
            [&](const auto& node) -> Compiled {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, LinearAtom>) {
                    return compile_linear(node);
                } else if constexpr (std::is_same_v<T, ValAtom>) {
                    Compiled out;
                    if (node.x == node.y) {
                        out.vars = {node.x};
                        out.dfa = canonical(build_vp_automaton(base, 1, 0, 0));
                    } else {
                        bool x_first = rank_of(node.x) < rank_of(node.y);
                        out.vars = x_first ? std::vector<std::string>{node.x, node.y}
                                           : std::vector<std::string>{node.y, node.x};
                        out.dfa = canonical(build_vp_automaton(base, 2, x_first ? 0 : 1, x_first ? 1 : 0));
                    }
                    return out;
                } else if constexpr (std::is_same_v<T, PowAtom>) {
                    Compiled out;
                    out.vars = {node.x};
                    out.dfa = canonical(build_vp_automaton(base, 1, 0, 0));
                    return out;
                } else if constexpr (std::is_same_v<T, BoolConst>) {
                    Compiled out;
                    out.dfa = node.value ? universal_dfa(base, 0) : empty_dfa(base, 0);
                    return out;
                } else if constexpr (std::is_same_v<T, NaryNode>) {
                    BoolOp op = node.conj ? BoolOp::And : BoolOp::Or;
                    std::optional<Compiled> acc;
                    for (const auto& c : node.children) {
                        Compiled cc = compile_rec(*c);
                        acc = acc ? combine(std::move(*acc), std::move(cc), op) : std::move(cc);
                    }
                    if (!acc) throw std::logic_error("empty connective");
                    return std::move(*acc);
                } else if constexpr (std::is_same_v<T, NotNode>) {
                    Compiled c = compile_rec(*node.child);
                    c.dfa = complement(c.dfa);
                    guard(c.dfa);
                    return c;
                } else {
                    Compiled body = compile_rec(*node.body);
                    if (node.exists) return project_var(std::move(body), node.var);
                    // forall x phi  ==  ~ exists x ~phi
                    body.dfa = complement(body.dfa);
                    Compiled inner = project_var(std::move(body), node.var);
                    inner.dfa = complement(inner.dfa);
                    guard(inner.dfa);
                    return inner;
                }
            },
            f.node);
    }

    Compiled project_var(Compiled c, const std::string& var) {
        auto it = std::find(c.vars.begin(), c.vars.end(), var);
        if (it == c.vars.end()) return c;  // vacuous quantifier
        int track = static_cast<int>(it - c.vars.begin());
        c.vars.erase(it);
        Dfa projected = determinize_minimize(project(c.dfa, track), opts.state_cap);
        c.dfa = zero_closure(projected);
        guard(c.dfa);
        return c;
    }
};

void assign_ranks(const Formula& f, std::map<std::string, int>& rank, int& next) {
    // Free variables first (declaration order), then bound variables in
    // scope order; rename_apart has made all binders distinct.
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, LinearAtom>) {
                for (const auto& [v, c] : node.coeffs)
                    if (!rank.count(v)) rank.emplace(v, next++);
            } else if constexpr (std::is_same_v<T, ValAtom>) {
                if (!rank.count(node.x)) rank.emplace(node.x, next++);
                if (!rank.count(node.y)) rank.emplace(node.y, next++);
            } else if constexpr (std::is_same_v<T, PowAtom>) {
                if (!rank.count(node.x)) rank.emplace(node.x, next++);
            } else if constexpr (std::is_same_v<T, NaryNode>) {
                for (const auto& c : node.children) assign_ranks(*c, rank, next);
            } else if constexpr (std::is_same_v<T, NotNode>) {
                assign_ranks(*node.child, rank, next);
            } else if constexpr (std::is_same_v<T, QuantNode>) {
                if (!rank.count(node.var)) rank.emplace(node.var, next++);
                assign_ranks(*node.body, rank, next);
            }
        },
        f.node);
}

Compiled compile_full(const Formula& f, const CompileOptions& opts) {
    Formula g = rename_apart(f);
    Compiler compiler{g.base, opts, {}};
    int next = 0;
    for (const auto& v : free_variables(g)) compiler.rank.emplace(v, next++);
    assign_ranks(g, compiler.rank, next);
    Compiled c = compiler.compile_rec(g);
    // Extend to the full free-variable tuple (vacuous variables included).
    auto free = free_variables(f);
    std::vector<std::string> target = free;
    std::sort(target.begin(), target.end(), [&](const std::string& x, const std::string& y) {
        return compiler.rank.at(x) < compiler.rank.at(y);
    });
    for (size_t i = 0; i < target.size(); ++i) {
        if (i < c.vars.size() && c.vars[i] == target[i]) continue;
        c.dfa = insert_track(c.dfa, static_cast<int>(i));
        c.vars.insert(c.vars.begin() + static_cast<long>(i), target[i]);
    }
    if (c.vars != target) throw std::logic_error("track alignment failure");
    return c;
}

}  // namespace

Dfa compile(const Formula& f, const CompileOptions& opts) {
    Compiled c = compile_full(f, opts);
    // Free variables are already in declaration order == rank order.
    return c.dfa;
}

Dfa compile_existential_fast(const Formula& f, const CompileOptions& opts) {
    Formula nf = eliminate_negation(f);
    Formula pf = to_prenex(nf);
    PrenexParts parts = split_prenex(pf);
    for (const auto& [exists, var] : parts.prefix)
        if (!exists) throw NotExistentialError("formula has a universal quantifier");

    std::vector<std::string> free = free_variables(f);
    std::vector<std::string> shared = free;
    for (const auto& [exists, var] : parts.prefix) shared.push_back(var);

    std::vector<LinSystem> systems = matrix_to_systems(parts.matrix, shared, opts.dnf_cap);
    Dfa acc = empty_dfa(f.base, static_cast<int>(shared.size()));
    for (const auto& sys : systems) {
        Dfa d = build_system_automaton(sys);
        // Project the per-system slacks, innermost first.
        for (size_t k = sys.vars.size(); k-- > sys.num_shared_vars;)
            d = zero_closure(determinize_minimize(project(d, static_cast<int>(k)), opts.state_cap));
        acc = product(acc, d, BoolOp::Or);
    }
    // Project the existential prefix, innermost first.
    for (size_t k = shared.size(); k-- > free.size();)
        acc = zero_closure(determinize_minimize(project(acc, static_cast<int>(k)), opts.state_cap));
    return acc;
}

SatResult is_sat(const Formula& f, const CompileOptions& opts) {
    Dfa d = compile(f, opts);
    SatResult r;
    auto w = shortest_word(d);
    r.sat = w.has_value();
    if (r.sat) {
        auto values = w->decode();
        auto vars = free_variables(f);
        for (size_t i = 0; i < vars.size(); ++i) r.witness[vars[i]] = values[i];
    }
    return r;
}

bool membership(const Formula& f, const Assignment& v, const CompileOptions& opts) {
    Dfa d = compile(f, opts);
    auto vars = free_variables(f);
    std::vector<Int> values;
    for (const auto& var : vars) {
        auto it = v.find(var);
        if (it == v.end()) throw std::invalid_argument("assignment misses variable " + var);
        values.push_back(it->second);
    }
    return d.accepts(encode(values, f.base));
}

std::vector<Assignment> enumerate_solutions(const Formula& f, size_t limit,
                                            const CompileOptions& opts) {
    Dfa d = compile(f, opts);
    auto vars = free_variables(f);
    Dfa canon = canonical_representation(d);
    std::vector<Assignment> out;
    if (limit == 0) return out;
    size_t empty_run = 0;
    constexpr size_t kMaxLength = 4096;
    for (size_t len = 0; len <= kMaxLength; ++len) {
        auto words = words_of_length(canon, len, limit - out.size());
        if (words.empty()) {
            if (++empty_run > canon.num_states() + 1) break;
            continue;
        }
        empty_run = 0;
        for (const auto& w : words) {
            auto values = w.decode();
            Assignment a;
            for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = values[i];
            out.push_back(std::move(a));
            if (out.size() >= limit) return out;
        }
    }
    return out;
}

std::function<std::optional<bool>(const Formula&, const Assignment&)> automaton_quantifier_hook(
    const CompileOptions& opts) {
    return [opts](const Formula& quantified, const Assignment& sigma) -> std::optional<bool> {
        auto vars = free_variables(quantified);
        Assignment restricted;
        for (const auto& v : vars) {
            auto it = sigma.find(v);
            if (it == sigma.end()) return std::nullopt;
            restricted[v] = it->second;
        }
        return membership(quantified, restricted, opts);
    };
}

}  // namespace buchi
