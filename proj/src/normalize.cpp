#include <algorithm>
#include <set>

#include "buchi/formula.hpp"

namespace buchi {

namespace {

struct FreshNames {
    std::set<std::string> used;
    int counter = 0;

    explicit FreshNames(const Formula& f) { collect(f); }

    void collect(const Formula& f) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, LinearAtom>) {
                    for (const auto& [v, c] : node.coeffs) used.insert(v);
                } else if constexpr (std::is_same_v<T, ValAtom>) {
                    used.insert(node.x);
                    used.insert(node.y);
                } else if constexpr (std::is_same_v<T, PowAtom>) {
                    used.insert(node.x);
                } else if constexpr (std::is_same_v<T, NaryNode>) {
                    for (const auto& c : node.children) collect(*c);
                } else if constexpr (std::is_same_v<T, NotNode>) {
                    collect(*node.child);
                } else if constexpr (std::is_same_v<T, QuantNode>) {
                    used.insert(node.var);
                    collect(*node.body);
                }
            },
            f.node);
    }

    std::string fresh(const std::string& hint) {
        while (true) {
            std::string name = hint + std::to_string(counter++);
            if (used.insert(name).second) return name;
        }
    }
};

Formula negate_linear(int base, const LinearAtom& a) {
    switch (a.rel) {
        case Rel::Eq: {
            // ~(t = c)  ==>  t <= c-1 | t >= c+1
            Formula lo = f_linear(base, a.coeffs, Rel::Le, a.rhs - 1);
            Formula hi = f_linear(base, a.coeffs, Rel::Ge, a.rhs + 1);
            return f_or({std::move(lo), std::move(hi)});
        }
        case Rel::Le: return f_linear(base, a.coeffs, Rel::Ge, a.rhs + 1);
        case Rel::Lt: return f_linear(base, a.coeffs, Rel::Ge, a.rhs);
        case Rel::Ge: return f_linear(base, a.coeffs, Rel::Le, a.rhs - 1);
        case Rel::Gt: return f_linear(base, a.coeffs, Rel::Le, a.rhs);
    }
    throw std::logic_error("unreachable");
}

// x is not a power of p:  x = 0  |  E y. V(y, x) & y < x.
// (The largest power of p dividing x is a proper divisor exactly when x is
// positive and not itself a power.)
Formula negate_pow(int base, const std::string& x, FreshNames& names) {
    std::string y = names.fresh("_np");
    Formula zero = f_eq_const(base, x, 0);
    Formula proper = f_exists(
        y, f_and({f_val(base, y, x),
                  f_linear(base, {{y, Int(1)}, {x, Int(-1)}}, Rel::Lt, Int(0))}));
    return f_or({std::move(zero), std::move(proper)});
}

// ~V(x, y)  ==>  y = 0 | ~P(x) | E z. V(z, y) & z != x.
Formula negate_val(int base, const ValAtom& a, FreshNames& names) {
    Formula y_zero = f_eq_const(base, a.y, 0);
    Formula not_pow = negate_pow(base, a.x, names);
    std::string z = names.fresh("_nv");
    Formula ne_lo = f_linear(base, {{a.x, Int(1)}, {z, Int(-1)}}, Rel::Lt, Int(0));
    Formula ne_hi = f_linear(base, {{a.x, Int(1)}, {z, Int(-1)}}, Rel::Gt, Int(0));
    Formula other = f_exists(
        z, f_and({f_val(base, z, a.y), f_or({std::move(ne_lo), std::move(ne_hi)})}));
    return f_or({std::move(y_zero), std::move(not_pow), std::move(other)});
}

Formula elim_rec(const Formula& f, bool neg, FreshNames& names) {
    return std::visit(
        [&](const auto& node) -> Formula {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, LinearAtom>) {
                return neg ? negate_linear(f.base, node) : Formula{f.base, node};
            } else if constexpr (std::is_same_v<T, ValAtom>) {
                return neg ? negate_val(f.base, node, names) : Formula{f.base, node};
            } else if constexpr (std::is_same_v<T, PowAtom>) {
                return neg ? negate_pow(f.base, node.x, names) : Formula{f.base, node};
            } else if constexpr (std::is_same_v<T, BoolConst>) {
                return Formula{f.base, BoolConst{neg ? !node.value : node.value}};
            } else if constexpr (std::is_same_v<T, NaryNode>) {
                std::vector<Formula> children;
                for (const auto& c : node.children) children.push_back(elim_rec(*c, neg, names));
                bool conj = neg ? !node.conj : node.conj;
                return conj ? f_and(std::move(children)) : f_or(std::move(children));
            } else if constexpr (std::is_same_v<T, NotNode>) {
                return elim_rec(*node.child, !neg, names);
            } else {
                Formula body = elim_rec(*node.body, neg, names);
                bool exists = neg ? !node.exists : node.exists;
                return exists ? f_exists(node.var, std::move(body))
                              : f_forall(node.var, std::move(body));
            }
        },
        f.node);
}

}  // namespace

Formula eliminate_negation(const Formula& f) {
    FreshNames names(f);
    return elim_rec(f, false, names);
}

namespace {

struct Prenexed {
    std::vector<std::pair<bool, std::string>> prefix;
    Formula matrix;
};

Prenexed prenex_rec(const Formula& f) {
    return std::visit(
        [&](const auto& node) -> Prenexed {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, NaryNode>) {
                std::vector<std::pair<bool, std::string>> prefix;
                std::vector<Formula> matrices;
                for (const auto& c : node.children) {
                    Prenexed p = prenex_rec(*c);
                    prefix.insert(prefix.end(), p.prefix.begin(), p.prefix.end());
                    matrices.push_back(std::move(p.matrix));
                }
                Formula m = node.conj ? f_and(std::move(matrices)) : f_or(std::move(matrices));
                return {std::move(prefix), std::move(m)};
            } else if constexpr (std::is_same_v<T, NotNode>) {
                throw std::invalid_argument("to_prenex expects a negation-free formula");
            } else if constexpr (std::is_same_v<T, QuantNode>) {
                Prenexed p = prenex_rec(*node.body);
                p.prefix.insert(p.prefix.begin(), {node.exists, node.var});
                return p;
            } else {
                return {{}, f};
            }
        },
        f.node);
}

}  // namespace

Formula to_prenex(const Formula& f) {
    Prenexed p = prenex_rec(rename_apart(f));
    Formula out = std::move(p.matrix);
    for (auto it = p.prefix.rbegin(); it != p.prefix.rend(); ++it)
        out = it->first ? f_exists(it->second, std::move(out)) : f_forall(it->second, std::move(out));
    return out;
}

PrenexParts split_prenex(const Formula& f) {
    PrenexParts parts{{}, f};
    const Formula* cur = &f;
    while (const auto* q = std::get_if<QuantNode>(&cur->node)) {
        parts.prefix.emplace_back(q->exists, q->var);
        cur = q->body.get();
    }
    parts.matrix = *cur;
    return parts;
}

namespace {

using Disjunct = std::vector<const Formula*>;

void dnf_rec(const Formula& f, std::vector<Disjunct>& out, size_t cap) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, NaryNode>) {
                if (!node.conj) {
                    for (const auto& c : node.children) dnf_rec(*c, out, cap);
                    return;
                }
                std::vector<Disjunct> acc{{}};
                for (const auto& c : node.children) {
                    std::vector<Disjunct> child;
                    dnf_rec(*c, child, cap);
                    std::vector<Disjunct> next;
                    next.reserve(acc.size() * child.size());
                    for (const auto& a : acc)
                        for (const auto& b : child) {
                            Disjunct d = a;
                            d.insert(d.end(), b.begin(), b.end());
                            next.push_back(std::move(d));
                            if (next.size() > cap)
                                throw DnfExplosionError("DNF disjunct cap exceeded");
                        }
                    acc = std::move(next);
                }
                out.insert(out.end(), acc.begin(), acc.end());
            } else if constexpr (std::is_same_v<T, NotNode> || std::is_same_v<T, QuantNode>) {
                throw std::invalid_argument("matrix_to_systems expects a negation-free matrix");
            } else {
                out.push_back({&f});
            }
            if (out.size() > cap) throw DnfExplosionError("DNF disjunct cap exceeded");
        },
        f.node);
}

}  // namespace

std::vector<LinSystem> matrix_to_systems(const Formula& matrix,
                                         const std::vector<std::string>& shared_vars,
                                         size_t disjunct_cap) {
    std::vector<Disjunct> disjuncts;
    dnf_rec(matrix, disjuncts, disjunct_cap);

    std::vector<LinSystem> systems;
    for (const auto& d : disjuncts) {
        LinSystem sys;
        sys.base = matrix.base;
        sys.vars = shared_vars;
        sys.num_shared_vars = shared_vars.size();
        auto var_index = [&](const std::string& v) {
            auto it = std::find(sys.vars.begin(), sys.vars.end(), v);
            if (it == sys.vars.end())
                throw std::invalid_argument("matrix variable missing from shared order: " + v);
            return static_cast<int>(it - sys.vars.begin());
        };
        bool contradiction = false;
        int slack_count = 0;
        for (const Formula* lit : d) {
            if (const auto* b = std::get_if<BoolConst>(&lit->node)) {
                if (!b->value) contradiction = true;
                continue;
            }
            if (const auto* v = std::get_if<ValAtom>(&lit->node)) {
                sys.valuations.emplace_back(var_index(v->x), var_index(v->y));
                continue;
            }
            if (const auto* pw = std::get_if<PowAtom>(&lit->node)) {
                int i = var_index(pw->x);
                sys.valuations.emplace_back(i, i);
                continue;
            }
            const auto& atom = std::get<LinearAtom>(lit->node);
            std::vector<Int> row(sys.vars.size(), Int(0));
            for (const auto& [v, c] : atom.coeffs) row[static_cast<size_t>(var_index(v))] = c;
            Int rhs = atom.rhs;
            Int slack_sign = 0;
            switch (atom.rel) {
                case Rel::Eq: break;
                case Rel::Le: slack_sign = 1; break;
                case Rel::Lt: slack_sign = 1; rhs -= 1; break;
                case Rel::Ge: slack_sign = -1; break;
                case Rel::Gt: slack_sign = -1; rhs += 1; break;
            }
            if (slack_sign != 0) {
                sys.vars.push_back("_s" + std::to_string(slack_count++));
                for (auto& r : sys.matrix) r.push_back(0);
                row.push_back(slack_sign);
            }
            sys.matrix.push_back(std::move(row));
            sys.rhs.push_back(std::move(rhs));
        }
        if (contradiction) continue;
        systems.push_back(std::move(sys));
    }
    return systems;
}

}  // namespace buchi
