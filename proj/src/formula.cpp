#include "buchi/formula.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace buchi {

namespace {

FormulaPtr ptr(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

int common_base(const std::vector<Formula>& fs) {
    if (fs.empty()) throw std::invalid_argument("empty connective");
    int b = fs[0].base;
    for (const auto& f : fs)
        if (f.base != b) throw std::invalid_argument("mixed bases in one formula");
    return b;
}

}  // namespace

Formula f_true(int base) { return Formula{base, BoolConst{true}}; }
Formula f_false(int base) { return Formula{base, BoolConst{false}}; }

Formula f_linear(int base, std::map<std::string, Int> coeffs, Rel rel, Int rhs) {
    // Zero coefficients are kept: the variable still occurs (and stays free),
    // e.g. "x = x" is a formula of x.
    return Formula{base, LinearAtom{std::move(coeffs), rel, std::move(rhs)}};
}

Formula f_eq_const(int base, const std::string& var, Int value) {
    return f_linear(base, {{var, Int(1)}}, Rel::Eq, std::move(value));
}

Formula f_val(int base, const std::string& x, const std::string& y) {
    return Formula{base, ValAtom{x, y}};
}

Formula f_pow(int base, const std::string& x) { return Formula{base, PowAtom{x}}; }

Formula f_and(std::vector<Formula> children) {
    int base = common_base(children);
    if (children.size() == 1) return children[0];
    NaryNode n{true, {}};
    for (auto& c : children) n.children.push_back(ptr(std::move(c)));
    return Formula{base, std::move(n)};
}

Formula f_or(std::vector<Formula> children) {
    int base = common_base(children);
    if (children.size() == 1) return children[0];
    NaryNode n{false, {}};
    for (auto& c : children) n.children.push_back(ptr(std::move(c)));
    return Formula{base, std::move(n)};
}

Formula f_not(Formula child) {
    int base = child.base;
    return Formula{base, NotNode{ptr(std::move(child))}};
}

Formula f_exists(const std::string& var, Formula body) {
    int base = body.base;
    return Formula{base, QuantNode{true, var, ptr(std::move(body))}};
}

Formula f_forall(const std::string& var, Formula body) {
    int base = body.base;
    return Formula{base, QuantNode{false, var, ptr(std::move(body))}};
}

namespace {

void collect_free(const Formula& f, std::vector<std::string>& order, std::set<std::string>& seen,
                  std::set<std::string>& bound) {
    auto touch = [&](const std::string& v) {
        if (bound.count(v) || seen.count(v)) return;
        seen.insert(v);
        order.push_back(v);
    };
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, LinearAtom>) {
                for (const auto& [v, c] : node.coeffs) touch(v);
            } else if constexpr (std::is_same_v<T, ValAtom>) {
                touch(node.x);
                touch(node.y);
            } else if constexpr (std::is_same_v<T, PowAtom>) {
                touch(node.x);
            } else if constexpr (std::is_same_v<T, BoolConst>) {
            } else if constexpr (std::is_same_v<T, NaryNode>) {
                for (const auto& c : node.children) collect_free(*c, order, seen, bound);
            } else if constexpr (std::is_same_v<T, NotNode>) {
                collect_free(*node.child, order, seen, bound);
            } else if constexpr (std::is_same_v<T, QuantNode>) {
                bool fresh = bound.insert(node.var).second;
                collect_free(*node.body, order, seen, bound);
                if (fresh) bound.erase(node.var);
            }
        },
        f.node);
}

}  // namespace

std::vector<std::string> free_variables(const Formula& f) {
    std::vector<std::string> order;
    std::set<std::string> seen, bound;
    collect_free(f, order, seen, bound);
    return order;
}

namespace {

const char* rel_str(Rel r) {
    switch (r) {
        case Rel::Eq: return "=";
        case Rel::Le: return "<=";
        case Rel::Lt: return "<";
        case Rel::Ge: return ">=";
        case Rel::Gt: return ">";
    }
    return "?";
}

void print_linear(std::ostringstream& out, const LinearAtom& a) {
    if (a.coeffs.empty()) {
        out << "0 " << rel_str(a.rel) << ' ' << a.rhs;
        return;
    }
    bool first = true;
    for (const auto& [v, c] : a.coeffs) {
        Int abs = c < 0 ? Int(-c) : c;
        if (first) {
            if (c < 0) out << "-";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        if (abs != 1) out << abs << "*";
        out << v;
    }
    out << ' ' << rel_str(a.rel) << ' ' << a.rhs;
}

// Precedence: quantifier body needs no parens (extends right); or < and < lit.
void print_rec(std::ostringstream& out, const Formula& f, int parent_prec) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, LinearAtom>) {
                print_linear(out, node);
            } else if constexpr (std::is_same_v<T, ValAtom>) {
                out << "V(" << node.x << "," << node.y << ")";
            } else if constexpr (std::is_same_v<T, PowAtom>) {
                out << "P(" << node.x << ")";
            } else if constexpr (std::is_same_v<T, BoolConst>) {
                out << (node.value ? "true" : "false");
            } else if constexpr (std::is_same_v<T, NaryNode>) {
                int prec = node.conj ? 2 : 1;
                bool parens = prec < parent_prec || parent_prec == 3;
                if (parens) out << "(";
                bool first = true;
                for (const auto& c : node.children) {
                    if (!first) out << (node.conj ? " & " : " | ");
                    print_rec(out, *c, prec + 1);
                    first = false;
                }
                if (parens) out << ")";
            } else if constexpr (std::is_same_v<T, NotNode>) {
                out << "~";
                print_rec(out, *node.child, 3);
            } else if constexpr (std::is_same_v<T, QuantNode>) {
                bool parens = parent_prec > 0;
                if (parens) out << "(";
                out << (node.exists ? "E " : "A ") << node.var << ". ";
                print_rec(out, *node.body, 0);
                if (parens) out << ")";
            }
        },
        f.node);
}

}  // namespace

std::string print_formula(const Formula& f) {
    std::ostringstream out;
    print_rec(out, f, 0);
    // Atoms that would parse back ambiguously do not exist; rel atoms and
    // macro atoms are self-delimiting.
    return out.str();
}

namespace {

std::string fresh_name(const std::string& hint, std::set<std::string>& used) {
    if (!used.count(hint)) {
        used.insert(hint);
        return hint;
    }
    for (int i = 1;; ++i) {
        std::string name = hint + "_" + std::to_string(i);
        if (!used.count(name)) {
            used.insert(name);
            return name;
        }
    }
}

Formula rename_rec(const Formula& f, std::map<std::string, std::string>& subst,
                   std::set<std::string>& used) {
    return std::visit(
        [&](const auto& node) -> Formula {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, LinearAtom>) {
                LinearAtom a;
                a.rel = node.rel;
                a.rhs = node.rhs;
                for (const auto& [v, c] : node.coeffs) {
                    auto it = subst.find(v);
                    a.coeffs[it == subst.end() ? v : it->second] += c;
                }
                return Formula{f.base, std::move(a)};
            } else if constexpr (std::is_same_v<T, ValAtom>) {
                auto lookup = [&](const std::string& v) {
                    auto it = subst.find(v);
                    return it == subst.end() ? v : it->second;
                };
                return f_val(f.base, lookup(node.x), lookup(node.y));
            } else if constexpr (std::is_same_v<T, PowAtom>) {
                auto it = subst.find(node.x);
                return f_pow(f.base, it == subst.end() ? node.x : it->second);
            } else if constexpr (std::is_same_v<T, BoolConst>) {
                return Formula{f.base, node};
            } else if constexpr (std::is_same_v<T, NaryNode>) {
                std::vector<Formula> children;
                for (const auto& c : node.children) children.push_back(rename_rec(*c, subst, used));
                return node.conj ? f_and(std::move(children)) : f_or(std::move(children));
            } else if constexpr (std::is_same_v<T, NotNode>) {
                return f_not(rename_rec(*node.child, subst, used));
            } else {
                std::string name = fresh_name(node.var, used);
                auto old = subst.find(node.var);
                std::optional<std::string> saved;
                if (old != subst.end()) saved = old->second;
                subst[node.var] = name;
                Formula body = rename_rec(*node.body, subst, used);
                if (saved)
                    subst[node.var] = *saved;
                else
                    subst.erase(node.var);
                return node.exists ? f_exists(name, std::move(body)) : f_forall(name, std::move(body));
            }
        },
        f.node);
}

}  // namespace

Formula rename_apart(const Formula& f) {
    std::set<std::string> used;
    for (const auto& v : free_variables(f)) used.insert(v);
    std::map<std::string, std::string> subst;
    return rename_rec(f, subst, used);
}

std::string LinSystem::str() const {
    std::ostringstream out;
    out << "system over (";
    for (size_t i = 0; i < vars.size(); ++i) out << (i ? "," : "") << vars[i];
    out << ")";
    for (size_t r = 0; r < matrix.size(); ++r) {
        out << "; ";
        for (size_t c = 0; c < vars.size(); ++c) {
            if (c) out << " + ";
            out << matrix[r][c] << "*" << vars[c];
        }
        out << " = " << rhs[r];
    }
    for (auto [i, j] : valuations) out << "; V(" << vars[static_cast<size_t>(i)] << "," << vars[static_cast<size_t>(j)] << ")";
    return out.str();
}

}  // namespace buchi
