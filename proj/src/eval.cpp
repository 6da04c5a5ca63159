#include "buchi/formula.hpp"

namespace buchi {

namespace {

bool is_power_of(const Int& a, int p) {
    if (a < 1) return false;
    Int x = a;
    while (x % p == 0) x /= p;
    return x == 1;
}

// V_p(a, b): a is the largest power of p dividing b; never holds for b = 0.
bool val_holds(const Int& a, const Int& b, int p) {
    if (b == 0) return false;
    if (!is_power_of(a, p)) return false;
    if (b % a != 0) return false;
    return (b % (a * p)) != 0;
}

Int lookup(const Assignment& sigma, const std::string& var) {
    auto it = sigma.find(var);
    if (it == sigma.end()) throw std::invalid_argument("unassigned variable: " + var);
    if (it->second < 0) throw std::invalid_argument("assignment must be over naturals: " + var);
    return it->second;
}

bool eval_rec(const Formula& f, Assignment& sigma, const EvalOptions& opts) {
    return std::visit(
        [&](const auto& node) -> bool {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, LinearAtom>) {
                Int lhs = 0;
                for (const auto& [v, c] : node.coeffs) lhs += c * lookup(sigma, v);
                switch (node.rel) {
                    case Rel::Eq: return lhs == node.rhs;
                    case Rel::Le: return lhs <= node.rhs;
                    case Rel::Lt: return lhs < node.rhs;
                    case Rel::Ge: return lhs >= node.rhs;
                    case Rel::Gt: return lhs > node.rhs;
                }
                return false;
            } else if constexpr (std::is_same_v<T, ValAtom>) {
                return val_holds(lookup(sigma, node.x), lookup(sigma, node.y), f.base);
            } else if constexpr (std::is_same_v<T, PowAtom>) {
                return is_power_of(lookup(sigma, node.x), f.base);
            } else if constexpr (std::is_same_v<T, BoolConst>) {
                return node.value;
            } else if constexpr (std::is_same_v<T, NaryNode>) {
                for (const auto& c : node.children) {
                    bool v = eval_rec(*c, sigma, opts);
                    if (node.conj && !v) return false;
                    if (!node.conj && v) return true;
                }
                return node.conj;
            } else if constexpr (std::is_same_v<T, NotNode>) {
                return !eval_rec(*node.child, sigma, opts);
            } else {
                if (opts.quantifier_hook) {
                    auto decided = opts.quantifier_hook(f, sigma);
                    if (decided) return *decided;
                }
                auto saved_it = sigma.find(node.var);
                std::optional<Int> saved;
                if (saved_it != sigma.end()) saved = saved_it->second;
                bool result = !node.exists;
                bool decided = false;
                for (Int v = 0; v <= opts.quantifier_cap; ++v) {
                    sigma[node.var] = v;
                    bool b = eval_rec(*node.body, sigma, opts);
                    if (node.exists && b) {
                        result = true;
                        decided = true;
                        break;
                    }
                    if (!node.exists && !b) {
                        result = false;
                        decided = true;
                        break;
                    }
                }
                if (saved)
                    sigma[node.var] = *saved;
                else
                    sigma.erase(node.var);
                if (!decided && opts.strict)
                    throw UnboundedQuantifierError(
                        "quantified subformula not bounded by the enumeration cap: " +
                        print_formula(f));
                return result;
            }
        },
        f.node);
}

}  // namespace

bool eval_ground(const Formula& f, const Assignment& assignment, const EvalOptions& opts) {
    Assignment sigma = assignment;
    return eval_rec(f, sigma, opts);
}

}  // namespace buchi
