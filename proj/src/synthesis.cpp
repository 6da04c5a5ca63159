#include "buchi/synthesis.hpp"

#include <algorithm>
#include <set>

namespace buchi {

namespace {

Int pow_int(int base, uint64_t e) {
    Int r = 1;
    for (uint64_t i = 0; i < e; ++i) r *= base;
    return r;
}

struct VarGen {
    std::set<std::string> used;
    int counter = 0;
    std::string fresh(const std::string& hint) {
        while (true) {
            std::string name = hint + std::to_string(counter++);
            if (used.insert(name).second) return name;
        }
    }
};

Formula or_list(int base, std::vector<Formula> fs) {
    return fs.empty() ? f_false(base) : f_or(std::move(fs));
}

Formula and_list(int base, std::vector<Formula> fs) {
    return fs.empty() ? f_true(base) : f_and(std::move(fs));
}

// P(y) & E z. y - (p^ell - 1) z = 1   <=>   y = p^(ell * i)
Formula s_ell_at_one(int base, uint64_t ell, const std::string& y, VarGen& gen) {
    std::string z = gen.fresh("z");
    Formula eq = f_linear(base, {{y, Int(1)}, {z, Int(1) - pow_int(base, ell)}}, Rel::Eq, Int(1));
    return f_and({f_pow(base, y), f_exists(z, std::move(eq))});
}

// S_U(1, y): y = p^u for some u in the set.
Formula s_u_at_one(int base, const UpSet& u_in, const std::string& y, VarGen& gen) {
    UpSet u = upset_normalize(u_in);
    if (upset_is_empty(u)) return f_false(base);
    std::vector<Formula> parts;
    for (uint64_t b : u.initial)
        parts.push_back(f_linear(base, {{y, Int(1)}}, Rel::Eq, pow_int(base, b)));
    for (uint64_t r : u.residues) {
        std::string z = gen.fresh("z");
        Formula eq = f_linear(base, {{y, Int(1)}, {z, Int(1) - pow_int(base, u.period)}}, Rel::Eq,
                              pow_int(base, u.threshold + r));
        parts.push_back(f_exists(z, std::move(eq)));
    }
    return f_and({f_pow(base, y), or_list(base, std::move(parts))});
}

size_t trailing_zero_columns(const DigitWord& w) {
    size_t n = 0;
    for (size_t i = w.size(); i-- > 0 && w.letter(i) == 0;) ++n;
    return n;
}

DigitWord concat_words(const DigitWord& a, const DigitWord& b) {
    DigitWord out = a;
    for (size_t i = 0; i < b.size(); ++i) out.push_letter(b.letter(i));
    return out;
}

}  // namespace

Formula phi_w(int base, const std::string& x, const std::string& y) {
    return f_and({f_pow(base, y),
                  f_linear(base, {{x, Int(1)}, {y, Int(-1)}}, Rel::Lt, Int(0)),
                  f_linear(base, {{y, Int(1)}, {x, Int(-base)}}, Rel::Le, Int(0))});
}

Formula phi_s(int base, uint64_t ell, const std::string& x, const std::string& y) {
    if (ell == 0) throw std::invalid_argument("phi_s needs ell >= 1");
    VarGen gen{{x, y}, 0};
    std::string z = gen.fresh("z");
    Formula eq = f_linear(base, {{y, Int(1)}, {x, Int(-1)}, {z, Int(1) - pow_int(base, ell)}},
                          Rel::Eq, Int(0));
    return f_and({f_pow(base, x), f_pow(base, y), f_exists(z, std::move(eq))});
}

Formula phi_s_u(int base, const UpSet& u_in, const std::string& x, const std::string& y) {
    UpSet u = upset_normalize(u_in);
    if (upset_is_empty(u)) return f_false(base);
    VarGen gen{{x, y}, 0};
    std::vector<Formula> parts;
    for (uint64_t b : u.initial)
        parts.push_back(f_linear(base, {{y, Int(1)}, {x, -pow_int(base, b)}}, Rel::Eq, Int(0)));
    for (uint64_t r : u.residues) {
        std::string shifted = gen.fresh("q");
        Formula bind = f_linear(base, {{shifted, Int(1)}, {x, -pow_int(base, u.threshold + r)}},
                                Rel::Eq, Int(0));
        parts.push_back(f_exists(shifted, f_and({std::move(bind), phi_s(base, u.period, shifted, y)})));
    }
    return f_and({f_pow(base, x), f_pow(base, y), or_list(base, std::move(parts))});
}

Formula phi_w_star(const DigitWord& w, const std::string& x) {
    if (w.dim() != 1) throw std::invalid_argument("phi_w_star expects a dim-1 word");
    int base = w.base();
    if (w.size() == 0) return f_eq_const(base, x, 0);
    Int val = w.decode()[0];
    uint64_t r = w.size();
    Int m = pow_int(base, r);
    VarGen gen{{x}, 0};
    std::string y = gen.fresh("y");
    // (m-1) x = [[w]] (y - 1) with y ranging over powers p^(r i).
    Formula eq = f_linear(base, {{x, m - 1}, {y, -val}}, Rel::Eq, -val);
    return f_exists(y, f_and({s_ell_at_one(base, r, y, gen), std::move(eq)}));
}

Formula phi_w_plus_zeros(const DigitWord& w, const UpSet& u_in, const std::string& x) {
    if (w.dim() != 1) throw std::invalid_argument("phi_w_plus_zeros expects a dim-1 word");
    int base = w.base();
    UpSet u = upset_normalize(u_in);
    if (upset_is_empty(u)) return f_false(base);
    Int val = w.size() == 0 ? Int(0) : w.decode()[0];
    if (val == 0) return f_eq_const(base, x, 0);  // all-zero repetitions encode zero

    uint64_t z0 = trailing_zero_columns(w);
    VarGen gen{{x}, 0};
    std::string y = gen.fresh("y");
    std::string z = gen.fresh("z");
    std::string s = gen.fresh("s");
    std::string t = gen.fresh("t");
    std::string g = gen.fresh("g");

    // x = p^i (z - y) for some shift below |w|.
    std::vector<Formula> shifts;
    for (uint64_t i = 0; i < w.size(); ++i) {
        Int pi = pow_int(base, i);
        shifts.push_back(f_linear(base, {{x, Int(1)}, {z, -pi}, {y, pi}}, Rel::Eq, Int(0)));
    }
    // Trailing-zero gate: V(g, x) with g = p^(z0 + u), u in the set.
    Formula gate = f_exists(
        s, f_exists(t, f_exists(g, f_and({s_u_at_one(base, u, s, gen),
                                          f_linear(base, {{t, Int(1)}, {s, Int(-1)}}, Rel::Eq, Int(0)),
                                          f_linear(base, {{g, Int(1)}, {t, -pow_int(base, z0)}},
                                                   Rel::Eq, Int(0)),
                                          f_val(base, g, x)}))));
    Formula body = f_and({phi_w_star(w, y), phi_w_star(w, z),
                          f_linear(base, {{y, Int(1)}, {z, Int(-1)}}, Rel::Lt, Int(0)),
                          or_list(base, std::move(shifts)), std::move(gate)});
    return f_exists(y, f_exists(z, std::move(body)));
}

// --- digit fragments ------------------------------------------------------------

namespace {

// The position argument of a digit predicate: coef * var, or the constant
// coef when var is absent. coef must be a power of the base so the power
// guard can live on the variable.
struct TermSlot {
    Int coef;
    std::optional<std::string> var;
};

Formula slot_guard(int base, const TermSlot& tau) {
    Int c = tau.coef;
    while (c > 1 && c % base == 0) c /= base;
    if (c != 1) throw std::invalid_argument("digit slot coefficient must be a power of the base");
    if (tau.var) return f_pow(base, *tau.var);
    return f_true(base);
}

// y = z + j*tau + t
Formula decomposition_eq(int base, int j, const TermSlot& tau, const std::string& y,
                         const std::string& z, const std::string& t) {
    std::map<std::string, Int> coeffs{{y, Int(1)}, {z, Int(-1)}, {t, Int(-1)}};
    Int rhs = 0;
    if (tau.var)
        coeffs[*tau.var] -= Int(j) * tau.coef;
    else
        rhs = Int(j) * tau.coef;
    return f_linear(base, std::move(coeffs), Rel::Eq, rhs);
}

Formula cmp_with_slot(int base, const std::string& lhs_var, Rel rel, const TermSlot& tau) {
    // lhs_var rel tau
    std::map<std::string, Int> coeffs{{lhs_var, Int(1)}};
    Int rhs = 0;
    if (tau.var)
        coeffs[*tau.var] -= tau.coef;
    else
        rhs = tau.coef;
    return f_linear(base, std::move(coeffs), rel, rhs);
}

Formula slot_cmp(int base, const TermSlot& tau, Rel rel, const std::string& rhs_var) {
    // tau rel rhs_var
    std::map<std::string, Int> coeffs{{rhs_var, Int(-1)}};
    Int rhs = 0;
    if (tau.var)
        coeffs[*tau.var] += tau.coef;
    else
        rhs = -tau.coef;
    return f_linear(base, std::move(coeffs), rel, rhs);
}

// x = p^k and digit k of y is j (x given as the slot), existential form.
Formula digit_eq(int base, int j, const TermSlot& tau, const std::string& y, bool with_guard) {
    VarGen gen{{y}, 0};
    if (tau.var) gen.used.insert(*tau.var);
    std::string t = gen.fresh("t");
    std::string u = gen.fresh("u");
    std::string z = gen.fresh("z");
    Formula body = f_and({decomposition_eq(base, j, tau, y, z, t),
                          cmp_with_slot(base, z, Rel::Lt, tau),
                          f_or({f_linear(base, {{t, Int(1)}}, Rel::Eq, Int(0)),
                                f_and({f_val(base, u, t), slot_cmp(base, tau, Rel::Lt, u)})})});
    Formula wrapped = f_exists(t, f_exists(u, f_exists(z, std::move(body))));
    if (!with_guard) return wrapped;
    return f_and({slot_guard(base, tau), std::move(wrapped)});
}

// Same predicate, universal form: no digit other than j admits a valid
// decomposition at this position.
Formula digit_eq_pi1(int base, int j, const TermSlot& tau, const std::string& y, bool with_guard) {
    VarGen gen{{y}, 0};
    if (tau.var) gen.used.insert(*tau.var);
    std::string t = gen.fresh("t");
    std::string u = gen.fresh("u");
    std::string z = gen.fresh("z");
    std::vector<Formula> blocks;
    for (int other = 0; other < base; ++other) {
        if (other == j) continue;
        Formula clause = f_or({f_not(decomposition_eq(base, other, tau, y, z, t)),
                               cmp_with_slot(base, z, Rel::Ge, tau),
                               f_and({f_linear(base, {{t, Int(1)}}, Rel::Ge, Int(1)),
                                      f_or({f_not(f_val(base, u, t)),
                                            slot_cmp(base, tau, Rel::Ge, u)})})});
        blocks.push_back(f_forall(t, f_forall(u, f_forall(z, std::move(clause)))));
    }
    Formula all = and_list(base, std::move(blocks));
    if (!with_guard) return all;
    return f_and({slot_guard(base, tau), std::move(all)});
}

}  // namespace

Formula phi_digit(int base, int j, const std::string& x, const std::string& y) {
    if (j < 0 || j >= base) throw std::invalid_argument("digit out of range");
    return digit_eq(base, j, TermSlot{Int(1), x}, y, true);
}

Formula phi_digit_pi1(int base, int j, const std::string& x, const std::string& y) {
    if (j < 0 || j >= base) throw std::invalid_argument("digit out of range");
    return digit_eq_pi1(base, j, TermSlot{Int(1), x}, y, true);
}

// --- existential synthesis --------------------------------------------------------

namespace {

// A branch with mandatory loops: head loop1+ tail1 loop2+ tail2 ...
struct PlusBranch {
    DigitWord head;
    std::vector<std::pair<DigitWord, DigitWord>> blocks;  // (loop, tail)
};

Dfa branch_dfa(const PlusBranch& b) {
    BlockRegex r;
    r.head = b.head;
    for (const auto& [loop, tail] : b.blocks) r.blocks.push_back({loop, true, tail});
    return block_regex_to_dfa(r);
}

Int word_value(const DigitWord& w) { return w.size() == 0 ? Int(0) : w.decode()[0]; }

Formula branch_formula(const PlusBranch& branch, int base, const std::string& x,
                       const SynthOptions& opts) {
    if (branch.blocks.empty()) return f_eq_const(base, x, word_value(branch.head));

    const DigitWord& v0 = branch.head;
    const DigitWord& w1 = branch.blocks[0].first;
    PlusBranch m_branch{branch.blocks[0].second,
                        {branch.blocks.begin() + 1, branch.blocks.end()}};
    Dfa m_dfa = branch_dfa(m_branch);

    // Values of N = w1+ . M, as a formula of one variable.
    auto psi = [&](const std::string& var) -> Formula {
        if (word_value(w1) == 0) {
            // Zero head loop contributes nothing to the value.
            return branch_formula(m_branch, base, var, opts);
        }
        UpSet lengths = length_set(m_dfa);
        UpSet zero_prefixes = leading_zero_lengths(m_dfa);
        UpSet zero_words = zero_word_lengths(m_dfa);
        uint64_t z0 = trailing_zero_columns(w1);

        VarGen gen{{var}, 0};
        std::string y = gen.fresh("y");
        std::string z = gen.fresh("z");
        std::string s = gen.fresh("s");
        std::string t = gen.fresh("t");
        std::string g = gen.fresh("g");
        std::vector<Formula> cases;
        if (!upset_is_empty(zero_prefixes)) {
            // y carries the M-part, z the shifted w1-block; the gap gate pins
            // the number of zeros between them to a zero-prefix length of M.
            Formula gate = f_exists(
                s, f_exists(t, f_exists(g, f_and({phi_w(base, y, s),
                                                  phi_s_u(base, zero_prefixes, s, t),
                                                  f_linear(base, {{g, Int(1)}, {t, -pow_int(base, z0)}},
                                                           Rel::Eq, Int(0)),
                                                  f_val(base, g, z)}))));
            cases.push_back(f_exists(
                y, f_exists(z, f_and({branch_formula(m_branch, base, y, opts),
                                      phi_w_plus_zeros(w1, lengths, z),
                                      f_linear(base, {{var, Int(1)}, {y, Int(-1)}, {z, Int(-1)}},
                                               Rel::Eq, Int(0)),
                                      std::move(gate)}))));
        }
        // M-words that are all zeros pair with a bare shifted w1-block.
        if (!upset_is_empty(zero_words)) cases.push_back(phi_w_plus_zeros(w1, zero_words, var));
        return or_list(base, std::move(cases));
    };

    Int head_value = word_value(v0);
    if (head_value == 0) return psi(x);

    BlockRegex w1_plus;
    w1_plus.head = DigitWord(base, 1);
    w1_plus.blocks.push_back({w1, true, DigitWord(base, 1)});
    Dfa n_dfa = concat(block_regex_to_dfa(w1_plus), m_dfa);
    UpSet n_zero_prefixes = leading_zero_lengths(n_dfa);
    UpSet n_zero_words = zero_word_lengths(n_dfa);

    VarGen gen{{x}, 0};
    std::string y = gen.fresh("y");
    std::string z = gen.fresh("z");
    std::string s = gen.fresh("s");
    Int factor = opts.head_gap_extra_base_factor ? head_value * base : head_value;
    std::vector<Formula> cases;
    if (!upset_is_empty(n_zero_prefixes))
        cases.push_back(f_exists(
            y, f_exists(z, f_and({f_linear(base, {{x, Int(1)}, {y, Int(-1)}, {z, -factor}}, Rel::Eq,
                                           Int(0)),
                                  psi(y),
                                  f_exists(s, f_and({phi_w(base, y, s),
                                                     phi_s_u(base, n_zero_prefixes, s, z)}))}))));
    if (!upset_is_empty(n_zero_words)) {
        std::string t = gen.fresh("t");
        VarGen gen2{{x, t}, 0};
        cases.push_back(f_exists(
            t, f_and({s_u_at_one(base, n_zero_words, t, gen2),
                      f_linear(base, {{x, Int(1)}, {t, -head_value}}, Rel::Eq, Int(0))})));
    }
    return or_list(base, std::move(cases));
}

std::vector<PlusBranch> expand_branches(const BlockRegex& r) {
    std::vector<int> star_positions;
    for (size_t i = 0; i < r.blocks.size(); ++i)
        if (!r.blocks[i].plus) star_positions.push_back(static_cast<int>(i));
    std::vector<PlusBranch> out;
    size_t cases = size_t(1) << star_positions.size();
    for (size_t mask = 0; mask < cases; ++mask) {
        PlusBranch b;
        b.head = r.head;
        auto include = [&](size_t block_index) {
            for (size_t k = 0; k < star_positions.size(); ++k)
                if (star_positions[k] == static_cast<int>(block_index)) return (mask >> k) & 1;
            return size_t(1);  // plus blocks are mandatory
        };
        for (size_t i = 0; i < r.blocks.size(); ++i) {
            if (include(i)) {
                b.blocks.emplace_back(r.blocks[i].loop, r.blocks[i].tail);
            } else if (b.blocks.empty()) {
                b.head = concat_words(b.head, r.blocks[i].tail);
            } else {
                b.blocks.back().second = concat_words(b.blocks.back().second, r.blocks[i].tail);
            }
        }
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace

Formula synth_existential(const std::vector<BlockRegex>& rs, const std::string& target,
                          const SynthOptions& opts) {
    if (rs.empty()) throw std::invalid_argument("empty regex union");
    int base = rs[0].base();
    for (const auto& r : rs) {
        if (r.base() != base) throw std::invalid_argument("mixed bases in regex union");
        if (r.head.dim() != 1) throw std::invalid_argument("block regexes are dim-1");
    }

    // Expand stars into the plus/absent case split, dropping branches whose
    // exact word language repeats.
    std::vector<PlusBranch> branches;
    std::set<std::string> seen;
    for (const auto& r : rs)
        for (auto& b : expand_branches(r)) {
            std::string key = write_automaton(branch_dfa(b));
            if (seen.insert(key).second) branches.push_back(std::move(b));
        }

    std::vector<Formula> parts;
    for (const auto& b : branches) parts.push_back(branch_formula(b, base, target, opts));
    Formula result = or_list(base, std::move(parts));

    Dfa expected = zero_closure(block_regex_to_dfa(rs));
    Dfa got = compile(result, opts.compile);
    if (auto cex = equivalence_counterexample(got, expected))
        throw RoundTripError("existential synthesis round trip failed", *cex);
    return result;
}

// --- one-alternation synthesis -------------------------------------------------------

Formula synth_sigma2(const Dfa& a, const SynthOptions& opts) {
    if (a.dim < 1) throw std::invalid_argument("synth_sigma2 expects dim >= 1");
    if (!is_zero_closed(a)) throw std::invalid_argument("synth_sigma2 expects a zero-closed automaton");
    int base = a.base;
    int d = a.dim;
    // Reverse so runs consume digits least significant first, aligned with
    // ascending powers of the base.
    Dfa rev = determinize_minimize(reverse(a));
    size_t q_count = rev.num_states();

    std::vector<std::string> xs;
    if (d == 1) {
        xs.push_back("x");
    } else {
        for (int j = 0; j < d; ++j) xs.push_back("x" + std::to_string(j));
    }
    std::vector<std::string> marks;
    for (size_t q = 0; q < q_count; ++q) marks.push_back("r" + std::to_string(q));
    std::string len = "len";
    std::string pos = "pos";

    TermSlot at_one{Int(1), std::nullopt};
    TermSlot at_len{Int(1), len};
    TermSlot at_pos{Int(1), pos};
    TermSlot at_next{Int(base), pos};

    std::vector<Formula> outer;
    outer.push_back(f_pow(base, len));
    for (const auto& xv : xs)
        outer.push_back(f_linear(base, {{xv, Int(1)}, {len, Int(-1)}}, Rel::Lt, Int(0)));
    outer.push_back(digit_eq(base, 1, at_one, marks[static_cast<size_t>(rev.initial)], false));
    {
        std::vector<Formula> accepts;
        for (size_t q = 0; q < q_count; ++q)
            if (rev.accepting[q]) accepts.push_back(digit_eq(base, 1, at_len, marks[q], false));
        outer.push_back(or_list(base, std::move(accepts)));
    }

    // Exactly one run marker per position.
    std::vector<Formula> eo_parts;
    for (size_t q = 0; q < q_count; ++q) {
        std::vector<Formula> conj{digit_eq_pi1(base, 1, at_pos, marks[q], false)};
        for (size_t q2 = 0; q2 < q_count; ++q2)
            if (q2 != q) conj.push_back(digit_eq_pi1(base, 0, at_pos, marks[q2], false));
        eo_parts.push_back(and_list(base, std::move(conj)));
    }
    Formula exactly_one = or_list(base, std::move(eo_parts));

    // Local transition consistency between positions pos and base*pos.
    std::vector<Formula> tr_parts;
    Letter n_letters = alphabet_size(base, d);
    for (size_t q = 0; q < q_count; ++q) {
        for (Letter v = 0; v < n_letters; ++v) {
            std::vector<Formula> clause{f_not(digit_eq(base, 1, at_pos, marks[q], false))};
            auto digits = unpack_column(v, base, d);
            for (int j = 0; j < d; ++j)
                clause.push_back(f_not(digit_eq(base, digits[static_cast<size_t>(j)], at_pos,
                                                xs[static_cast<size_t>(j)], false)));
            int target_state = rev.step(static_cast<int>(q), v);
            if (target_state >= 0)
                clause.push_back(
                    digit_eq_pi1(base, 1, at_next, marks[static_cast<size_t>(target_state)], false));
            tr_parts.push_back(or_list(base, std::move(clause)));
        }
    }
    Formula transitions = and_list(base, std::move(tr_parts));

    Formula local = f_and(
        {std::move(exactly_one),
         f_or({f_linear(base, {{pos, Int(base)}, {len, Int(-1)}}, Rel::Gt, Int(0)),
               std::move(transitions)})});
    Formula universal = f_forall(
        pos, f_or({f_not(f_pow(base, pos)),
                   f_linear(base, {{pos, Int(1)}, {len, Int(-1)}}, Rel::Gt, Int(0)),
                   std::move(local)}));
    outer.push_back(std::move(universal));

    Formula body = and_list(base, std::move(outer));
    Formula result = std::move(body);
    result = f_exists(len, std::move(result));
    for (size_t q = q_count; q-- > 0;) result = f_exists(marks[q], std::move(result));

    Dfa expected = canonical(a);
    Dfa got = compile(result, opts.compile);
    if (auto cex = equivalence_counterexample(got, expected))
        throw RoundTripError("one-alternation synthesis round trip failed", *cex);
    return result;
}

// --- quantifier shape ------------------------------------------------------------------

namespace {

void shape_rec(const Formula& f, bool neg, bool under_forall, ShapeAudit& audit, int last_block,
               int switches) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, NaryNode>) {
                for (const auto& c : node.children)
                    shape_rec(*c, neg, under_forall, audit, last_block, switches);
            } else if constexpr (std::is_same_v<T, NotNode>) {
                shape_rec(*node.child, !neg, under_forall, audit, last_block, switches);
            } else if constexpr (std::is_same_v<T, QuantNode>) {
                bool exists_eff = neg ? !node.exists : node.exists;
                int block = exists_eff ? 1 : 2;
                int sw = switches + ((last_block != 0 && block != last_block) ? 1 : 0);
                audit.alternations = std::max(audit.alternations, sw);
                if (!exists_eff) {
                    audit.universal_free = false;
                    shape_rec(*node.body, neg, true, audit, block, sw);
                } else {
                    if (under_forall) audit.exists_under_forall = true;
                    shape_rec(*node.body, neg, under_forall, audit, block, sw);
                }
            }
        },
        f.node);
}

}  // namespace

ShapeAudit quantifier_shape(const Formula& f) {
    ShapeAudit audit;
    shape_rec(f, false, false, audit, 0, 0);
    return audit;
}

}  // namespace buchi
