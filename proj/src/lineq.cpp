#include "buchi/lineq.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace buchi {

namespace {

Int one_infinity_norm(const std::vector<std::vector<Int>>& matrix) {
    Int best = 0;
    for (const auto& row : matrix) {
        Int sum = 0;
        for (const Int& a : row) sum += a < 0 ? Int(-a) : a;
        best = std::max(best, sum);
    }
    return best;
}

Int infinity_norm(const std::vector<Int>& v) {
    Int best = 0;
    for (const Int& a : v) best = std::max(best, a < 0 ? Int(-a) : a);
    return best;
}

std::string label_str(const std::vector<Int>& label) {
    std::string s = "(";
    for (size_t i = 0; i < label.size(); ++i) {
        if (i) s += ',';
        s += label[i].str();
    }
    return s + ")";
}

}  // namespace

EqAutomaton build_eq_automaton(const std::vector<std::vector<Int>>& matrix,
                               const std::vector<Int>& rhs, int base, int dim) {
    size_t m = matrix.size();
    if (rhs.size() != m) throw std::invalid_argument("matrix/rhs size mismatch");
    for (const auto& row : matrix)
        if (static_cast<int>(row.size()) != dim)
            throw std::invalid_argument("matrix row arity mismatch");
    Letter n_letters = alphabet_size(base, dim);

    // A.u per letter, reused throughout.
    std::vector<std::vector<Int>> col_sum(n_letters, std::vector<Int>(m, Int(0)));
    for (Letter l = 0; l < n_letters; ++l) {
        auto digits = unpack_column(l, base, dim);
        for (size_t r = 0; r < m; ++r) {
            Int s = 0;
            for (int t = 0; t < dim; ++t) s += matrix[r][static_cast<size_t>(t)] * digits[static_cast<size_t>(t)];
            col_sum[l][r] = s;
        }
    }

    Int bound = std::max(one_infinity_norm(matrix), infinity_norm(rhs));

    // Backward closure from the accepting label c: q is co-reachable iff
    // base*q + A.u is, for some letter u, with exact division.
    std::map<std::vector<Int>, int> ids;
    std::vector<std::vector<Int>> labels;
    auto intern = [&](std::vector<Int> label) {
        auto [it, inserted] = ids.emplace(std::move(label), static_cast<int>(ids.size()));
        if (inserted) labels.push_back(it->first);
        return it->second;
    };
    intern(rhs);
    for (size_t idx = 0; idx < labels.size(); ++idx) {
        std::vector<Int> target = labels[idx];
        for (Letter l = 0; l < n_letters; ++l) {
            std::vector<Int> source(m);
            bool integral = true;
            for (size_t r = 0; r < m && integral; ++r) {
                Int num = target[r] - col_sum[l][r];
                // Round-toward-zero division; require exactness.
                if (num % base != 0) {
                    integral = false;
                    break;
                }
                source[r] = num / base;
            }
            if (!integral) continue;
            if (infinity_norm(source) > bound) continue;  // cannot happen; cap only
            intern(std::move(source));
        }
    }

    std::vector<Int> zero(m, Int(0));
    EqAutomaton out;
    out.matrix = matrix;
    out.rhs = rhs;
    out.norm_bound = bound;
    auto co_id = [&](const std::vector<Int>& label) -> int {
        auto it = ids.find(label);
        return it == ids.end() ? -1 : it->second;
    };
    if (co_id(zero) < 0) {
        out.dfa = empty_dfa(base, dim);
        out.state_labels = {zero};
        out.dfa.labels = {label_str(zero)};
        return out;
    }

    // Forward from 0 within the co-reachable set.
    std::map<std::vector<Int>, int> fids;
    std::vector<std::vector<Int>> fl;
    auto fintern = [&](std::vector<Int> label) {
        auto [it, inserted] = fids.emplace(std::move(label), static_cast<int>(fids.size()));
        if (inserted) fl.push_back(it->first);
        return it->second;
    };
    fintern(zero);
    Dfa a;
    a.base = base;
    a.dim = dim;
    a.initial = 0;
    for (size_t idx = 0; idx < fl.size(); ++idx) {
        std::vector<Int> q = fl[idx];
        a.trans.resize(fl.size());
        for (Letter l = 0; l < n_letters; ++l) {
            std::vector<Int> next(m);
            for (size_t r = 0; r < m; ++r) next[r] = Int(base) * q[r] + col_sum[l][r];
            if (co_id(next) < 0) continue;
            int t = fintern(std::move(next));
            a.trans[idx].emplace_back(l, t);
        }
        a.trans.resize(fl.size());
    }
    a.accepting.assign(fl.size(), false);
    auto fin = fids.find(rhs);
    if (fin != fids.end()) a.accepting[static_cast<size_t>(fin->second)] = true;
    for (const auto& lab : fl) out.state_labels.push_back(lab);
    for (const auto& lab : fl) a.labels.push_back(label_str(lab));

    // Trim once more: forward x backward within the kept graph, preserving
    // labels.
    std::vector<bool> keep(fl.size(), false);
    {
        std::vector<std::vector<int>> rev(fl.size());
        for (size_t s = 0; s < fl.size(); ++s)
            for (auto [l, t] : a.trans[s]) rev[static_cast<size_t>(t)].push_back(static_cast<int>(s));
        std::deque<int> queue;
        for (size_t s = 0; s < fl.size(); ++s)
            if (a.accepting[s]) {
                keep[s] = true;
                queue.push_back(static_cast<int>(s));
            }
        while (!queue.empty()) {
            int s = queue.front();
            queue.pop_front();
            for (int p : rev[static_cast<size_t>(s)])
                if (!keep[static_cast<size_t>(p)]) {
                    keep[static_cast<size_t>(p)] = true;
                    queue.push_back(p);
                }
        }
    }
    if (!keep[0]) {
        out.dfa = empty_dfa(base, dim);
        out.state_labels = {zero};
        out.dfa.labels = {label_str(zero)};
        return out;
    }
    std::vector<int> remap(fl.size(), -1);
    int next_id = 0;
    for (size_t s = 0; s < fl.size(); ++s)
        if (keep[s]) remap[s] = next_id++;
    Dfa b;
    b.base = base;
    b.dim = dim;
    b.initial = remap[0];
    b.trans.resize(static_cast<size_t>(next_id));
    b.accepting.assign(static_cast<size_t>(next_id), false);
    std::vector<std::vector<Int>> kept_labels(static_cast<size_t>(next_id));
    b.labels.resize(static_cast<size_t>(next_id));
    for (size_t s = 0; s < fl.size(); ++s) {
        if (remap[s] < 0) continue;
        size_t ns = static_cast<size_t>(remap[s]);
        b.accepting[ns] = a.accepting[s];
        kept_labels[ns] = fl[s];
        b.labels[ns] = label_str(fl[s]);
        for (auto [l, t] : a.trans[s])
            if (remap[static_cast<size_t>(t)] >= 0)
                b.trans[ns].emplace_back(l, remap[static_cast<size_t>(t)]);
    }
    for (auto& row : b.trans) std::sort(row.begin(), row.end());
    out.dfa = std::move(b);
    out.state_labels = std::move(kept_labels);
    return out;
}

Dfa build_vp_automaton(int base, int dim, int x_index, int y_index) {
    if (x_index < 0 || x_index >= dim || y_index < 0 || y_index >= dim)
        throw std::invalid_argument("valuation track out of range");
    Letter n_letters = alphabet_size(base, dim);
    Dfa a;
    a.base = base;
    a.dim = dim;
    a.initial = 0;
    a.trans.resize(2);
    a.accepting = {false, true};
    a.labels = {"0", "1"};
    for (Letter l = 0; l < n_letters; ++l) {
        int dx = column_digit(l, base, dim, x_index);
        int dy = column_digit(l, base, dim, y_index);
        if (dx == 0) a.trans[0].emplace_back(l, 0);
        else if (dx == 1 && dy > 0) a.trans[0].emplace_back(l, 1);
        if (dx == 0 && dy == 0) a.trans[1].emplace_back(l, 1);
    }
    return a;
}

Dfa build_system_automaton(const LinSystem& s) {
    int dim = static_cast<int>(s.vars.size());
    EqAutomaton eq = build_eq_automaton(s.matrix, s.rhs, s.base, dim);
    Dfa acc = canonical(eq.dfa);
    for (auto [x, y] : s.valuations)
        acc = product(acc, build_vp_automaton(s.base, dim, x, y), BoolOp::And);
    return acc;
}

SystemProduct build_system_product(const LinSystem& s) {
    int dim = static_cast<int>(s.vars.size());
    EqAutomaton eq = build_eq_automaton(s.matrix, s.rhs, s.base, dim);

    // Component automata: the labeled equation DFA plus one V automaton per
    // constraint; explicit product keeps the tuple labels.
    std::vector<Dfa> vps;
    for (auto [x, y] : s.valuations) vps.push_back(build_vp_automaton(s.base, dim, x, y));

    using PState = std::vector<int>;
    std::map<PState, int> ids;
    std::vector<PState> states;
    auto intern = [&](PState st) {
        auto [it, inserted] = ids.emplace(std::move(st), static_cast<int>(ids.size()));
        if (inserted) states.push_back(it->first);
        return it->second;
    };
    PState init(vps.size() + 1, 0);
    init[0] = eq.dfa.initial;
    intern(init);
    Dfa a;
    a.base = s.base;
    a.dim = dim;
    a.initial = 0;
    for (size_t idx = 0; idx < states.size(); ++idx) {
        PState cur = states[idx];
        a.trans.resize(states.size());
        for (auto [l, t0] : eq.dfa.trans[static_cast<size_t>(cur[0])]) {
            PState next(cur.size());
            next[0] = t0;
            bool ok = true;
            for (size_t k = 0; k < vps.size(); ++k) {
                int t = vps[k].step(cur[k + 1], l);
                if (t < 0) {
                    ok = false;
                    break;
                }
                next[k + 1] = t;
            }
            if (!ok) continue;
            a.trans[idx].emplace_back(l, intern(std::move(next)));
        }
        a.trans.resize(states.size());
    }
    a.accepting.assign(states.size(), false);
    for (size_t idx = 0; idx < states.size(); ++idx) {
        const PState& st = states[idx];
        bool fin = eq.dfa.accepting[static_cast<size_t>(st[0])];
        for (size_t k = 0; k < vps.size() && fin; ++k)
            if (!vps[k].accepting[static_cast<size_t>(st[k + 1])]) fin = false;
        a.accepting[idx] = fin;
    }

    // Trim, keeping labels aligned.
    std::vector<std::vector<int>> rev(states.size());
    for (size_t src = 0; src < states.size(); ++src)
        for (auto [l, t] : a.trans[src]) rev[static_cast<size_t>(t)].push_back(static_cast<int>(src));
    std::vector<bool> keep(states.size(), false);
    std::deque<int> queue;
    for (size_t src = 0; src < states.size(); ++src)
        if (a.accepting[src]) {
            keep[src] = true;
            queue.push_back(static_cast<int>(src));
        }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int p : rev[static_cast<size_t>(v)])
            if (!keep[static_cast<size_t>(p)]) {
                keep[static_cast<size_t>(p)] = true;
                queue.push_back(p);
            }
    }
    SystemProduct out;
    if (!keep[0]) {
        out.dfa = empty_dfa(s.base, dim);
        out.state_labels = {"(empty)"};
        return out;
    }
    std::vector<int> remap(states.size(), -1);
    int next_id = 0;
    for (size_t src = 0; src < states.size(); ++src)
        if (keep[src]) remap[src] = next_id++;
    Dfa b;
    b.base = s.base;
    b.dim = dim;
    b.initial = remap[0];
    b.trans.resize(static_cast<size_t>(next_id));
    b.accepting.assign(static_cast<size_t>(next_id), false);
    out.state_labels.resize(static_cast<size_t>(next_id));
    for (size_t src = 0; src < states.size(); ++src) {
        if (remap[src] < 0) continue;
        size_t ns = static_cast<size_t>(remap[src]);
        b.accepting[ns] = a.accepting[src];
        std::string lab = eq.dfa.labels[static_cast<size_t>(states[src][0])];
        if (!vps.empty()) {
            lab += "|";
            for (size_t k = 0; k < vps.size(); ++k) lab += std::to_string(states[src][k + 1]);
        }
        out.state_labels[ns] = lab;
        for (auto [l, t] : a.trans[src])
            if (remap[static_cast<size_t>(t)] >= 0)
                b.trans[ns].emplace_back(l, remap[static_cast<size_t>(t)]);
    }
    for (auto& row : b.trans) std::sort(row.begin(), row.end());
    b.labels = out.state_labels;
    out.dfa = std::move(b);
    return out;
}

std::vector<Int> step_transition_law(const std::vector<Int>& source, const DigitWord& w,
                                     const std::vector<std::vector<Int>>& matrix, int base) {
    size_t m = matrix.size();
    std::vector<Int> cur = source;
    for (size_t i = 0; i < w.size(); ++i) {
        auto digits = w.column(i);
        std::vector<Int> next(m);
        for (size_t r = 0; r < m; ++r) {
            Int s = Int(base) * cur[r];
            for (size_t t = 0; t < digits.size(); ++t) s += matrix[r][t] * digits[t];
            next[r] = s;
        }
        cur = std::move(next);
    }
    return cur;
}

bool check_reach_char(const std::vector<Int>& source, const std::vector<Int>& target,
                      const DigitWord& w, const std::vector<std::vector<Int>>& matrix, int base) {
    size_t m = matrix.size();
    if (source.size() != m || target.size() != m)
        throw std::invalid_argument("label arity mismatch");
    // target = y * source + A . x with x = [[w]], y = base^|w|; the max-norm
    // side condition |x|_inf < y holds for every digit word of length |w|.
    std::vector<Int> x = w.decode();
    Int y = 1;
    for (size_t i = 0; i < w.size(); ++i) y *= base;
    for (size_t r = 0; r < m; ++r) {
        Int acc = y * source[r];
        for (size_t t = 0; t < x.size(); ++t) acc += matrix[r][t] * x[t];
        if (acc != target[r]) return false;
    }
    return true;
}

}  // namespace buchi
