#include "buchi/dfa.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <queue>

namespace buchi {

int Dfa::step(int state, Letter a) const {
    const auto& row = trans[static_cast<size_t>(state)];
    auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(a, -1));
    if (it != row.end() && it->first == a) return it->second;
    return -1;
}

bool Dfa::accepts(const std::vector<Letter>& word) const {
    int s = initial;
    for (Letter a : word) {
        s = step(s, a);
        if (s < 0) return false;
    }
    return accepting[static_cast<size_t>(s)];
}

bool Dfa::accepts(const DigitWord& w) const {
    if (w.base() != base || w.dim() != dim)
        throw std::invalid_argument("word/automaton alphabet mismatch");
    return accepts(w.letters());
}

Dfa empty_dfa(int base, int dim) {
    Dfa a;
    a.base = base;
    a.dim = dim;
    a.initial = 0;
    a.trans.resize(1);
    a.accepting.assign(1, false);
    (void)alphabet_size(base, dim);
    return a;
}

Dfa universal_dfa(int base, int dim) {
    Dfa a;
    a.base = base;
    a.dim = dim;
    a.initial = 0;
    a.trans.resize(1);
    Letter n = alphabet_size(base, dim);
    for (Letter l = 0; l < n; ++l) a.trans[0].emplace_back(l, 0);
    a.accepting.assign(1, true);
    return a;
}

Dfa word_dfa(const DigitWord& w) {
    Dfa a;
    a.base = w.base();
    a.dim = w.dim();
    a.initial = 0;
    size_t n = w.size();
    a.trans.resize(n + 1);
    a.accepting.assign(n + 1, false);
    a.accepting[n] = true;
    for (size_t i = 0; i < n; ++i)
        a.trans[i].emplace_back(w.letter(i), static_cast<int>(i + 1));
    return a;
}

namespace {

void sort_rows(std::vector<std::vector<std::pair<Letter, int>>>& rows) {
    for (auto& row : rows) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
}

// Keeps states reachable from the initial and co-reachable to some accepting
// state; returns false if the language is empty.
bool trim_in_place(Dfa& a) {
    size_t n = a.num_states();
    std::vector<bool> fwd(n, false);
    std::deque<int> queue{a.initial};
    fwd[static_cast<size_t>(a.initial)] = true;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (auto [l, t] : a.trans[static_cast<size_t>(s)])
            if (!fwd[static_cast<size_t>(t)]) {
                fwd[static_cast<size_t>(t)] = true;
                queue.push_back(t);
            }
    }
    std::vector<std::vector<int>> rev(n);
    for (size_t s = 0; s < n; ++s)
        for (auto [l, t] : a.trans[s]) rev[static_cast<size_t>(t)].push_back(static_cast<int>(s));
    std::vector<bool> bwd(n, false);
    for (size_t s = 0; s < n; ++s)
        if (a.accepting[s] && fwd[s]) {
            bwd[s] = true;
            queue.push_back(static_cast<int>(s));
        }
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (int p : rev[static_cast<size_t>(s)])
            if (fwd[static_cast<size_t>(p)] && !bwd[static_cast<size_t>(p)]) {
                bwd[static_cast<size_t>(p)] = true;
                queue.push_back(p);
            }
    }
    if (!bwd[static_cast<size_t>(a.initial)]) return false;

    std::vector<int> remap(n, -1);
    int next = 0;
    for (size_t s = 0; s < n; ++s)
        if (fwd[s] && bwd[s]) remap[s] = next++;
    Dfa b;
    b.base = a.base;
    b.dim = a.dim;
    b.initial = remap[static_cast<size_t>(a.initial)];
    b.trans.resize(static_cast<size_t>(next));
    b.accepting.assign(static_cast<size_t>(next), false);
    for (size_t s = 0; s < n; ++s) {
        if (remap[s] < 0) continue;
        b.accepting[static_cast<size_t>(remap[s])] = a.accepting[s];
        for (auto [l, t] : a.trans[s])
            if (remap[static_cast<size_t>(t)] >= 0)
                b.trans[static_cast<size_t>(remap[s])].emplace_back(l, remap[static_cast<size_t>(t)]);
    }
    sort_rows(b.trans);
    a = std::move(b);
    return true;
}

// Moore partition refinement on a trim automaton; missing transitions count
// as their own implicit class.
Dfa quotient_minimize(const Dfa& a) {
    size_t n = a.num_states();
    std::vector<int> cls(n);
    bool has_acc = false, has_rej = false;
    for (size_t s = 0; s < n; ++s) {
        cls[s] = a.accepting[s] ? 1 : 0;
        (a.accepting[s] ? has_acc : has_rej) = true;
    }
    size_t num_classes = (has_acc && has_rej) ? 2 : 1;
    while (true) {
        std::map<std::pair<int, std::vector<std::pair<Letter, int>>>, int> sig_map;
        std::vector<int> next_cls(n);
        for (size_t s = 0; s < n; ++s) {
            std::vector<std::pair<Letter, int>> sig;
            sig.reserve(a.trans[s].size());
            for (auto [l, t] : a.trans[s]) sig.emplace_back(l, cls[static_cast<size_t>(t)]);
            auto key = std::make_pair(cls[s], std::move(sig));
            auto [it, inserted] = sig_map.emplace(std::move(key), static_cast<int>(sig_map.size()));
            next_cls[s] = it->second;
        }
        if (sig_map.size() == num_classes) {
            cls = next_cls;
            break;
        }
        num_classes = sig_map.size();
        cls = next_cls;
    }
    Dfa b;
    b.base = a.base;
    b.dim = a.dim;
    b.initial = cls[static_cast<size_t>(a.initial)];
    b.trans.resize(num_classes);
    b.accepting.assign(num_classes, false);
    std::vector<bool> done(num_classes, false);
    for (size_t s = 0; s < n; ++s) {
        int c = cls[s];
        if (done[static_cast<size_t>(c)]) continue;
        done[static_cast<size_t>(c)] = true;
        b.accepting[static_cast<size_t>(c)] = a.accepting[s];
        for (auto [l, t] : a.trans[s])
            b.trans[static_cast<size_t>(c)].emplace_back(l, cls[static_cast<size_t>(t)]);
    }
    sort_rows(b.trans);
    return b;
}

Dfa bfs_renumber(const Dfa& a) {
    size_t n = a.num_states();
    std::vector<int> remap(n, -1);
    std::deque<int> queue{a.initial};
    remap[static_cast<size_t>(a.initial)] = 0;
    int next = 1;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (auto [l, t] : a.trans[static_cast<size_t>(s)])
            if (remap[static_cast<size_t>(t)] < 0) {
                remap[static_cast<size_t>(t)] = next++;
                queue.push_back(t);
            }
    }
    Dfa b;
    b.base = a.base;
    b.dim = a.dim;
    b.initial = 0;
    b.trans.resize(static_cast<size_t>(next));
    b.accepting.assign(static_cast<size_t>(next), false);
    for (size_t s = 0; s < n; ++s) {
        if (remap[s] < 0) continue;
        b.accepting[static_cast<size_t>(remap[s])] = a.accepting[s];
        for (auto [l, t] : a.trans[s])
            b.trans[static_cast<size_t>(remap[s])].emplace_back(l, remap[static_cast<size_t>(t)]);
    }
    sort_rows(b.trans);
    return b;
}

}  // namespace

Dfa canonical(const Dfa& a) {
    Dfa t = a;
    t.labels.clear();
    if (!trim_in_place(t)) return empty_dfa(a.base, a.dim);
    return bfs_renumber(quotient_minimize(t));
}

bool is_empty_language(const Dfa& a) {
    std::vector<bool> seen(a.num_states(), false);
    std::deque<int> queue{a.initial};
    seen[static_cast<size_t>(a.initial)] = true;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        if (a.accepting[static_cast<size_t>(s)]) return false;
        for (auto [l, t] : a.trans[static_cast<size_t>(s)])
            if (!seen[static_cast<size_t>(t)]) {
                seen[static_cast<size_t>(t)] = true;
                queue.push_back(t);
            }
    }
    return true;
}

Dfa product(const Dfa& a, const Dfa& b, BoolOp op) {
    if (a.base != b.base || a.dim != b.dim)
        throw std::invalid_argument("product: base/dim mismatch");
    // Pair states; -1 is the rejecting sink of either side (Or only).
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> pairs;
    auto intern = [&](int x, int y) {
        auto [it, inserted] = ids.emplace(std::make_pair(x, y), static_cast<int>(ids.size()));
        if (inserted) pairs.emplace_back(x, y);
        return it->second;
    };
    Dfa out;
    out.base = a.base;
    out.dim = a.dim;
    out.initial = intern(a.initial, b.initial);
    static const std::vector<std::pair<Letter, int>> kNone;
    for (size_t idx = 0; idx < pairs.size(); ++idx) {
        if (pairs.size() > kDefaultStateCap) throw StateExplosionError("product state cap exceeded");
        auto [x, y] = pairs[idx];
        out.trans.resize(pairs.size());
        const auto& rx = x >= 0 ? a.trans[static_cast<size_t>(x)] : kNone;
        const auto& ry = y >= 0 ? b.trans[static_cast<size_t>(y)] : kNone;
        // Merge the sorted rows; for Or, a letter missing on one side still
        // moves, pairing with the virtual sink -1.
        size_t i = 0, j = 0;
        std::vector<std::pair<Letter, int>> row;
        while (i < rx.size() || j < ry.size()) {
            Letter lx = i < rx.size() ? rx[i].first : ~Letter(0);
            Letter ly = j < ry.size() ? ry[j].first : ~Letter(0);
            if (lx == ly) {
                row.emplace_back(lx, intern(rx[i].second, ry[j].second));
                ++i, ++j;
            } else if (lx < ly) {
                if (op == BoolOp::Or) row.emplace_back(lx, intern(rx[i].second, -1));
                ++i;
            } else {
                if (op == BoolOp::Or) row.emplace_back(ly, intern(-1, ry[j].second));
                ++j;
            }
        }
        out.trans[idx] = std::move(row);
        out.trans.resize(pairs.size());
    }
    out.accepting.assign(pairs.size(), false);
    for (size_t idx = 0; idx < pairs.size(); ++idx) {
        auto [x, y] = pairs[idx];
        bool ax = x >= 0 && a.accepting[static_cast<size_t>(x)];
        bool ay = y >= 0 && b.accepting[static_cast<size_t>(y)];
        out.accepting[idx] = (op == BoolOp::And) ? (ax && ay) : (ax || ay);
    }
    return canonical(out);
}

Dfa complement(const Dfa& a) {
    Letter n_letters = alphabet_size(a.base, a.dim);
    size_t n = a.num_states();
    Dfa b;
    b.base = a.base;
    b.dim = a.dim;
    b.initial = a.initial;
    b.trans.resize(n + 1);
    b.accepting.assign(n + 1, true);
    int sink = static_cast<int>(n);
    for (size_t s = 0; s < n; ++s) {
        b.accepting[s] = !a.accepting[s];
        auto& row = b.trans[s];
        row.reserve(n_letters);
        size_t i = 0;
        const auto& src = a.trans[s];
        for (Letter l = 0; l < n_letters; ++l) {
            if (i < src.size() && src[i].first == l) {
                row.emplace_back(l, src[i].second);
                ++i;
            } else {
                row.emplace_back(l, sink);
            }
        }
    }
    auto& srow = b.trans[static_cast<size_t>(sink)];
    srow.reserve(n_letters);
    for (Letter l = 0; l < n_letters; ++l) srow.emplace_back(l, sink);
    return canonical(b);
}

Nfa project_tracks(const Dfa& a, const std::vector<int>& kept, bool saturate) {
    for (int k : kept)
        if (k < 0 || k >= a.dim) throw std::invalid_argument("projection track out of range");
    Nfa out;
    out.base = a.base;
    out.dim = static_cast<int>(kept.size());
    out.trans.resize(a.num_states());
    out.accepting = a.accepting;
    for (size_t s = 0; s < a.num_states(); ++s) {
        for (auto [l, t] : a.trans[s]) {
            std::vector<int> digits = unpack_column(l, a.base, a.dim);
            std::vector<int> kept_digits;
            kept_digits.reserve(kept.size());
            for (int k : kept) kept_digits.push_back(digits[static_cast<size_t>(k)]);
            out.trans[s].emplace_back(pack_column(kept_digits, a.base), t);
        }
    }
    sort_rows(out.trans);
    out.initials = {a.initial};
    if (saturate) {
        // Everything reachable by columns that are zero on all kept tracks.
        std::vector<bool> seen(a.num_states(), false);
        std::deque<int> queue{a.initial};
        seen[static_cast<size_t>(a.initial)] = true;
        while (!queue.empty()) {
            int s = queue.front();
            queue.pop_front();
            for (auto [l, t] : a.trans[static_cast<size_t>(s)]) {
                bool zero_on_kept = true;
                for (int k : kept)
                    if (column_digit(l, a.base, a.dim, k) != 0) {
                        zero_on_kept = false;
                        break;
                    }
                if (zero_on_kept && !seen[static_cast<size_t>(t)]) {
                    seen[static_cast<size_t>(t)] = true;
                    queue.push_back(t);
                }
            }
        }
        out.initials.clear();
        for (size_t s = 0; s < seen.size(); ++s)
            if (seen[s]) out.initials.push_back(static_cast<int>(s));
    }
    return out;
}

Nfa project(const Dfa& a, int component) {
    if (component < 0 || component >= a.dim)
        throw std::invalid_argument("projection component out of range");
    std::vector<int> kept;
    for (int i = 0; i < a.dim; ++i)
        if (i != component) kept.push_back(i);
    return project_tracks(a, kept, true);
}

Dfa determinize_minimize(const Nfa& a, size_t state_cap) {
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> subsets;
    auto intern = [&](std::vector<int> set) {
        auto [it, inserted] = ids.emplace(std::move(set), static_cast<int>(ids.size()));
        if (inserted) subsets.push_back(it->first);
        return it->second;
    };
    std::vector<int> init = a.initials;
    std::sort(init.begin(), init.end());
    init.erase(std::unique(init.begin(), init.end()), init.end());
    Dfa out;
    out.base = a.base;
    out.dim = a.dim;
    out.initial = intern(std::move(init));
    for (size_t idx = 0; idx < subsets.size(); ++idx) {
        if (subsets.size() > state_cap) throw StateExplosionError("determinization state cap exceeded");
        std::vector<std::pair<Letter, int>> moves;
        for (int s : subsets[idx])
            for (auto [l, t] : a.trans[static_cast<size_t>(s)]) moves.emplace_back(l, t);
        std::sort(moves.begin(), moves.end());
        moves.erase(std::unique(moves.begin(), moves.end()), moves.end());
        out.trans.resize(subsets.size());
        out.accepting.resize(subsets.size(), false);
        std::vector<std::pair<Letter, int>> row;
        size_t i = 0;
        while (i < moves.size()) {
            Letter l = moves[i].first;
            std::vector<int> target;
            while (i < moves.size() && moves[i].first == l) target.push_back(moves[i++].second);
            row.emplace_back(l, intern(std::move(target)));
        }
        out.trans[idx] = std::move(row);
        out.trans.resize(subsets.size());
        out.accepting.resize(subsets.size(), false);
    }
    for (size_t idx = 0; idx < subsets.size(); ++idx)
        for (int s : subsets[idx])
            if (a.accepting[static_cast<size_t>(s)]) {
                out.accepting[idx] = true;
                break;
            }
    return canonical(out);
}

Dfa insert_track(const Dfa& a, int position) {
    if (position < 0 || position > a.dim) throw std::invalid_argument("insert position out of range");
    Dfa b;
    b.base = a.base;
    b.dim = a.dim + 1;
    (void)alphabet_size(b.base, b.dim);
    b.initial = a.initial;
    b.accepting = a.accepting;
    b.trans.resize(a.num_states());
    uint64_t tail = 1;
    for (int i = position; i < a.dim; ++i) tail *= static_cast<uint64_t>(a.base);
    for (size_t s = 0; s < a.num_states(); ++s) {
        for (auto [l, t] : a.trans[s]) {
            uint64_t high = l / tail, low = l % tail;
            for (int v = 0; v < a.base; ++v) {
                uint64_t nl = (high * static_cast<uint64_t>(a.base) + static_cast<uint64_t>(v)) * tail + low;
                b.trans[s].emplace_back(static_cast<Letter>(nl), t);
            }
        }
    }
    sort_rows(b.trans);
    return b;
}

std::optional<DigitWord> equivalence_counterexample(const Dfa& a, const Dfa& b) {
    if (a.base != b.base || a.dim != b.dim)
        throw std::invalid_argument("equivalence: base/dim mismatch");
    auto acc = [&](const Dfa& d, int s) { return s >= 0 && d.accepting[static_cast<size_t>(s)]; };
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::pair<int, Letter>> parent;  // (pair index, letter)
    auto reconstruct = [&](int idx) {
        std::vector<Letter> letters;
        while (idx != 0) {
            letters.push_back(parent[static_cast<size_t>(idx)].second);
            idx = parent[static_cast<size_t>(idx)].first;
        }
        std::reverse(letters.begin(), letters.end());
        return DigitWord(a.base, a.dim, std::move(letters));
    };
    auto intern = [&](int x, int y, int from, Letter l) {
        auto [it, inserted] = ids.emplace(std::make_pair(x, y), static_cast<int>(ids.size()));
        if (inserted) {
            pairs.emplace_back(x, y);
            parent.emplace_back(from, l);
        }
        return std::make_pair(it->second, inserted);
    };
    intern(a.initial, b.initial, -1, 0);
    if (acc(a, a.initial) != acc(b, b.initial)) return DigitWord(a.base, a.dim);
    static const std::vector<std::pair<Letter, int>> kNone;
    for (size_t idx = 0; idx < pairs.size(); ++idx) {
        auto [x, y] = pairs[idx];
        const auto& rx = x >= 0 ? a.trans[static_cast<size_t>(x)] : kNone;
        const auto& ry = y >= 0 ? b.trans[static_cast<size_t>(y)] : kNone;
        size_t i = 0, j = 0;
        while (i < rx.size() || j < ry.size()) {
            Letter lx = i < rx.size() ? rx[i].first : ~Letter(0);
            Letter ly = j < ry.size() ? ry[j].first : ~Letter(0);
            int nx = -1, ny = -1;
            Letter l;
            if (lx == ly) {
                l = lx;
                nx = rx[i++].second;
                ny = ry[j++].second;
            } else if (lx < ly) {
                l = lx;
                nx = rx[i++].second;
            } else {
                l = ly;
                ny = ry[j++].second;
            }
            auto [nid, fresh] = intern(nx, ny, static_cast<int>(idx), l);
            if (fresh && acc(a, nx) != acc(b, ny)) return reconstruct(nid);
        }
    }
    return std::nullopt;
}

bool equivalent(const Dfa& a, const Dfa& b) { return !equivalence_counterexample(a, b).has_value(); }

Int count_words(const Dfa& a, uint64_t n) {
    std::vector<Int> cur(a.num_states(), Int(0));
    cur[static_cast<size_t>(a.initial)] = 1;
    for (uint64_t i = 0; i < n; ++i) {
        std::vector<Int> next(a.num_states(), Int(0));
        for (size_t s = 0; s < a.num_states(); ++s) {
            if (cur[s] == 0) continue;
            for (auto [l, t] : a.trans[s]) next[static_cast<size_t>(t)] += cur[s];
        }
        cur = std::move(next);
    }
    Int total = 0;
    for (size_t s = 0; s < a.num_states(); ++s)
        if (a.accepting[s]) total += cur[s];
    return total;
}

std::optional<DigitWord> shortest_word(const Dfa& a) {
    std::vector<int> parent_state(a.num_states(), -2);
    std::vector<Letter> parent_letter(a.num_states(), 0);
    std::deque<int> queue{a.initial};
    parent_state[static_cast<size_t>(a.initial)] = -1;
    int found = -1;
    if (a.accepting[static_cast<size_t>(a.initial)]) found = a.initial;
    while (found < 0 && !queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (auto [l, t] : a.trans[static_cast<size_t>(s)]) {
            if (parent_state[static_cast<size_t>(t)] != -2) continue;
            parent_state[static_cast<size_t>(t)] = s;
            parent_letter[static_cast<size_t>(t)] = l;
            if (a.accepting[static_cast<size_t>(t)]) {
                found = t;
                break;
            }
            queue.push_back(t);
        }
    }
    if (found < 0) return std::nullopt;
    std::vector<Letter> letters;
    for (int s = found; parent_state[static_cast<size_t>(s)] != -1; s = parent_state[static_cast<size_t>(s)])
        letters.push_back(parent_letter[static_cast<size_t>(s)]);
    std::reverse(letters.begin(), letters.end());
    return DigitWord(a.base, a.dim, std::move(letters));
}

std::vector<DigitWord> words_of_length(const Dfa& a, size_t n, size_t limit) {
    // reach[k][s]: an accepting state is exactly k steps away.
    std::vector<std::vector<bool>> reach(n + 1, std::vector<bool>(a.num_states(), false));
    for (size_t s = 0; s < a.num_states(); ++s) reach[0][s] = a.accepting[s];
    for (size_t k = 1; k <= n; ++k)
        for (size_t s = 0; s < a.num_states(); ++s)
            for (auto [l, t] : a.trans[s])
                if (reach[k - 1][static_cast<size_t>(t)]) {
                    reach[k][s] = true;
                    break;
                }
    std::vector<DigitWord> out;
    std::vector<Letter> word;
    std::function<void(int, size_t)> dfs = [&](int s, size_t depth) {
        if (out.size() >= limit) return;
        if (depth == n) {
            if (a.accepting[static_cast<size_t>(s)]) out.emplace_back(a.base, a.dim, word);
            return;
        }
        for (auto [l, t] : a.trans[static_cast<size_t>(s)]) {
            if (!reach[n - depth - 1][static_cast<size_t>(t)]) continue;
            word.push_back(l);
            dfs(t, depth + 1);
            word.pop_back();
            if (out.size() >= limit) return;
        }
    };
    if (reach[n][static_cast<size_t>(a.initial)]) dfs(a.initial, 0);
    return out;
}

Dfa zero_closure(const Dfa& a) {
    // States zero-reachable from the initial.
    std::vector<bool> zr(a.num_states(), false);
    std::deque<int> queue{a.initial};
    zr[static_cast<size_t>(a.initial)] = true;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        int t = a.step(s, zero_letter());
        if (t >= 0 && !zr[static_cast<size_t>(t)]) {
            zr[static_cast<size_t>(t)] = true;
            queue.push_back(t);
        }
    }
    Nfa n;
    n.base = a.base;
    n.dim = a.dim;
    size_t fresh = a.num_states();
    n.trans.resize(fresh + 1);
    n.accepting.assign(fresh + 1, false);
    for (size_t s = 0; s < a.num_states(); ++s) {
        n.accepting[s] = a.accepting[s];
        n.trans[s] = a.trans[s];
    }
    n.initials = {static_cast<int>(fresh)};
    n.trans[fresh].emplace_back(zero_letter(), static_cast<int>(fresh));
    for (size_t s = 0; s < a.num_states(); ++s) {
        if (!zr[s]) continue;
        if (a.accepting[s]) n.accepting[fresh] = true;
        for (auto [l, t] : a.trans[s]) n.trans[fresh].emplace_back(l, t);
    }
    sort_rows(n.trans);
    return determinize_minimize(n);
}

bool is_zero_closed(const Dfa& a) { return equivalent(a, zero_closure(a)); }

Dfa canonical_representation(const Dfa& a) {
    Dfa canon;
    canon.base = a.base;
    canon.dim = a.dim;
    canon.initial = 0;
    canon.trans.resize(2);
    canon.accepting.assign(2, true);
    Letter n = alphabet_size(a.base, a.dim);
    for (Letter l = 1; l < n; ++l) canon.trans[0].emplace_back(l, 1);
    for (Letter l = 0; l < n; ++l) canon.trans[1].emplace_back(l, 1);
    return product(a, canon, BoolOp::And);
}

Nfa reverse(const Dfa& a) {
    Nfa n;
    n.base = a.base;
    n.dim = a.dim;
    n.trans.resize(a.num_states());
    n.accepting.assign(a.num_states(), false);
    n.accepting[static_cast<size_t>(a.initial)] = true;
    for (size_t s = 0; s < a.num_states(); ++s)
        for (auto [l, t] : a.trans[s]) n.trans[static_cast<size_t>(t)].emplace_back(l, static_cast<int>(s));
    for (size_t s = 0; s < a.num_states(); ++s)
        if (a.accepting[s]) n.initials.push_back(static_cast<int>(s));
    sort_rows(n.trans);
    return n;
}

Dfa concat(const Dfa& a, const Dfa& b) {
    if (a.base != b.base || a.dim != b.dim)
        throw std::invalid_argument("concat: base/dim mismatch");
    Nfa n;
    n.base = a.base;
    n.dim = a.dim;
    size_t na = a.num_states();
    size_t nb = b.num_states();
    n.trans.resize(na + nb);
    n.accepting.assign(na + nb, false);
    bool b_has_epsilon = b.accepting[static_cast<size_t>(b.initial)];
    for (size_t s = 0; s < na; ++s) {
        n.trans[s] = a.trans[s];
        if (a.accepting[s]) {
            if (b_has_epsilon) n.accepting[s] = true;
            for (auto [l, t] : b.trans[static_cast<size_t>(b.initial)])
                n.trans[s].emplace_back(l, static_cast<int>(na) + t);
        }
    }
    for (size_t s = 0; s < nb; ++s) {
        n.accepting[na + s] = b.accepting[s];
        for (auto [l, t] : b.trans[s]) n.trans[na + s].emplace_back(l, static_cast<int>(na) + t);
    }
    n.initials = {a.initial};
    sort_rows(n.trans);
    return determinize_minimize(n);
}

UpSet length_set(const Dfa& a) {
    // Subset construction on the unary projection (all letters identified).
    std::map<std::vector<int>, size_t> seen;
    std::vector<std::vector<int>> chain;
    std::vector<bool> final_at;
    std::vector<int> cur{a.initial};
    while (true) {
        auto it = seen.find(cur);
        if (it != seen.end()) {
            uint64_t t = it->second;
            uint64_t l = chain.size() - it->second;
            UpSet u;
            u.threshold = t;
            u.period = l;
            for (uint64_t i = 0; i < t; ++i)
                if (final_at[i]) u.initial.insert(i);
            for (uint64_t r = 0; r < l; ++r)
                if (final_at[t + r]) u.residues.insert(r);
            return upset_normalize(u);
        }
        seen.emplace(cur, chain.size());
        chain.push_back(cur);
        bool fin = false;
        for (int s : cur)
            if (a.accepting[static_cast<size_t>(s)]) fin = true;
        final_at.push_back(fin);
        std::vector<int> next;
        for (int s : cur)
            for (auto [l, t] : a.trans[static_cast<size_t>(s)]) next.push_back(t);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        cur = std::move(next);
        if (chain.size() > 200000) throw StateExplosionError("length_set subset chain too long");
    }
}

namespace {

// Walks the deterministic zero-column chain from the initial state and
// collects {j : predicate(state after 0^j)} as an ultimately periodic set.
template <typename Pred>
UpSet zero_chain_upset(const Dfa& a, Pred pred) {
    std::vector<int> visit_order;
    std::vector<int> pos(a.num_states(), -1);
    int s = a.initial;
    while (s >= 0 && pos[static_cast<size_t>(s)] < 0) {
        pos[static_cast<size_t>(s)] = static_cast<int>(visit_order.size());
        visit_order.push_back(s);
        s = a.step(s, zero_letter());
    }
    if (s < 0) {
        std::set<uint64_t> values;
        for (size_t j = 0; j < visit_order.size(); ++j)
            if (pred(visit_order[j])) values.insert(j);
        return upset_from_finite(values);
    }
    uint64_t t = static_cast<uint64_t>(pos[static_cast<size_t>(s)]);
    uint64_t l = visit_order.size() - t;
    UpSet u;
    u.threshold = t;
    u.period = l;
    for (uint64_t j = 0; j < t; ++j)
        if (pred(visit_order[j])) u.initial.insert(j);
    for (uint64_t r = 0; r < l; ++r)
        if (pred(visit_order[t + r])) u.residues.insert(r);
    return upset_normalize(u);
}

}  // namespace

UpSet zero_word_lengths(const Dfa& a) {
    return zero_chain_upset(a, [&](int s) { return a.accepting[static_cast<size_t>(s)]; });
}

UpSet leading_zero_lengths(const Dfa& a) {
    Dfa t = canonical(a);
    // In a trim automaton, any defined nonzero transition continues to an
    // accepted word starting with a nonzero column.
    return zero_chain_upset(t, [&](int s) {
        for (auto [l, dst] : t.trans[static_cast<size_t>(s)])
            if (l != zero_letter()) return true;
        return false;
    });
}

}  // namespace buchi
