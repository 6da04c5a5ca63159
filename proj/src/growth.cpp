#include "buchi/growth.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

namespace buchi {

Int density_words(const Dfa& a, uint64_t n) { return count_words(a, n); }

Int density_values(const Dfa& a, uint64_t n) {
    if (a.dim != 1) throw std::invalid_argument("density_values expects a dim-1 automaton");
    if (!is_zero_closed(a))
        throw std::invalid_argument("density_values expects a zero-closed automaton");
    if (n == 0) return 0;
    return count_words(canonical_representation(a), n);
}

Int cycle_count(const Dfa& a, int state, int track, uint64_t n) {
    if (state < 0 || static_cast<size_t>(state) >= a.num_states())
        throw std::invalid_argument("cycle_count: state out of range");
    if (track < 0 || track >= a.dim) throw std::invalid_argument("cycle_count: track out of range");
    Dfa loop = a;
    loop.initial = state;
    loop.accepting.assign(a.num_states(), false);
    loop.accepting[static_cast<size_t>(state)] = true;
    Dfa distinct = determinize_minimize(project_tracks(loop, {track}, false));
    return count_words(distinct, n);
}

Rat EQPoly::eval(uint64_t n) const {
    const auto& poly = polys.at(static_cast<size_t>(n % modulus));
    Int y = 1;
    for (uint64_t i = 0; i < n; ++i) y *= base;
    Rat acc = 0;
    Rat power = 1;
    for (const Rat& c : poly) {
        acc += c * power;
        power *= Rat(y);
    }
    return acc;
}

int EQPoly::degree() const {
    int deg = 0;
    for (const auto& poly : polys) {
        int d = 0;
        for (size_t i = 0; i < poly.size(); ++i)
            if (poly[i] != 0) d = static_cast<int>(i);
        deg = std::max(deg, d);
    }
    return deg;
}

std::string EQPoly::str() const {
    std::ostringstream out;
    out << "eqp(t=" << threshold << ",m=" << modulus << ";";
    for (size_t i = 0; i < polys.size(); ++i) {
        if (i) out << " ; ";
        const auto& poly = polys[i];
        bool first = true;
        for (size_t k = 0; k < poly.size(); ++k) {
            if (poly[k] == 0 && !(poly.size() == 1 && k == 0)) continue;
            if (!first) out << " + ";
            out << poly[k];
            if (k == 1) out << "*y";
            if (k > 1) out << "*y^" << k;
            first = false;
        }
        if (first) out << "0";
    }
    out << ")";
    return out.str();
}

std::optional<EQPoly> fit_eqp(const std::vector<std::pair<uint64_t, Int>>& samples, int base,
                              uint64_t max_modulus) {
    if (samples.size() < 8) throw std::invalid_argument("fit_eqp needs at least 8 samples");
    std::vector<std::pair<uint64_t, Int>> pts = samples;
    std::sort(pts.begin(), pts.end());
    uint64_t max_n = pts.back().first;
    auto power = [&](uint64_t n) {
        Int y = 1;
        for (uint64_t i = 0; i < n; ++i) y *= base;
        return y;
    };
    for (uint64_t m = 1; m <= max_modulus; ++m) {
        if (max_n < 3 * m) break;
        // Each residue class keeps at least three samples: two pin the line,
        // the rest verify it, so a large threshold cannot hide a bad fit.
        for (uint64_t t = 0; t + 3 * m <= max_n; ++t) {
            std::vector<std::vector<std::pair<uint64_t, Int>>> classes(m);
            for (const auto& [n, c] : pts)
                if (n > t) classes[static_cast<size_t>(n % m)].emplace_back(n, c);
            bool ok = true;
            std::vector<std::vector<Rat>> polys(m);
            for (uint64_t r = 0; r < m && ok; ++r) {
                const auto& cls = classes[static_cast<size_t>(r)];
                if (cls.size() < 2) {
                    ok = false;
                    break;
                }
                Int y1 = power(cls[0].first), y2 = power(cls[1].first);
                Rat alpha = Rat(cls[1].second - cls[0].second) / Rat(y2 - y1);
                Rat beta = Rat(cls[0].second) - alpha * Rat(y1);
                for (const auto& [n, c] : cls)
                    if (alpha * Rat(power(n)) + beta != Rat(c)) {
                        ok = false;
                        break;
                    }
                if (alpha == 0)
                    polys[static_cast<size_t>(r)] = {beta};
                else
                    polys[static_cast<size_t>(r)] = {beta, alpha};
            }
            if (!ok) continue;
            EQPoly out;
            out.base = base;
            out.threshold = t;
            out.modulus = m;
            out.polys = std::move(polys);
            return out;
        }
    }
    return std::nullopt;
}

namespace {

// Iterative Tarjan SCC; returns component id per state, ids in reverse
// topological order.
std::vector<int> scc_ids(const Dfa& a, int& count) {
    size_t n = a.num_states();
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0;
    count = 0;
    struct Frame {
        int state;
        size_t edge;
    };
    for (size_t root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        std::vector<Frame> frames{{static_cast<int>(root), 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(static_cast<int>(root));
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            size_t s = static_cast<size_t>(f.state);
            if (f.edge < a.trans[s].size()) {
                int t = a.trans[s][f.edge++].second;
                size_t ts = static_cast<size_t>(t);
                if (index[ts] < 0) {
                    index[ts] = low[ts] = next_index++;
                    stack.push_back(t);
                    on_stack[ts] = true;
                    frames.push_back({t, 0});
                } else if (on_stack[ts]) {
                    low[s] = std::min(low[s], index[ts]);
                }
            } else {
                if (low[s] == index[s]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<size_t>(w)] = false;
                        comp[static_cast<size_t>(w)] = count;
                        if (w == f.state) break;
                    }
                    ++count;
                }
                int done = f.state;
                frames.pop_back();
                if (!frames.empty()) {
                    size_t p = static_cast<size_t>(frames.back().state);
                    low[p] = std::min(low[p], low[static_cast<size_t>(done)]);
                }
            }
        }
    }
    return comp;
}

int within_transitions(const Dfa& a, const std::vector<int>& comp, int state) {
    int cnt = 0;
    for (auto [l, t] : a.trans[static_cast<size_t>(state)])
        if (comp[static_cast<size_t>(t)] == comp[static_cast<size_t>(state)]) ++cnt;
    return cnt;
}

bool scc_is_cyclic(const Dfa& a, const std::vector<int>& comp, int cid) {
    for (size_t s = 0; s < a.num_states(); ++s) {
        if (comp[s] != cid) continue;
        for (auto [l, t] : a.trans[s])
            if (comp[static_cast<size_t>(t)] == cid) return true;
    }
    return false;
}

// Shortest word from src to any state satisfying pred, edges restricted by
// keep(state, target).
std::optional<std::vector<Letter>> bfs_word(const Dfa& a, int src, std::function<bool(int)> pred,
                                            std::function<bool(int, int)> keep) {
    std::vector<int> parent(a.num_states(), -2);
    std::vector<Letter> via(a.num_states(), 0);
    std::deque<int> queue{src};
    parent[static_cast<size_t>(src)] = -1;
    if (pred(src)) return std::vector<Letter>{};
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (auto [l, t] : a.trans[static_cast<size_t>(s)]) {
            if (!keep(s, t) || parent[static_cast<size_t>(t)] != -2) continue;
            parent[static_cast<size_t>(t)] = s;
            via[static_cast<size_t>(t)] = l;
            if (pred(t)) {
                std::vector<Letter> word;
                for (int c = t; parent[static_cast<size_t>(c)] != -1; c = parent[static_cast<size_t>(c)])
                    word.push_back(via[static_cast<size_t>(c)]);
                std::reverse(word.begin(), word.end());
                return word;
            }
            queue.push_back(t);
        }
    }
    return std::nullopt;
}

struct PathEnumerator {
    const Dfa& a;
    const std::vector<int>& comp;
    std::vector<bool> scc_cyclic;
    std::vector<bool> on_path;
    std::vector<bool> scc_starred;
    std::vector<std::vector<Letter>> segments;  // v0 v1 ... (current path)
    std::vector<DigitWord> loops;
    std::vector<BlockRegex> out;
    size_t path_cap = 100000;
    size_t paths_seen = 0;

    // The unique cycle word from q around its simple-cycle SCC.
    DigitWord cycle_word(int q) const {
        std::vector<Letter> letters;
        int cur = q;
        do {
            bool moved = false;
            for (auto [l, t] : a.trans[static_cast<size_t>(cur)]) {
                if (comp[static_cast<size_t>(t)] != comp[static_cast<size_t>(q)]) continue;
                letters.push_back(l);
                cur = t;
                moved = true;
                break;
            }
            if (!moved) throw std::logic_error("broken cycle in Szilard decomposition");
        } while (cur != q);
        return DigitWord(a.base, a.dim, std::move(letters));
    }

    void snapshot() {
        if (++paths_seen > path_cap) throw StateExplosionError("decomposition path cap exceeded");
        BlockRegex r;
        r.head = DigitWord(a.base, a.dim, segments[0]);
        for (size_t i = 0; i < loops.size(); ++i) {
            BlockRegex::Block b;
            b.loop = loops[i];
            b.plus = false;
            b.tail = DigitWord(a.base, a.dim, segments[i + 1]);
            r.blocks.push_back(std::move(b));
        }
        out.push_back(std::move(r));
    }

    void visit(int s) {
        on_path[static_cast<size_t>(s)] = true;
        int cid = comp[static_cast<size_t>(s)];
        bool starred_here = false;
        if (scc_cyclic[static_cast<size_t>(cid)] && !scc_starred[static_cast<size_t>(cid)]) {
            scc_starred[static_cast<size_t>(cid)] = true;
            starred_here = true;
            loops.push_back(cycle_word(s));
            segments.emplace_back();
        }
        if (a.accepting[static_cast<size_t>(s)]) snapshot();
        for (auto [l, t] : a.trans[static_cast<size_t>(s)]) {
            if (on_path[static_cast<size_t>(t)]) continue;
            segments.back().push_back(l);
            visit(t);
            segments.back().pop_back();
        }
        if (starred_here) {
            scc_starred[static_cast<size_t>(cid)] = false;
            loops.pop_back();
            segments.pop_back();
        }
        on_path[static_cast<size_t>(s)] = false;
    }
};

}  // namespace

std::vector<BlockRegex> decompose_poly(const Dfa& input) {
    Dfa a = canonical(input);
    if (is_empty_language(a)) return {};
    int count = 0;
    std::vector<int> comp = scc_ids(a, count);
    for (size_t s = 0; s < a.num_states(); ++s)
        if (within_transitions(a, comp, static_cast<int>(s)) > 1)
            throw NotPolynomialError("a state lies on two distinct cycles");
    PathEnumerator walk{a, comp, {}, {}, {}, {}, {}, {}};
    walk.scc_cyclic.resize(static_cast<size_t>(count));
    for (int c = 0; c < count; ++c) walk.scc_cyclic[static_cast<size_t>(c)] = scc_is_cyclic(a, comp, c);
    walk.on_path.assign(a.num_states(), false);
    walk.scc_starred.assign(static_cast<size_t>(count), false);
    walk.segments.emplace_back();
    walk.visit(a.initial);

    Dfa rebuilt = walk.out.empty() ? empty_dfa(a.base, a.dim) : block_regex_to_dfa(walk.out);
    if (!equivalent(rebuilt, a))
        throw std::logic_error("Szilard decomposition failed its equivalence check");
    return walk.out;
}

GrowthVerdict classify(const Dfa& a) {
    if (a.dim != 1) throw std::invalid_argument("classify expects a dim-1 automaton");
    GrowthVerdict v;
    Dfa canon = canonical_representation(a);
    v.canon = canon;
    if (is_empty_language(canon)) {
        v.kind = GrowthKind::Polynomial;
        v.degree = 0;
        v.sigma1 = Sigma1Verdict::InSigma1;
        v.evidence = "empty language";
        return v;
    }
    int count = 0;
    std::vector<int> comp = scc_ids(canon, count);
    int branching_state = -1;
    for (size_t s = 0; s < canon.num_states() && branching_state < 0; ++s)
        if (within_transitions(canon, comp, static_cast<int>(s)) > 1)
            branching_state = static_cast<int>(s);

    if (branching_state < 0) {
        v.kind = GrowthKind::Polynomial;
        v.sigma1 = Sigma1Verdict::InSigma1;
        v.decomposition = decompose_poly(canon);
        size_t max_blocks = 0;
        for (const auto& r : v.decomposition) max_blocks = std::max(max_blocks, r.blocks.size());
        v.degree = max_blocks == 0 ? 0 : static_cast<int>(max_blocks) - 1;
        v.evidence = "every state lies on at most one cycle; " +
                     std::to_string(v.decomposition.size()) + " decomposition branch(es), max " +
                     std::to_string(max_blocks) + " starred block(s)";
        return v;
    }

    // Exponential; build the two-cycle certificate at the branching state.
    int cid = comp[static_cast<size_t>(branching_state)];
    std::vector<std::pair<Letter, int>> within;
    for (auto [l, t] : canon.trans[static_cast<size_t>(branching_state)])
        if (comp[static_cast<size_t>(t)] == cid) within.emplace_back(l, t);
    auto in_scc = [&](int, int t) { return comp[static_cast<size_t>(t)] == cid; };
    GrowthVerdict::TwoCycles cert;
    {
        auto make_cycle = [&](Letter first, int target) {
            std::vector<Letter> word{first};
            auto rest = bfs_word(canon, target, [&](int s) { return s == branching_state; }, in_scc);
            if (!rest) throw std::logic_error("cycle closure missing");
            word.insert(word.end(), rest->begin(), rest->end());
            return DigitWord(canon.base, canon.dim, std::move(word));
        };
        cert.cycle_a = make_cycle(within[0].first, within[0].second);
        cert.cycle_b = make_cycle(within[1].first, within[1].second);
        auto prefix = bfs_word(canon, canon.initial, [&](int s) { return s == branching_state; },
                               [](int, int) { return true; });
        auto suffix = bfs_word(canon, branching_state,
                               [&](int s) { return canon.accepting[static_cast<size_t>(s)]; },
                               [](int, int) { return true; });
        if (!prefix || !suffix) throw std::logic_error("trim automaton lost liveness");
        cert.prefix = DigitWord(canon.base, canon.dim, *prefix);
        cert.suffix = DigitWord(canon.base, canon.dim, *suffix);
    }
    v.two_cycles = cert;

    // equal-base iff some SCC keeps all base letters internal at every state
    // (all transfer-matrix row sums equal the base).
    for (int c = 0; c < count && v.complete_scc.empty(); ++c) {
        std::vector<int> members;
        for (size_t s = 0; s < canon.num_states(); ++s)
            if (comp[s] == c) members.push_back(static_cast<int>(s));
        if (members.empty()) continue;
        bool cyclic = scc_is_cyclic(canon, comp, c);
        if (!cyclic) continue;
        bool complete = true;
        for (int s : members) {
            int inside = within_transitions(canon, comp, s);
            if (inside != canon.base) {
                complete = false;
                break;
            }
        }
        if (complete) v.complete_scc = members;
    }
    if (!v.complete_scc.empty()) {
        v.kind = GrowthKind::ExponentialEqualBase;
        v.sigma1 = Sigma1Verdict::Unknown;
        v.evidence = "complete SCC with all " + std::to_string(canon.base) +
                     " letters internal at every state (" + std::to_string(v.complete_scc.size()) +
                     " states)";
    } else {
        v.kind = GrowthKind::ExponentialBelowBase;
        v.sigma1 = Sigma1Verdict::NotInSigma1;
        v.evidence = "state " + std::to_string(branching_state) + " lies on two cycles (" +
                     cert.cycle_a.str() + ", " + cert.cycle_b.str() +
                     ") and no SCC is letter-complete";
    }
    return v;
}

}  // namespace buchi
