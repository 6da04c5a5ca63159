#include "buchi/block_regex.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>

namespace buchi {

std::string BlockRegex::str() const {
    auto word = [](const DigitWord& w) {
        std::string s;
        for (size_t i = 0; i < w.size(); ++i) s += std::to_string(w.letter(i));
        return s;
    };
    std::string s = word(head);
    for (const auto& b : blocks) {
        s += "(" + word(b.loop) + ")" + (b.plus ? "+" : "*");
        s += word(b.tail);
    }
    return s.empty() ? "()" : s;
}

namespace {

// Small epsilon-NFA used only to assemble regex fragments.
struct EpsNfa {
    int base;
    std::vector<std::vector<std::pair<Letter, int>>> trans;
    std::vector<std::vector<int>> eps;
    int add_state() {
        trans.emplace_back();
        eps.emplace_back();
        return static_cast<int>(trans.size()) - 1;
    }
    void add_edge(int s, Letter l, int t) { trans[static_cast<size_t>(s)].emplace_back(l, t); }
    void add_eps(int s, int t) { eps[static_cast<size_t>(s)].push_back(t); }
};

struct Fragment {
    int entry;
    int exit;
};

Fragment word_fragment(EpsNfa& n, const DigitWord& w) {
    int entry = n.add_state();
    int cur = entry;
    for (size_t i = 0; i < w.size(); ++i) {
        int next = n.add_state();
        n.add_edge(cur, w.letter(i), next);
        cur = next;
    }
    return {entry, cur};
}

Fragment loop_fragment(EpsNfa& n, const DigitWord& w, bool plus) {
    Fragment body = word_fragment(n, w);
    int entry = n.add_state();
    int exit = n.add_state();
    n.add_eps(entry, body.entry);
    n.add_eps(body.exit, body.entry);
    n.add_eps(body.exit, exit);
    if (!plus) n.add_eps(entry, exit);
    return {entry, exit};
}

Fragment concat_fragment(EpsNfa& n, Fragment a, Fragment b) {
    n.add_eps(a.exit, b.entry);
    return {a.entry, b.exit};
}

Dfa eps_nfa_to_dfa(const EpsNfa& n, int dim, const std::vector<int>& initials,
                   const std::vector<int>& finals) {
    size_t count = n.trans.size();
    std::vector<std::vector<int>> closure(count);
    for (size_t s = 0; s < count; ++s) {
        std::vector<bool> seen(count, false);
        std::deque<int> queue{static_cast<int>(s)};
        seen[s] = true;
        while (!queue.empty()) {
            int q = queue.front();
            queue.pop_front();
            closure[s].push_back(q);
            for (int t : n.eps[static_cast<size_t>(q)])
                if (!seen[static_cast<size_t>(t)]) {
                    seen[static_cast<size_t>(t)] = true;
                    queue.push_back(t);
                }
        }
    }
    Nfa out;
    out.base = n.base;
    out.dim = dim;
    out.trans.resize(count);
    out.accepting.assign(count, false);
    std::vector<bool> is_final(count, false);
    for (int f : finals) is_final[static_cast<size_t>(f)] = true;
    for (size_t s = 0; s < count; ++s) {
        for (int q : closure[s]) {
            if (is_final[static_cast<size_t>(q)]) out.accepting[s] = true;
            for (auto [l, t] : n.trans[static_cast<size_t>(q)]) out.trans[s].emplace_back(l, t);
        }
        std::sort(out.trans[s].begin(), out.trans[s].end());
        out.trans[s].erase(std::unique(out.trans[s].begin(), out.trans[s].end()), out.trans[s].end());
    }
    out.initials = initials;
    return determinize_minimize(out);
}

}  // namespace

Dfa block_regex_to_dfa(const BlockRegex& r) {
    return block_regex_to_dfa(std::vector<BlockRegex>{r});
}

Dfa block_regex_to_dfa(const std::vector<BlockRegex>& rs) {
    if (rs.empty()) throw std::invalid_argument("empty regex union");
    int base = rs[0].base();
    for (const auto& r : rs)
        if (r.base() != base) throw std::invalid_argument("mixed bases in regex union");
    EpsNfa n{base, {}, {}};
    int start = n.add_state();
    std::vector<int> finals;
    for (const auto& r : rs) {
        Fragment f = word_fragment(n, r.head);
        for (const auto& b : r.blocks) {
            f = concat_fragment(n, f, loop_fragment(n, b.loop, b.plus));
            f = concat_fragment(n, f, word_fragment(n, b.tail));
        }
        n.add_eps(start, f.entry);
        finals.push_back(f.exit);
    }
    return eps_nfa_to_dfa(n, 1, {start}, finals);
}

namespace {

// regex := union ; union := concat ('|' concat)* ; concat := rep* ;
// rep := atom ('*'|'+')* ; atom := digit | '(' union ')'
struct RegexParser {
    const std::string& text;
    size_t pos = 0;
    int base;
    EpsNfa& nfa;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool peek_is(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw std::invalid_argument("regex error at offset " + std::to_string(pos) + ": " + msg);
    }

    Fragment parse_union() {
        Fragment f = parse_concat();
        while (peek_is('|')) {
            ++pos;
            Fragment g = parse_concat();
            int entry = nfa.add_state();
            int exit = nfa.add_state();
            nfa.add_eps(entry, f.entry);
            nfa.add_eps(entry, g.entry);
            nfa.add_eps(f.exit, exit);
            nfa.add_eps(g.exit, exit);
            f = {entry, exit};
        }
        return f;
    }

    Fragment parse_concat() {
        Fragment f{-1, -1};
        while (true) {
            skip_ws();
            if (pos >= text.size() || text[pos] == '|' || text[pos] == ')') break;
            Fragment g = parse_rep();
            f = (f.entry < 0) ? g : concat_fragment(nfa, f, g);
        }
        if (f.entry < 0) {
            int s = nfa.add_state();
            f = {s, s};
        }
        return f;
    }

    Fragment parse_rep() {
        Fragment f = parse_atom();
        while (pos < text.size() && (text[pos] == '*' || text[pos] == '+')) {
            bool plus = text[pos] == '+';
            ++pos;
            int entry = nfa.add_state();
            int exit = nfa.add_state();
            nfa.add_eps(entry, f.entry);
            nfa.add_eps(f.exit, f.entry);
            nfa.add_eps(f.exit, exit);
            if (!plus) nfa.add_eps(entry, exit);
            f = {entry, exit};
        }
        return f;
    }

    Fragment parse_atom() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            Fragment f = parse_union();
            if (!peek_is(')')) fail("expected ')'");
            ++pos;
            return f;
        }
        if (c >= '0' && c <= '9') {
            int d = c - '0';
            if (d >= base) fail("digit out of base range");
            ++pos;
            int entry = nfa.add_state();
            int exit = nfa.add_state();
            nfa.add_edge(entry, static_cast<Letter>(d), exit);
            return {entry, exit};
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

Dfa parse_regex(const std::string& text, int base) {
    if (base < 2 || base > 10) throw std::invalid_argument("regex parsing supports bases 2..10");
    EpsNfa n{base, {}, {}};
    RegexParser parser{text, 0, base, n};
    Fragment f = parser.parse_union();
    parser.skip_ws();
    if (parser.pos != text.size()) parser.fail("trailing input");
    return eps_nfa_to_dfa(n, 1, {f.entry}, {f.exit});
}

BlockRegex parse_block_regex(const std::string& text, int base) {
    BlockRegex r;
    r.head = DigitWord(base, 1);
    size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    };
    auto read_word = [&] {
        DigitWord w(base, 1);
        skip_ws();
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            int d = text[pos] - '0';
            if (d >= base) throw std::invalid_argument("digit out of base range");
            w.push_letter(static_cast<Letter>(d));
            ++pos;
        }
        return w;
    };
    r.head = read_word();
    skip_ws();
    while (pos < text.size()) {
        if (text[pos] != '(') throw std::invalid_argument("expected '(' in block regex");
        ++pos;
        BlockRegex::Block b;
        b.loop = read_word();
        skip_ws();
        if (pos >= text.size() || text[pos] != ')')
            throw std::invalid_argument("expected ')' in block regex");
        ++pos;
        skip_ws();
        if (pos >= text.size() || (text[pos] != '*' && text[pos] != '+'))
            throw std::invalid_argument("expected '*' or '+' after loop word");
        b.plus = text[pos] == '+';
        ++pos;
        b.tail = read_word();
        r.blocks.push_back(std::move(b));
        skip_ws();
    }
    return r;
}

}  // namespace buchi
