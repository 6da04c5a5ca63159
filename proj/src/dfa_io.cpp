#include <algorithm>
#include <fstream>
#include <sstream>

#include "buchi/dfa.hpp"

namespace buchi {

namespace {

std::string letter_str(Letter l, int base, int dim) {
    if (dim == 0) return "-";
    auto digits = unpack_column(l, base, dim);
    std::string s;
    for (int i = 0; i < dim; ++i) {
        if (i) s += ',';
        s += std::to_string(digits[static_cast<size_t>(i)]);
    }
    return s;
}

Letter parse_letter(const std::string& s, int base, int dim) {
    if (dim == 0) {
        if (s != "-") throw std::runtime_error("automaton file: bad dim-0 letter");
        return 0;
    }
    std::vector<int> digits;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        std::string part = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (part.empty()) throw std::runtime_error("automaton file: bad letter " + s);
        digits.push_back(std::stoi(part));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (static_cast<int>(digits.size()) != dim)
        throw std::runtime_error("automaton file: letter arity mismatch");
    for (int d : digits)
        if (d < 0 || d >= base) throw std::runtime_error("automaton file: digit out of range");
    return pack_column(digits, base);
}

}  // namespace

std::string write_automaton(const Dfa& a) {
    std::ostringstream out;
    out << "pautomaton v1 base=" << a.base << " dim=" << a.dim << "\n";
    out << "states " << a.num_states() << "\n";
    out << "initial " << a.initial << "\n";
    out << "finals";
    for (size_t s = 0; s < a.num_states(); ++s)
        if (a.accepting[s]) out << ' ' << s;
    out << "\n";
    for (size_t s = 0; s < a.num_states(); ++s)
        for (auto [l, t] : a.trans[s])
            out << s << ' ' << letter_str(l, a.base, a.dim) << ' ' << t << "\n";
    return out.str();
}

Dfa read_automaton(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("automaton file: empty");
    int base = 0, dim = -1;
    if (sscanf(line.c_str(), "pautomaton v1 base=%d dim=%d", &base, &dim) != 2)
        throw std::runtime_error("automaton file: bad header: " + line);
    Dfa a;
    a.base = base;
    a.dim = dim;
    size_t n = 0;
    if (!std::getline(in, line) || sscanf(line.c_str(), "states %zu", &n) != 1)
        throw std::runtime_error("automaton file: bad states line");
    a.trans.resize(n);
    a.accepting.assign(n, false);
    if (!std::getline(in, line) || sscanf(line.c_str(), "initial %d", &a.initial) != 1)
        throw std::runtime_error("automaton file: bad initial line");
    if (a.initial < 0 || static_cast<size_t>(a.initial) >= n)
        throw std::runtime_error("automaton file: initial out of range");
    if (!std::getline(in, line) || line.rfind("finals", 0) != 0)
        throw std::runtime_error("automaton file: bad finals line");
    {
        std::istringstream fs(line.substr(6));
        size_t f;
        while (fs >> f) {
            if (f >= n) throw std::runtime_error("automaton file: final out of range");
            a.accepting[f] = true;
        }
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ts(line);
        size_t src, dst;
        std::string letter;
        if (!(ts >> src >> letter >> dst))
            throw std::runtime_error("automaton file: bad transition: " + line);
        if (src >= n || dst >= n) throw std::runtime_error("automaton file: state out of range");
        Letter l = parse_letter(letter, base, dim);
        for (auto [pl, pt] : a.trans[src])
            if (pl == l) throw std::runtime_error("automaton file: duplicate transition letter");
        a.trans[src].emplace_back(l, static_cast<int>(dst));
    }
    for (auto& row : a.trans) std::sort(row.begin(), row.end());
    return a;
}

void write_automaton_file(const Dfa& a, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << write_automaton(a);
}

Dfa read_automaton_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_automaton(buf.str());
}

}  // namespace buchi
