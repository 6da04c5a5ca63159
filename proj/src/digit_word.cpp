#include "buchi/digit_word.hpp"

#include <algorithm>

namespace buchi {

Letter alphabet_size(int base, int dim) {
    if (base < 2) throw std::invalid_argument("base must be >= 2");
    if (dim < 0) throw std::invalid_argument("dim must be >= 0");
    uint64_t n = 1;
    for (int i = 0; i < dim; ++i) {
        n *= static_cast<uint64_t>(base);
        if (n > (1u << 22))
            throw std::invalid_argument("alphabet too large: base^dim exceeds 2^22");
    }
    return static_cast<Letter>(n);
}

Letter pack_column(const std::vector<int>& digits, int base) {
    uint64_t v = 0;
    for (int d : digits) {
        if (d < 0 || d >= base) throw std::invalid_argument("digit out of range");
        v = v * static_cast<uint64_t>(base) + static_cast<uint64_t>(d);
    }
    return static_cast<Letter>(v);
}

std::vector<int> unpack_column(Letter a, int base, int dim) {
    std::vector<int> digits(static_cast<size_t>(dim), 0);
    uint64_t v = a;
    for (int i = dim - 1; i >= 0; --i) {
        digits[static_cast<size_t>(i)] = static_cast<int>(v % static_cast<uint64_t>(base));
        v /= static_cast<uint64_t>(base);
    }
    return digits;
}

int column_digit(Letter a, int base, int dim, int track) {
    uint64_t v = a;
    for (int i = dim - 1; i > track; --i) v /= static_cast<uint64_t>(base);
    return static_cast<int>(v % static_cast<uint64_t>(base));
}

Letter zero_letter() { return 0; }

DigitWord::DigitWord(int base, int dim) : base_(base), dim_(dim) {
    if (base < 2) throw std::invalid_argument("base must be >= 2");
    if (dim < 0) throw std::invalid_argument("dim must be >= 0");
}

DigitWord::DigitWord(int base, int dim, std::vector<Letter> columns)
    : base_(base), dim_(dim), columns_(std::move(columns)) {
    Letter n = alphabet_size(base, dim);
    for (Letter a : columns_)
        if (a >= n) throw std::invalid_argument("letter out of range");
}

std::vector<int> DigitWord::column(size_t i) const {
    return unpack_column(columns_.at(i), base_, dim_);
}

void DigitWord::push_column(const std::vector<int>& digits) {
    if (static_cast<int>(digits.size()) != dim_)
        throw std::invalid_argument("column arity mismatch");
    columns_.push_back(pack_column(digits, base_));
}

void DigitWord::push_letter(Letter a) {
    if (a >= alphabet_size(base_, dim_)) throw std::invalid_argument("letter out of range");
    columns_.push_back(a);
}

std::vector<Int> DigitWord::decode() const {
    std::vector<Int> values(static_cast<size_t>(dim_), Int(0));
    for (Letter a : columns_) {
        auto digits = unpack_column(a, base_, dim_);
        for (int t = 0; t < dim_; ++t)
            values[static_cast<size_t>(t)] =
                values[static_cast<size_t>(t)] * base_ + digits[static_cast<size_t>(t)];
    }
    return values;
}

bool DigitWord::operator==(const DigitWord& o) const {
    return base_ == o.base_ && dim_ == o.dim_ && columns_ == o.columns_;
}

bool DigitWord::operator<(const DigitWord& o) const {
    if (columns_.size() != o.columns_.size()) return columns_.size() < o.columns_.size();
    return columns_ < o.columns_;
}

std::string DigitWord::str() const {
    std::string s;
    if (dim_ == 1) {
        for (Letter a : columns_) s += std::to_string(a);
        return s.empty() ? "(empty)" : s;
    }
    if (columns_.empty()) return "(empty)";
    for (Letter a : columns_) {
        auto digits = unpack_column(a, base_, dim_);
        s += '(';
        for (int t = 0; t < dim_; ++t) {
            if (t) s += ',';
            s += std::to_string(digits[static_cast<size_t>(t)]);
        }
        s += ')';
    }
    return s;
}

std::vector<Int> decode(const DigitWord& w) { return w.decode(); }

DigitWord encode(const std::vector<Int>& values, int base, size_t min_len) {
    int dim = static_cast<int>(values.size());
    for (const Int& v : values)
        if (v < 0) throw std::invalid_argument("encode expects naturals");
    size_t len = min_len;
    for (const Int& v : values) {
        size_t need = 0;
        Int x = v;
        while (x > 0) { ++need; x /= base; }
        len = std::max(len, need);
    }
    std::vector<Int> rest = values;
    std::vector<Letter> cols(len, 0);
    for (size_t i = len; i-- > 0;) {
        std::vector<int> digits(static_cast<size_t>(dim));
        for (int t = 0; t < dim; ++t) {
            digits[static_cast<size_t>(t)] = static_cast<int>(rest[static_cast<size_t>(t)] % base);
            rest[static_cast<size_t>(t)] /= base;
        }
        cols[i] = pack_column(digits, base);
    }
    return DigitWord(base, dim, std::move(cols));
}

DigitWord word_from_string(int base, const std::string& digits) {
    DigitWord w(base, 1);
    for (char c : digits) {
        if (c < '0' || c > '9') throw std::invalid_argument("bad digit character");
        w.push_column({c - '0'});
    }
    return w;
}

DigitWord word_from_tracks(int base, const std::vector<std::string>& tracks) {
    if (tracks.empty()) throw std::invalid_argument("need at least one track");
    size_t len = tracks[0].size();
    for (const auto& t : tracks)
        if (t.size() != len) throw std::invalid_argument("track length mismatch");
    DigitWord w(base, static_cast<int>(tracks.size()));
    for (size_t i = 0; i < len; ++i) {
        std::vector<int> col;
        col.reserve(tracks.size());
        for (const auto& t : tracks) col.push_back(t[i] - '0');
        w.push_column(col);
    }
    return w;
}

}  // namespace buchi
