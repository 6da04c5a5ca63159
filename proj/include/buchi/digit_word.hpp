#ifndef BUCHI_DIGIT_WORD_HPP
#define BUCHI_DIGIT_WORD_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace buchi {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// A packed digit tuple: one symbol of the alphabet Sigma_p^d.
using Letter = uint32_t;

// Number of letters p^d, guarded against overflow of the packed encoding.
Letter alphabet_size(int base, int dim);

// Packs a digit tuple into a Letter. Track 0 is the most significant slot,
// so letters sort lexicographically by track order.
Letter pack_column(const std::vector<int>& digits, int base);
std::vector<int> unpack_column(Letter a, int base, int dim);
int column_digit(Letter a, int base, int dim, int track);
Letter zero_letter();

// Finite word over d-tuples of base-p digits, most significant column first.
// The empty word is valid and decodes to the zero tuple.
class DigitWord {
public:
    DigitWord() = default;
    DigitWord(int base, int dim);
    DigitWord(int base, int dim, std::vector<Letter> columns);

    int base() const { return base_; }
    int dim() const { return dim_; }
    size_t size() const { return columns_.size(); }
    bool empty() const { return columns_.empty(); }

    Letter letter(size_t i) const { return columns_.at(i); }
    const std::vector<Letter>& letters() const { return columns_; }
    std::vector<int> column(size_t i) const;

    void push_column(const std::vector<int>& digits);
    void push_letter(Letter a);

    // Value tuple encoded by this word (column i counts with weight p^(n-1-i)).
    std::vector<Int> decode() const;

    bool operator==(const DigitWord& o) const;
    bool operator<(const DigitWord& o) const;

    // Dim-1 words print as digit strings, higher dims as column tuples.
    std::string str() const;

private:
    int base_ = 2;
    int dim_ = 1;
    std::vector<Letter> columns_;
};

std::vector<Int> decode(const DigitWord& w);

// Left inverse of decode. Uses minimal length extended to min_len with
// leading all-zero columns.
DigitWord encode(const std::vector<Int>& values, int base, size_t min_len = 0);

// Dim-1 convenience: "101" -> word of columns 1,0,1.
DigitWord word_from_string(int base, const std::string& digits);

// One string per track, all of equal length, msb first.
DigitWord word_from_tracks(int base, const std::vector<std::string>& tracks);

}  // namespace buchi

#endif
