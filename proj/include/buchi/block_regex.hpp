#ifndef BUCHI_BLOCK_REGEX_HPP
#define BUCHI_BLOCK_REGEX_HPP

#include <string>
#include <vector>

#include "buchi/dfa.hpp"
#include "buchi/digit_word.hpp"

namespace buchi {

// One bounded-growth regex branch v0 w1^ v1 ... wk^ vk over dim-1 words,
// each loop word starred or plussed.
struct BlockRegex {
    struct Block {
        DigitWord loop;
        bool plus = false;  // false: w*, true: w+
        DigitWord tail;
    };
    DigitWord head;  // v0
    std::vector<Block> blocks;

    int base() const { return head.base(); }
    std::string str() const;
};

// Minimal DFA for the exact word language (no value closure).
Dfa block_regex_to_dfa(const BlockRegex& r);
Dfa block_regex_to_dfa(const std::vector<BlockRegex>& rs);

// General regex over single digits: union |, concatenation, * and +,
// parentheses. Returns the minimal DFA of the exact word language.
Dfa parse_regex(const std::string& text, int base);

// "v0 (w1)* v1 ..." notation for a block regex; parse error on anything that
// is not a plain block shape.
BlockRegex parse_block_regex(const std::string& text, int base);

}  // namespace buchi

#endif
