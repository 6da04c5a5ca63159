#ifndef BUCHI_UPSET_HPP
#define BUCHI_UPSET_HPP

#include <cstdint>
#include <set>
#include <string>

namespace buchi {

// Ultimately periodic subset of N as (threshold t, period l, B, R):
// n is a member iff n in B, or n >= t and (n - t) mod l in R.
struct UpSet {
    uint64_t threshold = 0;
    uint64_t period = 1;
    std::set<uint64_t> initial;   // B, subset of [0, t)
    std::set<uint64_t> residues;  // R, subset of [0, l)

    bool operator==(const UpSet&) const = default;
};

bool upset_member(const UpSet& u, uint64_t n);

// Canonical form: minimal period dividing the original, minimal threshold.
// Two UpSets denote the same set iff their normal forms are equal.
UpSet upset_normalize(const UpSet& u);

UpSet upset_from_finite(const std::set<uint64_t>& values);
bool upset_is_empty(const UpSet& u);

std::string upset_str(const UpSet& u);

}  // namespace buchi

#endif
