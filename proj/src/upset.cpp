#include "buchi/upset.hpp"

#include <stdexcept>

namespace buchi {

bool upset_member(const UpSet& u, uint64_t n) {
    if (u.initial.count(n)) return true;
    if (n < u.threshold) return false;
    return u.residues.count((n - u.threshold) % u.period) > 0;
}

namespace {

UpSet sanitized(const UpSet& u) {
    if (u.period == 0) throw std::invalid_argument("UpSet period must be positive");
    UpSet v;
    v.threshold = u.threshold;
    v.period = u.period;
    for (uint64_t b : u.initial)
        if (b < u.threshold) v.initial.insert(b);
    for (uint64_t r : u.residues) v.residues.insert(r % u.period);
    return v;
}

// Smallest divisor d of l such that R is invariant under shifting by d mod l.
void collapse_period(UpSet& u) {
    for (uint64_t d = 1; d <= u.period; ++d) {
        if (u.period % d != 0) continue;
        bool ok = true;
        for (uint64_t r = 0; r < u.period && ok; ++r)
            if (u.residues.count(r) != u.residues.count((r + d) % u.period)) ok = false;
        if (ok) {
            std::set<uint64_t> reduced;
            for (uint64_t r : u.residues)
                if (r < d) reduced.insert(r);
            u.period = d;
            u.residues = std::move(reduced);
            return;
        }
    }
}

void lower_threshold(UpSet& u) {
    while (u.threshold > 0) {
        uint64_t n = u.threshold - 1;
        bool in_b = u.initial.count(n) > 0;
        bool periodic_says = u.residues.count((u.period - 1) % u.period) > 0;
        if (in_b != periodic_says) break;
        u.initial.erase(n);
        u.threshold = n;
        std::set<uint64_t> rotated;
        for (uint64_t r : u.residues) rotated.insert((r + 1) % u.period);
        u.residues = std::move(rotated);
    }
}

}  // namespace

UpSet upset_normalize(const UpSet& u) {
    UpSet v = sanitized(u);
    collapse_period(v);
    lower_threshold(v);
    // Empty periodic part: canonicalize to period 1.
    if (v.residues.empty() && v.period != 1) v.period = 1;
    // Finite set: tighten the threshold to just past the largest member.
    if (v.residues.empty()) {
        v.threshold = v.initial.empty() ? 0 : (*v.initial.rbegin() + 1);
    }
    return v;
}

UpSet upset_from_finite(const std::set<uint64_t>& values) {
    UpSet u;
    u.threshold = values.empty() ? 0 : (*values.rbegin() + 1);
    u.period = 1;
    u.initial = values;
    return upset_normalize(u);
}

bool upset_is_empty(const UpSet& u) { return u.initial.empty() && u.residues.empty(); }

std::string upset_str(const UpSet& u) {
    std::string s = "(t=" + std::to_string(u.threshold) + ",l=" + std::to_string(u.period) + ",B={";
    bool first = true;
    for (uint64_t b : u.initial) {
        if (!first) s += ',';
        s += std::to_string(b);
        first = false;
    }
    s += "},R={";
    first = true;
    for (uint64_t r : u.residues) {
        if (!first) s += ',';
        s += std::to_string(r);
        first = false;
    }
    s += "})";
    return s;
}

}  // namespace buchi
