#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "rabe/error.hpp"

namespace rabe::algebra {

// Index set D = {d_1 < ... < d_L} for compressing the cross terms of the CRS.
// Conditions enforced:
//   progression-free: no distinct a, b, c in D with a + c = 2b;
//   double-free:      no element is twice another (d_j != 2 d_i).
struct ProgressionFreeSet {
    std::vector<std::uint64_t> d;

    std::size_t size() const { return d.size(); }
    std::uint64_t max() const { return d.empty() ? 0 : d.back(); }
    // 1-based, matching slot numbering.
    std::uint64_t at(std::size_t slot) const { return d.at(slot - 1); }
};

// O(L^3) brute-force check of both conditions; also rejects non-positive or
// repeated entries.
inline bool verify_set(std::span<const std::uint64_t> d) {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] == 0) return false;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (d[i] == d[j]) return false;
            if (d[j] == 2 * d[i]) return false;
            for (std::size_t k = j + 1; k < n; ++k) {
                if (k == i) continue;
                if (d[j] + d[k] == 2 * d[i]) return false;
            }
        }
    }
    return true;
}

// Deterministic greedy: scan candidates upward and keep each one that keeps
// both conditions. Always terminates since the conditions exclude finitely
// many integers per step.
inline ProgressionFreeSet build_progression_free_set(std::size_t count) {
    if (count == 0) throw SchemeError("progression-free set needs at least one element");
    ProgressionFreeSet out;
    std::set<std::uint64_t> members;
    for (std::uint64_t x = 1; out.d.size() < count; ++x) {
        bool ok = true;
        for (auto a : out.d) {
            if (x == 2 * a || a == 2 * x || members.contains(2 * a >= x ? 2 * a - x : 0) ||
                ((a + x) % 2 == 0 && members.contains((a + x) / 2))) {
                ok = false;
                break;
            }
        }
        if (ok) {
            out.d.push_back(x);
            members.insert(x);
        }
    }
    return out;
}

}  // namespace rabe::algebra
