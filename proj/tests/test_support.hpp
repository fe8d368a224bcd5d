#pragma once

#include <string>
#include <vector>

#include "rabe/algebra/policy.hpp"
#include "rabe/rng.hpp"

namespace rabe::test_util {

inline std::vector<std::string> make_universe(std::size_t n, const std::string& prefix = "attr_") {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        auto digits = std::to_string(i);
        out.push_back(prefix + std::string(digits.size() < 3 ? 3 - digits.size() : 0, '0') + digits);
    }
    return out;
}

// AND of the first `count` universe attributes, left-associated.
inline algebra::Policy and_policy(const std::vector<std::string>& universe, std::size_t count) {
    auto p = algebra::Policy::leaf(universe.at(0));
    for (std::size_t i = 1; i < count; ++i) p = algebra::Policy::conj(p, algebra::Policy::leaf(universe.at(i)));
    return p;
}

inline algebra::Policy random_policy(Drbg& rng, const std::vector<std::string>& pool, int max_leaves, int depth = 4) {
    if (depth == 0 || max_leaves <= 1 || rng.uniform(3) == 0) return algebra::Policy::leaf(pool[rng.uniform(pool.size())]);
    int left_budget = 1 + static_cast<int>(rng.uniform(static_cast<std::uint64_t>(max_leaves - 1)));
    auto l = random_policy(rng, pool, left_budget, depth - 1);
    auto r = random_policy(rng, pool, max_leaves - left_budget, depth - 1);
    return rng.coin() ? algebra::Policy::conj(l, r) : algebra::Policy::disj(l, r);
}

inline algebra::AttributeSet random_subset(Drbg& rng, const std::vector<std::string>& pool) {
    algebra::AttributeSet out;
    for (const auto& a : pool)
        if (rng.coin()) out.insert(a);
    return out;
}

// A minimal satisfying set found by walking the formula.
inline void satisfying_set(Drbg& rng, const algebra::Policy& p, algebra::AttributeSet& out) {
    switch (p.gate()) {
        case algebra::Policy::Gate::leaf: out.insert(p.attribute()); return;
        case algebra::Policy::Gate::all:
            satisfying_set(rng, p.left(), out);
            satisfying_set(rng, p.right(), out);
            return;
        case algebra::Policy::Gate::any: satisfying_set(rng, rng.coin() ? p.left() : p.right(), out); return;
    }
}

inline Bytes random_message(Drbg& rng, std::size_t max_len = 96) { return rng.bytes(rng.uniform(max_len + 1)); }

}  // namespace rabe::test_util
