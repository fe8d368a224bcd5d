#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rabe/algebra/policy.hpp"

namespace rabe::algebra {

// Share-generating matrix M (beta x n) with row labelling rho. Entries are
// small integers (0, 1, -1 from the compiler below) and are lifted into Z_p
// on use.
struct LsssMatrix {
    std::vector<std::vector<std::int64_t>> rows;
    std::vector<std::string> rho;

    std::size_t row_count() const { return rows.size(); }
    std::size_t col_count() const { return rows.empty() ? 0 : rows.front().size(); }

    friend bool operator==(const LsssMatrix&, const LsssMatrix&) = default;
};

namespace detail {

inline void compile_node(const Policy& node, std::vector<std::int64_t> vec, std::size_t& counter, LsssMatrix& out) {
    switch (node.gate()) {
        case Policy::Gate::leaf:
            out.rows.push_back(std::move(vec));
            out.rho.push_back(node.attribute());
            return;
        case Policy::Gate::any:
            compile_node(node.left(), vec, counter, out);
            compile_node(node.right(), std::move(vec), counter, out);
            return;
        case Policy::Gate::all: {
            vec.resize(counter, 0);
            auto left = vec;
            left.push_back(1);
            std::vector<std::int64_t> right(counter, 0);
            right.push_back(-1);
            ++counter;
            compile_node(node.left(), std::move(left), counter, out);
            compile_node(node.right(), std::move(right), counter, out);
            return;
        }
    }
}

}  // namespace detail

// Monotone formula to LSSS by share-vector propagation: the root carries (1);
// an OR gate hands its vector to both children; an AND gate hands (v, 1) to
// the left child and (0, ..., 0, -1) to the right child, widening the matrix
// by one column. One row per leaf, in leaf order.
inline LsssMatrix policy_to_lsss(const Policy& policy) {
    LsssMatrix out;
    std::size_t counter = 1;
    detail::compile_node(policy, {1}, counter, out);
    for (auto& row : out.rows) row.resize(counter, 0);
    return out;
}

inline LsssMatrix policy_to_lsss(const Policy& policy, const std::vector<std::string>& universe) {
    for (const auto& a : policy.leaves()) {
        bool known = false;
        for (const auto& u : universe) known = known || u == a;
        if (!known) throw PolicyError("attribute '" + a + "' is not in the universe");
    }
    return policy_to_lsss(policy);
}

// Solves sum_{j in I} w_j M_j = (1, 0, ..., 0) over Z_p for I = {j : rho(j) in
// attrs} by Gaussian elimination (first nonzero pivot, free unknowns set to
// zero). Returns every row of I with its coefficient, or nullopt when the
// target vector is outside the span.
template <class S>
std::optional<std::map<std::size_t, S>> reconstruction_coefficients(const LsssMatrix& m, const AttributeSet& attrs) {
    std::vector<std::size_t> selected;
    for (std::size_t j = 0; j < m.row_count(); ++j)
        if (attrs.contains(m.rho[j])) selected.push_back(j);
    if (selected.empty()) return std::nullopt;

    const std::size_t n = m.col_count();
    const std::size_t u = selected.size();
    // Equation c: sum_j w_j M_j[c] = e1[c]. Column u holds the right-hand side.
    std::vector<std::vector<S>> a(n, std::vector<S>(u + 1));
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t k = 0; k < u; ++k) {
            auto v = m.rows[selected[k]][c];
            a[c][k] = v >= 0 ? S::from_u64(static_cast<std::uint64_t>(v)) : -S::from_u64(static_cast<std::uint64_t>(-v));
        }
        a[c][u] = S::from_u64(c == 0 ? 1 : 0);
    }

    std::vector<std::size_t> pivot_col_of_row;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < u && rank < n; ++col) {
        std::size_t pivot = rank;
        while (pivot < n && a[pivot][col].is_zero()) ++pivot;
        if (pivot == n) continue;
        std::swap(a[pivot], a[rank]);
        auto inv = a[rank][col].inverse();
        for (auto& x : a[rank]) x = x * inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == rank || a[r][col].is_zero()) continue;
            auto factor = a[r][col];
            for (std::size_t k = col; k <= u; ++k) a[r][k] = a[r][k] - factor * a[rank][k];
        }
        pivot_col_of_row.push_back(col);
        ++rank;
    }
    for (std::size_t r = rank; r < n; ++r)
        if (!a[r][u].is_zero()) return std::nullopt;

    std::map<std::size_t, S> omega;
    for (auto j : selected) omega.emplace(j, S::from_u64(0));
    for (std::size_t r = 0; r < rank; ++r) omega[selected[pivot_col_of_row[r]]] = a[r][u];
    return omega;
}

}  // namespace rabe::algebra
