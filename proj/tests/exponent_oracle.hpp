#pragma once

// Direct-formula exponent evaluator for the mock backend. Given the setup
// trapdoor, the users' secrets and the encryption randomness, it recomputes
// the discrete logarithm of every CRS, key, aggregate, ciphertext and
// transform component with plain modular arithmetic, expanding products into
// sums (e.g. B_i as a sum over k != i instead of alpha + t_i * log h). It
// shares no code with the scheme beyond the index set and the LSSS matrix.

#include <map>
#include <set>
#include <vector>

#include "rabe/algebra/lsss.hpp"

namespace rabe::test_util {

template <class S>
S power(S base, std::uint64_t e) {
    S acc = S::from_u64(1);
    for (std::uint64_t k = 0; k < e; ++k) acc = acc * base;
    return acc;
}

template <class S>
struct ExponentOracle {
    S a, b;
    std::vector<S> gamma;
    std::vector<std::uint64_t> d;  // d[i-1]

    std::size_t slots() const { return d.size(); }
    std::uint64_t d_max() const { return d.back(); }
    S t(std::size_t i) const { return power(a, d[i - 1]); }

    S h() const {
        S acc = S::from_u64(0);
        for (auto di : d) acc = acc + power(a, 3 * d_max() - di);
        return acc;
    }
    S z() const { return -power(a, 3 * d_max()); }
    S slot_a(std::size_t i) const { return t(i); }
    S slot_b(std::size_t i) const {
        S acc = S::from_u64(0);
        for (std::size_t k = 1; k <= slots(); ++k)
            if (k != i) acc = acc + power(a, 3 * d_max() - d[k - 1] + d[i - 1]);
        return acc;
    }
    S slot_p(std::size_t i) const { return gamma[i - 1]; }
    S slot_u(std::size_t i) const { return b * t(i); }
    S cross(std::uint64_t z_index) const { return b * power(a, z_index); }

    // Keys: log T = r, log Q = gamma_i r, log V_{j,i} = t_j r.
    S key_q(std::size_t i, const S& r) const { return gamma[i - 1] * r; }
    S key_v(std::size_t j, const S& r) const { return t(j) * r; }

    S t_hat(const std::vector<S>& r) const {
        S acc = S::from_u64(0);
        for (const auto& x : r) acc = acc + x;
        return acc;
    }
    S v_hat(std::size_t i, const std::vector<S>& r) const {
        S acc = S::from_u64(0);
        for (std::size_t j = 1; j <= slots(); ++j)
            if (j != i) acc = acc + t(i) * r[j - 1];
        return acc;
    }
    S u_hat(const std::string& w, const std::vector<std::set<std::string>>& attrs) const {
        S acc = S::from_u64(0);
        for (std::size_t j = 1; j <= slots(); ++j)
            if (!attrs[j - 1].contains(w)) acc = acc + b * t(j);
        return acc;
    }
    S w_hat(std::size_t i, const std::string& w, const std::vector<std::set<std::string>>& attrs) const {
        S acc = S::from_u64(0);
        for (std::size_t j = 1; j <= slots(); ++j)
            if (j != i && !attrs[j - 1].contains(w)) acc = acc + b * t(i) * t(j);
        return acc;
    }

    // Ciphertext components from (log mu, v, s_k, log h1).
    struct Ct {
        S c1, c2, c5;
        std::vector<S> c3, c4;
    };
    Ct ciphertext(const S& log_mu, const std::vector<S>& v, const std::vector<S>& sk, const S& log_h1,
                  const algebra::LsssMatrix& m, const std::vector<S>& r,
                  const std::vector<std::set<std::string>>& attrs) const {
        const S& s = v[0];
        Ct out;
        out.c1 = log_mu + z() * s;
        out.c2 = s;
        for (std::size_t k = 0; k < m.row_count(); ++k) {
            S lambda = S::from_u64(0);
            for (std::size_t c = 0; c < m.col_count(); ++c) lambda = lambda + S::from_i64(m.rows[k][c]) * v[c];
            out.c3.push_back((h() - log_h1) * lambda - sk[k] * u_hat(m.rho[k], attrs));
            out.c4.push_back(sk[k]);
        }
        out.c5 = (log_h1 - t_hat(r)) * s;
        return out;
    }

    // Honest transform for slot i: C1' = log mu - s t_i r_i, C2' = s t_i.
    std::pair<S, S> transform(std::size_t i, const S& log_mu, const S& s, const S& r_i) const {
        return {log_mu - s * t(i) * r_i, s * t(i)};
    }
};

}  // namespace rabe::test_util
