#pragma once

#include "rabe/group/backend.hpp"

// Chaum-Pedersen proof that log_{base1} G = log_{base2} T, made
// non-interactive with Fiat-Shamir. The two bases may live in different
// groups of the same order.
namespace rabe::fraud {

template <class E1, class E2>
struct DleqStatement {
    E1 base1, g;
    E2 base2, t;
};

template <class B, class E1, class E2>
struct DleqProof {
    E1 c1;
    E2 c2;
    typename B::Scalar c, z;

    friend bool operator==(const DleqProof&, const DleqProof&) = default;
};

// Challenge over the full statement, not just (G, T, C1, C2).
template <group::PairingBackend B, class E1, class E2>
typename B::Scalar dleq_challenge(const DleqStatement<E1, E2>& st, const E1& c1, const E2& c2) {
    using group::encode_element;
    return group::hash_to_scalar<B>("FS-DLEQ", {encode_element(st.base1), encode_element(st.g),
                                                encode_element(st.base2), encode_element(st.t),
                                                encode_element(c1), encode_element(c2)});
}

template <group::PairingBackend B, class E1, class E2>
DleqProof<B, E1, E2> dleq_prove(const DleqStatement<E1, E2>& st, const typename B::Scalar& s, Drbg& rng) {
    const auto r = B::Scalar::random(rng);
    DleqProof<B, E1, E2> pi{st.base1.pow(r), st.base2.pow(r), {}, {}};
    pi.c = dleq_challenge<B>(st, pi.c1, pi.c2);
    pi.z = r + pi.c * s;
    return pi;
}

template <group::PairingBackend B, class E1, class E2>
bool dleq_verify(const DleqStatement<E1, E2>& st, const DleqProof<B, E1, E2>& pi) {
    if (dleq_challenge<B>(st, pi.c1, pi.c2) != pi.c) return false;
    return st.base1.pow(pi.z) == pi.c1 * st.g.pow(pi.c) && st.base2.pow(pi.z) == pi.c2 * st.t.pow(pi.c);
}

}  // namespace rabe::fraud
