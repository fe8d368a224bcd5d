#pragma once

#include "rabe/fraud/dleq.hpp"
#include "rabe/registered/scheme.hpp"

namespace rabe::fraud {

// Statement (C2', vk, g, T_i): vk = C2'^sk in the target group, T_i = g^sk.
template <group::PairingBackend B>
using FraudDleq = DleqProof<B, typename B::GT, typename B::G>;

template <group::PairingBackend B>
struct FraudProof {
    typename B::GT vk;
    FraudDleq<B> proof;

    friend bool operator==(const FraudProof&, const FraudProof&) = default;
};

template <group::PairingBackend B>
DleqStatement<typename B::GT, typename B::G> fraud_statement(const slotted::TransformCiphertext<B>& ctp,
                                                             const typename B::GT& vk, const typename B::G& pk_t) {
    return {ctp.c2, vk, B::generator(), pk_t};
}

template <group::PairingBackend B>
FraudProof<B> fraud_prove(const slotted::SecretKey<B>& sk, const slotted::TransformCiphertext<B>& ctp,
                          const typename B::G& pk_t, Drbg& rng) {
    FraudProof<B> out;
    out.vk = ctp.c2.pow(sk.r);
    out.proof = dleq_prove<B>(fraud_statement(ctp, out.vk, pk_t), sk.r, rng);
    return out;
}

// true = fraud confirmed. A proof whose DLEQ part fails never confirms fraud.
template <group::PairingBackend B>
bool fraud_verify(const FraudProof<B>& pi, const slotted::TransformCiphertext<B>& ctp,
                  const slotted::Ciphertext<B>& ct, const typename B::G& pk_t) {
    if (!dleq_verify(fraud_statement(ctp, pi.vk, pk_t), pi.proof)) return false;
    const auto mu = ctp.c1 * pi.vk;
    return slotted::kem_derive<B>(mu, ct.blob).tag != ct.tag;
}

// Full-scheme wrappers: the instance index travels with the transform result.

template <group::PairingBackend B>
FraudProof<B> fraud_prove(const registered::UserSecretKey<B>& sk, const registered::UserPublicKey<B>& pk,
                          const registered::FullTransform<B>& ft, Drbg& rng) {
    if (ft.instance >= sk.instances.size()) throw SchemeError("transform names an unknown instance");
    return fraud_prove(sk.instances[ft.instance], ft.ct, pk.instances[ft.instance].t, rng);
}

// A result naming an instance that the ciphertext does not carry is
// malformed and counts as fraud, like undecodable result bytes.
template <group::PairingBackend B>
bool fraud_verify(const FraudProof<B>& pi, const registered::FullTransform<B>& ft,
                  const registered::MultiCiphertext<B>& ct, const registered::UserPublicKey<B>& pk) {
    if (ft.instance >= ct.instances.size() || ft.instance >= pk.instances.size() || !ct.instances[ft.instance])
        return true;
    return fraud_verify(pi, ft.ct, *ct.instances[ft.instance], pk.instances[ft.instance].t);
}

}  // namespace rabe::fraud
