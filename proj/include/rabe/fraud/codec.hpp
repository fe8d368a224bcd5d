#pragma once

#include "rabe/container.hpp"
#include "rabe/fraud/fraud.hpp"

namespace rabe {

// Field order: vk, C1, C2, c, z.
template <group::PairingBackend B>
struct Codec<fraud::FraudProof<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::fraud_proof;
    static std::string backend() { return B::name(); }
    static void write(Writer& w, const fraud::FraudProof<B>& pi) {
        group::write_element(w, pi.vk);
        group::write_element(w, pi.proof.c1);
        group::write_element(w, pi.proof.c2);
        group::write_element(w, pi.proof.c);
        group::write_element(w, pi.proof.z);
    }
    static fraud::FraudProof<B> read(Reader& r) {
        fraud::FraudProof<B> pi;
        pi.vk = group::read_element<typename B::GT>(r);
        pi.proof.c1 = group::read_element<typename B::GT>(r);
        pi.proof.c2 = group::read_element<typename B::G>(r);
        pi.proof.c = group::read_element<typename B::Scalar>(r);
        pi.proof.z = group::read_element<typename B::Scalar>(r);
        return pi;
    }
};

}  // namespace rabe
