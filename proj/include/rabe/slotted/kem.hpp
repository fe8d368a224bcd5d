#pragma once

#include <sodium.h>

#include <optional>

#include "rabe/group/backend.hpp"

namespace rabe::slotted {

// Outputs of the key-encapsulation layer for a target-group secret mu:
//   t1  = H0(mu)            (scalar encoding)
//   key = H1(mu)            (32-byte symmetric key)
//   tag = H2(t1 || blob)    (verifiable tag binding mu to the payload)
struct KemOutputs {
    Bytes t1;
    Digest key;
    Digest tag;
};

template <group::PairingBackend B>
Bytes kem_t1(const typename B::GT& mu) {
    return group::hash_to_scalar<B>("H0", {group::encode_element(mu)}).to_bytes();
}

template <group::PairingBackend B>
Digest kem_key(const typename B::GT& mu) {
    return Transcript("H1").add(group::encode_element(mu)).digest256();
}

inline Digest kem_tag(ByteView t1, ByteView blob) { return Transcript("H2").add(t1).add(blob).digest256(); }

template <group::PairingBackend B>
KemOutputs kem_derive(const typename B::GT& mu, ByteView blob) {
    KemOutputs out{kem_t1<B>(mu), kem_key<B>(mu), {}};
    out.tag = kem_tag(out.t1, blob);
    return out;
}

inline constexpr std::size_t kNonceBytes = crypto_aead_xchacha20poly1305_ietf_NPUBBYTES;
inline constexpr std::size_t kMacBytes = crypto_aead_xchacha20poly1305_ietf_ABYTES;

// blob = nonce || XChaCha20-Poly1305(key, nonce, message)
inline Bytes seal(const Digest& key, ByteView message, Drbg& rng) {
    ensure_sodium();
    Bytes blob(kNonceBytes + message.size() + kMacBytes);
    rng.fill(std::span(blob.data(), kNonceBytes));
    unsigned long long clen = 0;
    crypto_aead_xchacha20poly1305_ietf_encrypt(blob.data() + kNonceBytes, &clen, message.data(), message.size(),
                                               nullptr, 0, nullptr, blob.data(), key.data());
    blob.resize(kNonceBytes + clen);
    return blob;
}

inline std::optional<Bytes> open(const Digest& key, ByteView blob) {
    ensure_sodium();
    if (blob.size() < kNonceBytes + kMacBytes) return std::nullopt;
    Bytes message(blob.size() - kNonceBytes - kMacBytes);
    unsigned long long mlen = 0;
    if (crypto_aead_xchacha20poly1305_ietf_decrypt(message.data(), &mlen, nullptr, blob.data() + kNonceBytes,
                                                   blob.size() - kNonceBytes, nullptr, 0, blob.data(),
                                                   key.data()) != 0)
        return std::nullopt;
    message.resize(mlen);
    return message;
}

}  // namespace rabe::slotted
