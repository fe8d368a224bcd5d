#pragma once

#include <sodium.h>

#include <array>
#include <cstdint>
#include <string_view>

#include "rabe/bytes.hpp"

namespace rabe {

inline void ensure_sodium() {
    static const int status = sodium_init();
    if (status < 0) throw Error("libsodium initialisation failed");
}

// Domain-separated hash over length-prefixed inputs:
//   H(len(tag) || tag || len(x1) || x1 || ... )
// The SHA-256 variant backs fixed 32-byte outputs (keys, tags, digests); the
// SHA-512 variant feeds hash-to-scalar so the modular reduction is unbiased.
class Transcript {
public:
    explicit Transcript(std::string_view domain_tag) {
        ensure_sodium();
        crypto_hash_sha256_init(&s256_);
        crypto_hash_sha512_init(&s512_);
        add(as_bytes(domain_tag));
    }

    Transcript& add(ByteView data) {
        std::uint8_t len[4];
        auto n = static_cast<std::uint32_t>(data.size());
        for (int i = 0; i < 4; ++i) len[i] = static_cast<std::uint8_t>(n >> (24 - 8 * i));
        update(len, 4);
        update(data.data(), data.size());
        return *this;
    }

    Transcript& add(std::string_view s) { return add(as_bytes(s)); }

    Digest digest256() {
        Digest out{};
        crypto_hash_sha256_final(&s256_, out.data());
        return out;
    }

    std::array<std::uint8_t, 64> digest512() {
        std::array<std::uint8_t, 64> out{};
        crypto_hash_sha512_final(&s512_, out.data());
        return out;
    }

private:
    void update(const std::uint8_t* p, std::size_t n) {
        crypto_hash_sha256_update(&s256_, p, n);
        crypto_hash_sha512_update(&s512_, p, n);
    }

    crypto_hash_sha256_state s256_{};
    crypto_hash_sha512_state s512_{};
};

inline Digest sha256(ByteView data) {
    ensure_sodium();
    Digest out{};
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
}

}  // namespace rabe
