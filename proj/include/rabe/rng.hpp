#pragma once

#include <sodium.h>

#include <array>
#include <cstdint>
#include <string_view>

#include "rabe/bytes.hpp"
#include "rabe/hash.hpp"

namespace rabe {

// Deterministic random bit generator: ChaCha20 keyed by SHA-256 of the seed,
// one nonce per request. Every randomised algorithm takes one of these
// explicitly so that runs are reproducible from a single seed.
class Drbg {
public:
    explicit Drbg(std::uint64_t seed) {
        Writer w;
        w.u64(seed);
        key_ = Transcript("rabe/drbg/seed").add(w.bytes()).digest256();
    }

    static Drbg from_key(const Digest& key) {
        Drbg d(0);
        d.key_ = key;
        return d;
    }

    void fill(std::span<std::uint8_t> out) {
        ensure_sodium();
        std::array<std::uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> nonce{};
        for (int i = 0; i < 8; ++i) nonce[i] = static_cast<std::uint8_t>(counter_ >> (8 * i));
        ++counter_;
        crypto_stream_chacha20_ietf(out.data(), out.size(), nonce.data(), key_.data());
    }

    Bytes bytes(std::size_t n) {
        Bytes out(n);
        fill(out);
        return out;
    }

    std::uint64_t next_u64() {
        std::array<std::uint8_t, 8> b{};
        fill(b);
        std::uint64_t v = 0;
        for (auto x : b) v = (v << 8) | x;
        return v;
    }

    // Uniform integer in [0, bound) by rejection sampling.
    std::uint64_t uniform(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        for (;;) {
            auto v = next_u64();
            if (v < limit) return v % bound;
        }
    }

    bool coin() { return (next_u64() & 1U) != 0; }

    // Independent child stream, e.g. one per simulated actor.
    Drbg fork(std::string_view label) {
        Writer w;
        w.u64(counter_++);
        return from_key(Transcript("rabe/drbg/fork").add(key_).add(label).add(w.bytes()).digest256());
    }

private:
    Digest key_{};
    std::uint64_t counter_ = 0;
};

}  // namespace rabe
