#pragma once

#include <cstdint>
#include <string>

#include "rabe/group/backend.hpp"
#include "rabe/group/counters.hpp"

namespace rabe::group {

// Integers modulo a prime P < 2^63.
template <std::uint64_t P>
class ModInt {
    static_assert(P > 2 && P < (std::uint64_t{1} << 63), "modulus out of range");

public:
    static constexpr ElementKind kind = ElementKind::scalar;
    static constexpr std::size_t encoded_size = 8;
    static constexpr std::uint64_t modulus = P;

    constexpr ModInt() = default;

    static constexpr ModInt from_u64(std::uint64_t v) { return ModInt(v % P); }
    static constexpr ModInt from_i64(std::int64_t v) {
        auto m = static_cast<std::int64_t>(P);
        auto r = v % m;
        return ModInt(static_cast<std::uint64_t>(r < 0 ? r + m : r));
    }

    // Reduces a big-endian byte string of any length.
    static ModInt from_wide(ByteView bytes) {
        unsigned __int128 acc = 0;
        for (auto b : bytes) acc = ((acc << 8) | b) % P;
        return ModInt(static_cast<std::uint64_t>(acc));
    }

    static ModInt random(Drbg& rng) { return ModInt(rng.uniform(P)); }
    static ModInt random_nonzero(Drbg& rng) { return ModInt(1 + rng.uniform(P - 1)); }

    constexpr std::uint64_t value() const { return v_; }
    constexpr bool is_zero() const { return v_ == 0; }

    friend constexpr ModInt operator+(ModInt a, ModInt b) {
        auto s = a.v_ + b.v_;
        return ModInt(s >= P ? s - P : s);
    }
    friend constexpr ModInt operator-(ModInt a, ModInt b) { return ModInt(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + P - b.v_); }
    friend constexpr ModInt operator*(ModInt a, ModInt b) {
        return ModInt(static_cast<std::uint64_t>(static_cast<unsigned __int128>(a.v_) * b.v_ % P));
    }
    constexpr ModInt operator-() const { return ModInt(v_ == 0 ? 0 : P - v_); }
    friend constexpr bool operator==(ModInt a, ModInt b) = default;

    constexpr ModInt pow(std::uint64_t e) const {
        ModInt base = *this, acc(1);
        while (e != 0) {
            if (e & 1U) acc = acc * base;
            base = base * base;
            e >>= 1U;
        }
        return acc;
    }

    ModInt inverse() const {
        if (v_ == 0) throw Error("inverse of zero");
        return pow(P - 2);
    }

    Bytes to_bytes() const {
        Writer w;
        w.u64(v_);
        return std::move(w).bytes();
    }

    static ModInt from_bytes(ByteView bytes) {
        if (bytes.size() != encoded_size) throw DecodeError("scalar has wrong length");
        Reader r(bytes);
        auto v = r.u64();
        if (v >= P) throw DecodeError("scalar not reduced");
        return ModInt(v);
    }

private:
    constexpr explicit ModInt(std::uint64_t v) : v_(v) {}
    std::uint64_t v_ = 0;
};

// Mock pairing group: every element is stored as its discrete logarithm
// w.r.t. the fixed generator, group operations act on exponents and the
// pairing multiplies them. Insecure by construction; it exists so tests can
// read exponents back and compare them against a direct formula evaluation.
template <std::uint64_t P>
struct MockBackend {
    using Scalar = ModInt<P>;

    template <ElementKind K>
    class Element {
    public:
        static constexpr ElementKind kind = K;
        static constexpr std::size_t encoded_size = 8;

        Element() = default;

        static Element identity() { return Element(Scalar::from_u64(0)); }
        static Element from_log(Scalar log) { return Element(log); }

        const Scalar& log() const { return log_; }
        bool is_identity() const { return log_.is_zero(); }

        friend Element operator*(const Element& a, const Element& b) {
            bump_mul();
            return Element(a.log_ + b.log_);
        }
        Element inverse() const { return Element(-log_); }
        Element pow(const Scalar& k) const {
            bump_exp();
            return Element(log_ * k);
        }
        friend bool operator==(const Element& a, const Element& b) = default;

        Bytes to_bytes() const { return log_.to_bytes(); }
        static Element from_bytes(ByteView bytes) { return Element(Scalar::from_bytes(bytes)); }

    private:
        explicit Element(Scalar log) : log_(log) {}

        static void bump_mul() {
            if constexpr (K == ElementKind::source)
                ++op_counters().g_mul;
            else
                ++op_counters().gt_mul;
        }
        static void bump_exp() {
            if constexpr (K == ElementKind::source)
                ++op_counters().g_exp;
            else
                ++op_counters().gt_exp;
        }

        Scalar log_;
    };

    using G = Element<ElementKind::source>;
    using GT = Element<ElementKind::target>;

    static std::string name() { return "mock-" + std::to_string(P); }
    static G generator() { return G::from_log(Scalar::from_u64(1)); }
    static GT gt_generator() { return GT::from_log(Scalar::from_u64(1)); }

    static GT pair(const G& x, const G& y) {
        ++op_counters().pairings;
        return GT::from_log(x.log() * y.log());
    }
};

// Small modulus for exhaustive oracle checks.
using MockSmall = MockBackend<7919>;
// Mersenne prime 2^61 - 1: same exponent arithmetic, negligible collision
// probability in randomised trials.
using MockWide = MockBackend<2305843009213693951ULL>;

}  // namespace rabe::group
