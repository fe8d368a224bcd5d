#pragma once

#include <blst.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <string>

#include "rabe/group/backend.hpp"
#include "rabe/group/counters.hpp"

namespace rabe::group {

// BLS12-381 backend (blst) presenting a symmetric interface.
//
// BLS12-381 is a Type-3 pairing, G1 != G2. A source element is carried as the
// pair (g1^x, g2^x) and every group operation is applied to both halves in
// lockstep, so the symmetric map e(X, Y) := e(X.g1, Y.g2) satisfies
// e(X, Y) = e(Y, X) = gt^(xy). Decoding checks the lockstep invariant with a
// pairing equation.
struct Bls12Backend {
    class Scalar {
    public:
        static constexpr ElementKind kind = ElementKind::scalar;
        static constexpr std::size_t encoded_size = 32;

        Scalar() { std::memset(&v_, 0, sizeof v_); }

        static Scalar from_u64(std::uint64_t v) {
            const std::uint64_t limbs[4] = {v, 0, 0, 0};
            Scalar s;
            blst_fr_from_uint64(&s.v_, limbs);
            return s;
        }

        static Scalar from_i64(std::int64_t v) {
            return v >= 0 ? from_u64(static_cast<std::uint64_t>(v)) : -from_u64(static_cast<std::uint64_t>(-v));
        }

        static Scalar from_wide(ByteView bytes) {
            blst_scalar sc;
            blst_scalar_from_be_bytes(&sc, bytes.data(), bytes.size());
            Scalar s;
            blst_fr_from_scalar(&s.v_, &sc);
            return s;
        }

        static Scalar random(Drbg& rng) {
            std::array<std::uint8_t, 64> wide{};
            rng.fill(wide);
            return from_wide(wide);
        }

        static Scalar random_nonzero(Drbg& rng) {
            for (;;) {
                auto s = random(rng);
                if (!s.is_zero()) return s;
            }
        }

        bool is_zero() const { return *this == Scalar(); }

        friend Scalar operator+(const Scalar& a, const Scalar& b) {
            Scalar r;
            blst_fr_add(&r.v_, &a.v_, &b.v_);
            return r;
        }
        friend Scalar operator-(const Scalar& a, const Scalar& b) {
            Scalar r;
            blst_fr_sub(&r.v_, &a.v_, &b.v_);
            return r;
        }
        friend Scalar operator*(const Scalar& a, const Scalar& b) {
            Scalar r;
            blst_fr_mul(&r.v_, &a.v_, &b.v_);
            return r;
        }
        Scalar operator-() const {
            Scalar r;
            blst_fr_cneg(&r.v_, &v_, true);
            return r;
        }
        friend bool operator==(const Scalar& a, const Scalar& b) { return std::memcmp(&a.v_, &b.v_, sizeof a.v_) == 0; }

        Scalar inverse() const {
            if (is_zero()) throw Error("inverse of zero");
            Scalar r;
            blst_fr_inverse(&r.v_, &v_);
            return r;
        }

        blst_scalar to_blst_scalar() const {
            blst_scalar sc;
            blst_scalar_from_fr(&sc, &v_);
            return sc;
        }

        Bytes to_bytes() const {
            auto sc = to_blst_scalar();
            Bytes out(32);
            blst_bendian_from_scalar(out.data(), &sc);
            return out;
        }

        static Scalar from_bytes(ByteView bytes) {
            if (bytes.size() != encoded_size) throw DecodeError("scalar has wrong length");
            blst_scalar sc;
            blst_scalar_from_bendian(&sc, bytes.data());
            if (!blst_scalar_fr_check(&sc)) throw DecodeError("scalar not reduced");
            Scalar s;
            blst_fr_from_scalar(&s.v_, &sc);
            return s;
        }

    private:
        blst_fr v_;
    };

    class G {
    public:
        static constexpr ElementKind kind = ElementKind::source;
        static constexpr std::size_t encoded_size = 48 + 96;

        G() : G(identity()) {}

        static G identity() {
            G g(0);
            std::memset(&g.p1_, 0, sizeof g.p1_);
            std::memset(&g.p2_, 0, sizeof g.p2_);
            return g;
        }

        static G generator() {
            G g(0);
            g.p1_ = *blst_p1_generator();
            g.p2_ = *blst_p2_generator();
            return g;
        }

        bool is_identity() const { return blst_p1_is_inf(&p1_); }

        friend G operator*(const G& a, const G& b) {
            ++op_counters().g_mul;
            G r(0);
            blst_p1_add_or_double(&r.p1_, &a.p1_, &b.p1_);
            blst_p2_add_or_double(&r.p2_, &a.p2_, &b.p2_);
            return r;
        }

        G inverse() const {
            G r = *this;
            blst_p1_cneg(&r.p1_, true);
            blst_p2_cneg(&r.p2_, true);
            return r;
        }

        G pow(const Scalar& k) const {
            ++op_counters().g_exp;
            if (k.is_zero() || is_identity()) return identity();
            auto sc = k.to_blst_scalar();
            G r(0);
            blst_p1_mult(&r.p1_, &p1_, sc.b, 255);
            blst_p2_mult(&r.p2_, &p2_, sc.b, 255);
            return r;
        }

        friend bool operator==(const G& a, const G& b) {
            return blst_p1_is_equal(&a.p1_, &b.p1_) && blst_p2_is_equal(&a.p2_, &b.p2_);
        }

        Bytes to_bytes() const {
            Bytes out(encoded_size);
            blst_p1_compress(out.data(), &p1_);
            blst_p2_compress(out.data() + 48, &p2_);
            return out;
        }

        static G from_bytes(ByteView bytes) {
            if (bytes.size() != encoded_size) throw DecodeError("source element has wrong length");
            blst_p1_affine a1;
            blst_p2_affine a2;
            if (blst_p1_uncompress(&a1, bytes.data()) != BLST_SUCCESS) throw DecodeError("invalid G1 encoding");
            if (blst_p2_uncompress(&a2, bytes.data() + 48) != BLST_SUCCESS) throw DecodeError("invalid G2 encoding");
            if (!blst_p1_affine_in_g1(&a1) || !blst_p2_affine_in_g2(&a2)) throw DecodeError("point not in subgroup");
            G g(0);
            blst_p1_from_affine(&g.p1_, &a1);
            blst_p2_from_affine(&g.p2_, &a2);
            if (!g.halves_consistent()) throw DecodeError("G1/G2 halves do not share a discrete logarithm");
            return g;
        }

        blst_p1_affine g1_affine() const {
            blst_p1_affine a;
            blst_p1_to_affine(&a, &p1_);
            return a;
        }
        blst_p2_affine g2_affine() const {
            blst_p2_affine a;
            blst_p2_to_affine(&a, &p2_);
            return a;
        }

    private:
        explicit G(int) {}

        // e(x.g1, g2) == e(g1, x.g2)
        bool halves_consistent() const {
            bool inf1 = blst_p1_is_inf(&p1_);
            bool inf2 = blst_p2_is_inf(&p2_);
            if (inf1 || inf2) return inf1 && inf2;
            auto a1 = g1_affine();
            auto a2 = g2_affine();
            blst_fp12 lhs, rhs;
            blst_miller_loop(&lhs, blst_p2_affine_generator(), &a1);
            blst_miller_loop(&rhs, &a2, blst_p1_affine_generator());
            return blst_fp12_finalverify(&lhs, &rhs);
        }

        blst_p1 p1_;
        blst_p2 p2_;
    };

    class GT {
    public:
        static constexpr ElementKind kind = ElementKind::target;
        static constexpr std::size_t encoded_size = 12 * 48;

        GT() : v_(*blst_fp12_one()) {}
        explicit GT(const blst_fp12& v) : v_(v) {}

        static GT identity() { return GT(); }
        bool is_identity() const { return blst_fp12_is_one(&v_); }

        friend GT operator*(const GT& a, const GT& b) {
            ++op_counters().gt_mul;
            GT r;
            blst_fp12_mul(&r.v_, &a.v_, &b.v_);
            return r;
        }

        // Elements of GT lie in the cyclotomic subgroup, where the inverse is
        // the conjugate.
        GT inverse() const {
            GT r = *this;
            blst_fp12_conjugate(&r.v_);
            return r;
        }

        GT pow(const Scalar& k) const {
            ++op_counters().gt_exp;
            auto sc = k.to_blst_scalar();
            int top = 255;
            while (top >= 0 && ((sc.b[top / 8] >> (top % 8)) & 1U) == 0) --top;
            blst_fp12 acc = *blst_fp12_one();
            for (int bit = top; bit >= 0; --bit) {
                blst_fp12_cyclotomic_sqr(&acc, &acc);
                if ((sc.b[bit / 8] >> (bit % 8)) & 1U) blst_fp12_mul(&acc, &acc, &v_);
            }
            return GT(acc);
        }

        friend bool operator==(const GT& a, const GT& b) { return blst_fp12_is_equal(&a.v_, &b.v_); }

        Bytes to_bytes() const {
            Bytes out;
            out.reserve(encoded_size);
            for_each_fp(v_, [&](const blst_fp& fp) {
                std::uint8_t buf[48];
                blst_bendian_from_fp(buf, &fp);
                out.insert(out.end(), buf, buf + 48);
            });
            return out;
        }

        static GT from_bytes(ByteView bytes) {
            if (bytes.size() != encoded_size) throw DecodeError("target element has wrong length");
            blst_fp12 v;
            std::size_t off = 0;
            for_each_fp_mut(v, [&](blst_fp& fp) {
                blst_fp_from_bendian(&fp, bytes.data() + off);
                std::uint8_t back[48];
                blst_bendian_from_fp(back, &fp);
                if (std::memcmp(back, bytes.data() + off, 48) != 0) throw DecodeError("field element not reduced");
                off += 48;
            });
            if (!blst_fp12_in_group(&v)) throw DecodeError("element not in target group");
            return GT(v);
        }

        const blst_fp12& raw() const { return v_; }

    private:
        template <class F>
        static void for_each_fp(const blst_fp12& v, F&& f) {
            for (const auto& fp6 : v.fp6)
                for (const auto& fp2 : fp6.fp2)
                    for (const auto& fp : fp2.fp) f(fp);
        }
        template <class F>
        static void for_each_fp_mut(blst_fp12& v, F&& f) {
            for (auto& fp6 : v.fp6)
                for (auto& fp2 : fp6.fp2)
                    for (auto& fp : fp2.fp) f(fp);
        }

        blst_fp12 v_;
    };

    static std::string name() { return "bls12-381-paired"; }
    static G generator() { return G::generator(); }
    static GT gt_generator() {
        static const GT gt = pair(G::generator(), G::generator());
        return gt;
    }

    static GT pair(const G& x, const G& y) {
        ++op_counters().pairings;
        if (x.is_identity() || y.is_identity()) return GT::identity();
        auto p = x.g1_affine();
        auto q = y.g2_affine();
        blst_fp12 r;
        blst_miller_loop(&r, &q, &p);
        blst_final_exp(&r, &r);
        return GT(r);
    }
};

}  // namespace rabe::group
