#include <gtest/gtest.h>

#include <algorithm>

#include "rabe/fraud/codec.hpp"
#include "rabe/group/bls12.hpp"
#include "rabe/group/mock.hpp"
#include "rabe/registered/scheme.hpp"
#include "test_support.hpp"

using namespace rabe;
using namespace rabe::fraud;
using rabe::algebra::Policy;

namespace {

Bytes bytes_of(std::string_view s) { return Bytes(s.begin(), s.end()); }

template <class B>
struct Fixture {
    slotted::Crs<B> crs;
    std::vector<slotted::KeyPair<B>> keys;
    slotted::Aggregate<B> agg;
    std::optional<slotted::Ciphertext<B>> ct_;
    slotted::TransformCiphertext<B> ctp;

    explicit Fixture(Drbg& rng) {
        crs = slotted::setup<B>(2, {"a", "b"}, rng);
        std::vector<slotted::Registration<B>> regs;
        for (std::size_t i = 1; i <= 2; ++i) {
            keys.push_back(slotted::keygen(crs, i, rng));
            regs.push_back({keys.back().pk, {"a", "b"}});
        }
        agg = slotted::register_keys<B>(crs, regs);
        ct_ = slotted::encrypt(agg.mpk, Policy::parse("a and b"), bytes_of("record"), rng);
        ctp = *slotted::transform(agg.helper_keys[0], *ct_);
    }
    const slotted::Ciphertext<B>& ct() const { return *ct_; }
    const slotted::SecretKey<B>& sk() const { return keys[0].sk; }
    const typename B::G& pk_t() const { return keys[0].pk.t; }
};

}  // namespace

template <class B>
class Dleq : public ::testing::Test {};
using Backends = ::testing::Types<group::MockWide, group::Bls12Backend>;
TYPED_TEST_SUITE(Dleq, Backends);

template <class B>
constexpr int trials(int mock, int real) {
    return std::is_same_v<B, group::Bls12Backend> ? real : mock;
}

TYPED_TEST(Dleq, UnitWitness) {
    using B = TypeParam;
    Drbg rng(1);
    const auto g = B::generator();
    const auto t = g.pow(B::Scalar::random_nonzero(rng));
    DleqStatement<typename B::G, typename B::G> st{g, g, t, t};
    auto pi = dleq_prove<B>(st, B::Scalar::from_u64(1), rng);
    EXPECT_TRUE(dleq_verify(st, pi));
}

TYPED_TEST(Dleq, CompletenessSameAndCrossGroup) {
    using B = TypeParam;
    using S = typename B::Scalar;
    Drbg rng(2);
    for (int i = 0; i < trials<B>(1000, 40); ++i) {
        const S s = S::random(rng);
        const auto b1 = B::generator().pow(S::random_nonzero(rng));
        const auto b2 = B::generator().pow(S::random_nonzero(rng));
        DleqStatement<typename B::G, typename B::G> same{b1, b1.pow(s), b2, b2.pow(s)};
        ASSERT_TRUE(dleq_verify(same, dleq_prove<B>(same, s, rng)));

        const auto t1 = B::gt_generator().pow(S::random_nonzero(rng));
        DleqStatement<typename B::GT, typename B::G> cross{t1, t1.pow(s), b2, b2.pow(s)};
        ASSERT_TRUE(dleq_verify(cross, dleq_prove<B>(cross, s, rng)));
    }
}

TYPED_TEST(Dleq, MutationsAndWrongWitness) {
    using B = TypeParam;
    using S = typename B::Scalar;
    Drbg rng(3);
    const auto one = S::from_u64(1);
    for (int i = 0; i < trials<B>(200, 10); ++i) {
        const S s = S::random(rng);
        const auto b1 = B::gt_generator().pow(S::random_nonzero(rng));
        const auto b2 = B::generator().pow(S::random_nonzero(rng));
        DleqStatement<typename B::GT, typename B::G> st{b1, b1.pow(s), b2, b2.pow(s)};
        const auto pi = dleq_prove<B>(st, s, rng);
        ASSERT_TRUE(dleq_verify(st, pi));

        auto m = pi;
        m.c1 = m.c1 * B::gt_generator();
        EXPECT_FALSE(dleq_verify(st, m));
        m = pi;
        m.c2 = m.c2 * B::generator();
        EXPECT_FALSE(dleq_verify(st, m));
        m = pi;
        m.c = m.c + one;
        EXPECT_FALSE(dleq_verify(st, m));
        m = pi;
        m.z = m.z + one;
        EXPECT_FALSE(dleq_verify(st, m));

        auto other = st;
        other.t = other.t * B::generator();
        EXPECT_FALSE(dleq_verify(other, pi));

        // Statement built from s' != s, proof with s.
        const S s2 = s + one;
        DleqStatement<typename B::GT, typename B::G> mixed{b1, b1.pow(s), b2, b2.pow(s2)};
        EXPECT_FALSE(dleq_verify(mixed, dleq_prove<B>(mixed, s, rng)));
    }
}

template <class B>
class Fraud : public ::testing::Test {};
TYPED_TEST_SUITE(Fraud, Backends);

TYPED_TEST(Fraud, HonestTransformIsNotFraud) {
    using B = TypeParam;
    Drbg rng(4);
    Fixture<B> f(rng);
    auto pi = fraud_prove(f.sk(), f.ctp, f.pk_t(), rng);
    EXPECT_FALSE(fraud_verify(pi, f.ctp, f.ct(), f.pk_t()));
}

TYPED_TEST(Fraud, VerificationKeyRecoversDecryptionSecret) {
    using B = TypeParam;
    Drbg rng(5);
    Fixture<B> f(rng);
    auto pi = fraud_prove(f.sk(), f.ctp, f.pk_t(), rng);
    EXPECT_EQ(f.ctp.c1 * pi.vk, f.ctp.c1 * f.ctp.c2.pow(f.sk().r));
}

TYPED_TEST(Fraud, CorruptedTransformIsFraud) {
    using B = TypeParam;
    Drbg rng(6);
    Fixture<B> f(rng);
    for (int i = 0; i < trials<B>(100, 5); ++i) {
        auto bump = B::gt_generator().pow(B::Scalar::random_nonzero(rng));
        for (int which = 0; which < 2; ++which) {
            auto bad = f.ctp;
            (which == 0 ? bad.c1 : bad.c2) = (which == 0 ? bad.c1 : bad.c2) * bump;
            EXPECT_FALSE(slotted::decrypt_user(f.sk(), bad, f.ct()).has_value());
            auto pi = fraud_prove(f.sk(), bad, f.pk_t(), rng);
            EXPECT_TRUE(fraud_verify(pi, bad, f.ct(), f.pk_t()));
        }
    }
}

TYPED_TEST(Fraud, ForgedVerificationKeysAreRejected) {
    using B = TypeParam;
    using S = typename B::Scalar;
    Drbg rng(7);
    Fixture<B> f(rng);
    const auto honest = fraud_prove(f.sk(), f.ctp, f.pk_t(), rng);
    for (int i = 0; i < trials<B>(200, 10); ++i) {
        // Random vk with the honest proof transcript.
        auto pi = honest;
        pi.vk = B::gt_generator().pow(S::random(rng));
        EXPECT_FALSE(fraud_verify(pi, f.ctp, f.ct(), f.pk_t()));
        // vk from a different secret with a proof that is valid for that secret.
        auto other = slotted::SecretKey<B>{1, S::random_nonzero(rng)};
        auto forged = fraud_prove(other, f.ctp, f.pk_t(), rng);
        EXPECT_FALSE(fraud_verify(forged, f.ctp, f.ct(), f.pk_t()));
        // Another user's honest proof against this user's key.
        auto cross = fraud_prove(f.keys[1].sk, f.ctp, f.keys[1].pk.t, rng);
        EXPECT_FALSE(fraud_verify(cross, f.ctp, f.ct(), f.pk_t()));
    }
}

TYPED_TEST(Fraud, CodecAndNoSecretBytes) {
    using B = TypeParam;
    Drbg rng(8);
    Fixture<B> f(rng);
    auto pi = fraud_prove(f.sk(), f.ctp, f.pk_t(), rng);
    auto bytes = to_artifact(pi);
    EXPECT_EQ(from_artifact<FraudProof<B>>(bytes), pi);
    auto secret = f.sk().r.to_bytes();
    EXPECT_EQ(std::search(bytes.begin(), bytes.end(), secret.begin(), secret.end()), bytes.end());

    Bytes cut(bytes.begin(), bytes.end() - 2);
    EXPECT_THROW(from_artifact<FraudProof<B>>(cut), DecodeError);
}

TEST(FraudFull, WrappersUseTheTransformInstance) {
    using B = group::MockWide;
    Drbg rng(9);
    auto crs = registered::setup<B>(1, {"a"}, rng);
    auto aux = registered::initial_aux(crs);
    std::vector<registered::UserKeys<B>> users;
    for (int i = 0; i < 2; ++i) {
        users.push_back(registered::keygen(crs, aux, rng));
        registered::register_user(crs, aux, users.back().pk, {"a"});
    }
    auto ct = registered::encrypt(aux.mpk, Policy::leaf("a"), bytes_of("m"), rng);
    auto bundle = *registered::update(crs, aux, users[0].pk);
    auto ft = *registered::transform_full(bundle, ct).result;
    auto pi = fraud_prove(users[0].sk, users[0].pk, ft, rng);
    EXPECT_FALSE(fraud_verify(pi, ft, ct, users[0].pk));

    auto bad = ft;
    bad.ct.c1 = bad.ct.c1 * B::gt_generator();
    EXPECT_TRUE(fraud_verify(fraud_prove(users[0].sk, users[0].pk, bad, rng), bad, ct, users[0].pk));

    auto ghost = ft;
    ghost.instance = 7;
    EXPECT_TRUE(fraud_verify(pi, ghost, ct, users[0].pk));
}
