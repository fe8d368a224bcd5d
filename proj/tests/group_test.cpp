#include <gtest/gtest.h>

#include "rabe/group/bls12.hpp"
#include "rabe/group/mock.hpp"

namespace {

using rabe::Bytes;
using rabe::DecodeError;
using rabe::Drbg;
using rabe::group::Bls12Backend;
using rabe::group::MockSmall;
using rabe::group::MockWide;

template <class B>
class GroupLaws : public ::testing::Test {};

using Backends = ::testing::Types<MockSmall, MockWide, Bls12Backend>;
TYPED_TEST_SUITE(GroupLaws, Backends);

TYPED_TEST(GroupLaws, PairingOfGeneratorsIsTargetGenerator) {
    using B = TypeParam;
    EXPECT_EQ(B::pair(B::generator(), B::generator()), B::gt_generator());
    EXPECT_FALSE(B::gt_generator().is_identity());
}

TYPED_TEST(GroupLaws, SmallExponentBilinearity) {
    using B = TypeParam;
    using S = typename B::Scalar;
    auto g = B::generator();
    EXPECT_EQ(B::pair(g.pow(S::from_u64(2)), g.pow(S::from_u64(3))), B::gt_generator().pow(S::from_u64(6)));
}

TYPED_TEST(GroupLaws, RandomBilinearityAndSymmetry) {
    using B = TypeParam;
    using S = typename B::Scalar;
    Drbg rng(11);
    auto g = B::generator();
    const int trials = std::is_same_v<B, Bls12Backend> ? 100 : 1000;
    for (int i = 0; i < trials; ++i) {
        auto a = S::random(rng);
        auto b = S::random(rng);
        auto ga = g.pow(a);
        auto gb = g.pow(b);
        auto lhs = B::pair(ga, gb);
        ASSERT_EQ(lhs, B::gt_generator().pow(a * b));
        ASSERT_EQ(lhs, B::pair(gb, ga));
    }
}

TYPED_TEST(GroupLaws, ExponentiationLaws) {
    using B = TypeParam;
    using S = typename B::Scalar;
    auto g = B::generator();
    EXPECT_TRUE(g.pow(S::from_u64(0)).is_identity());
    EXPECT_EQ(g.pow(S::from_u64(1)), g);
    auto minus_one = S::from_u64(0) - S::from_u64(1);
    EXPECT_TRUE((g.pow(minus_one) * g).is_identity());
    EXPECT_TRUE((B::gt_generator().pow(minus_one) * B::gt_generator()).is_identity());

    Drbg rng(12);
    for (int i = 0; i < 50; ++i) {
        auto a = S::random(rng);
        auto b = S::random(rng);
        ASSERT_EQ(g.pow(a).pow(b), g.pow(a * b));
        ASSERT_EQ(g.pow(a) * g.pow(b), g.pow(a + b));
        ASSERT_EQ(g.pow(a).inverse(), g.pow(-a));
        auto gt = B::gt_generator();
        ASSERT_EQ(gt.pow(a).pow(b), gt.pow(a * b));
        ASSERT_EQ(gt.pow(a).inverse(), gt.pow(-a));
    }
}

TYPED_TEST(GroupLaws, ScalarFieldArithmetic) {
    using B = TypeParam;
    using S = typename B::Scalar;
    Drbg rng(13);
    for (int i = 0; i < 200; ++i) {
        auto a = S::random_nonzero(rng);
        ASSERT_EQ(a * a.inverse(), S::from_u64(1));
        ASSERT_TRUE((a + (-a)).is_zero());
    }
    EXPECT_THROW(S::from_u64(0).inverse(), rabe::Error);
}

TYPED_TEST(GroupLaws, CanonicalSerializationRoundtrip) {
    using B = TypeParam;
    using S = typename B::Scalar;
    using rabe::group::decode_element;
    using rabe::group::encode_element;
    Drbg rng(14);
    for (int i = 0; i < 20; ++i) {
        auto k = S::random(rng);
        auto x = B::generator().pow(k);
        auto t = B::gt_generator().pow(k);
        auto xb = encode_element(x);
        auto tb = encode_element(t);
        ASSERT_EQ(decode_element<typename B::G>(xb), x);
        ASSERT_EQ(decode_element<typename B::GT>(tb), t);
        ASSERT_EQ(encode_element(decode_element<typename B::G>(xb)), xb);
        ASSERT_EQ(decode_element<S>(encode_element(k)), k);
        ASSERT_EQ(tb.size(), 5 + B::GT::encoded_size);
    }
    auto id = encode_element(B::G::identity());
    EXPECT_TRUE(decode_element<typename B::G>(id).is_identity());
    EXPECT_TRUE(decode_element<typename B::GT>(encode_element(B::GT::identity())).is_identity());
}

TYPED_TEST(GroupLaws, MalformedElementsAreRejected) {
    using B = TypeParam;
    using rabe::group::decode_element;
    using rabe::group::encode_element;
    auto gt_bytes = encode_element(B::gt_generator());
    auto wrong_kind = gt_bytes;
    wrong_kind[0] = 0x07;
    EXPECT_THROW(decode_element<typename B::GT>(wrong_kind), DecodeError);
    Bytes truncated(gt_bytes.begin(), gt_bytes.end() - 1);
    EXPECT_THROW(decode_element<typename B::GT>(truncated), DecodeError);
    Bytes all_ff(B::Scalar::encoded_size, 0xff);
    EXPECT_THROW(B::Scalar::from_bytes(all_ff), DecodeError);
    Bytes g_ff(B::G::encoded_size, 0xff);
    EXPECT_THROW(B::G::from_bytes(g_ff), DecodeError);
}

TYPED_TEST(GroupLaws, HashToScalarContract) {
    using B = TypeParam;
    using rabe::as_bytes;
    using rabe::group::hash_to_scalar;
    auto a = hash_to_scalar<B>("H0", {as_bytes("input")});
    auto b = hash_to_scalar<B>("H0", {as_bytes("input")});
    auto c = hash_to_scalar<B>("FS", {as_bytes("input")});
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    // Length prefixing: ("ab","c") and ("a","bc") must not collide.
    EXPECT_NE(hash_to_scalar<B>("H0", {as_bytes("ab"), as_bytes("c")}),
              hash_to_scalar<B>("H0", {as_bytes("a"), as_bytes("bc")}));
    auto empty = hash_to_scalar<B>("H0", std::initializer_list<rabe::ByteView>{});
    EXPECT_NO_THROW(B::Scalar::from_bytes(empty.to_bytes()));
}

TEST(MockBackend, ElementsAreDiscreteLogs) {
    using S = MockSmall::Scalar;
    auto x = MockSmall::generator().pow(S::from_u64(17));
    auto y = MockSmall::generator().pow(S::from_u64(400));
    EXPECT_EQ(x.log().value(), 17u);
    EXPECT_EQ(MockSmall::pair(x, y).log().value(), (17u * 400u) % 7919u);
    EXPECT_EQ((x * y).log().value(), 417u);
    EXPECT_EQ(MockSmall::name(), "mock-7919");
}

TEST(MockBackend, WideReductionMatchesSchoolbook) {
    using S = MockSmall::Scalar;
    // 0x01 0x00 0x00 = 65536 = 8 * 7919 + 2184
    const std::uint8_t bytes[] = {0x01, 0x00, 0x00};
    EXPECT_EQ(S::from_wide(bytes).value(), 65536u % 7919u);
}

// Pinned regression vectors, cross-checked with an independent hashlib
// computation of SHA-512(len||tag||len||input) mod 2^61-1.
TEST(HashToScalar, PinnedVectorsSeparateDomains) {
    using rabe::as_bytes;
    using rabe::group::hash_to_scalar;
    auto h0 = hash_to_scalar<MockWide>("H0", {as_bytes("pinned-vector")});
    auto fs = hash_to_scalar<MockWide>("FS", {as_bytes("pinned-vector")});
    EXPECT_NE(h0, fs);
    EXPECT_EQ(h0.value(), 987300922017406202ULL);
    EXPECT_EQ(fs.value(), 1354579756249262124ULL);
}

TEST(OpCounters, CountPairingsAndExponentiations) {
    using rabe::group::CounterScope;
    using S = MockSmall::Scalar;
    CounterScope scope;
    auto g = MockSmall::generator();
    auto t = MockSmall::pair(g, g).pow(S::from_u64(3));
    (void)(g.pow(S::from_u64(2)) * g);
    (void)t;
    auto d = scope.delta();
    EXPECT_EQ(d.pairings, 1u);
    EXPECT_EQ(d.gt_exp, 1u);
    EXPECT_EQ(d.g_exp, 1u);
    EXPECT_EQ(d.g_mul, 1u);
}

}  // namespace
