#include <gtest/gtest.h>

#include "exponent_oracle.hpp"
#include "rabe/group/bls12.hpp"
#include "rabe/group/mock.hpp"
#include "rabe/slotted/codec.hpp"
#include "test_support.hpp"

using namespace rabe;
using namespace rabe::slotted;
using rabe::algebra::AttributeSet;
using rabe::algebra::Policy;

namespace {

Bytes bytes_of(std::string_view s) { return Bytes(s.begin(), s.end()); }

template <class B>
struct World {
    Crs<B> crs;
    SetupTrapdoor<B> td;
    std::vector<KeyPair<B>> keys;
    std::vector<Registration<B>> regs;
    Aggregate<B> agg;
};

template <class B>
World<B> make_world(std::size_t slots, const std::vector<std::string>& universe,
                    const std::vector<AttributeSet>& attrs, Drbg& rng) {
    World<B> w;
    std::tie(w.crs, w.td) = setup_with_trapdoor<B>(slots, universe, rng);
    for (std::size_t i = 1; i <= slots; ++i) {
        w.keys.push_back(keygen(w.crs, i, rng));
        w.regs.push_back({w.keys.back().pk, attrs.at(i - 1)});
    }
    w.agg = register_keys<B>(w.crs, w.regs);
    return w;
}

std::vector<AttributeSet> cycle_attrs(std::size_t slots, const std::vector<std::string>& universe) {
    std::vector<AttributeSet> out;
    for (std::size_t i = 0; i < slots; ++i) {
        AttributeSet s;
        for (std::size_t k = 0; k < universe.size(); ++k)
            if ((k + i) % 3 != 0) s.insert(universe[k]);
        out.push_back(s);
    }
    return out;
}

}  // namespace

// --- KEM pinned vectors (reference values from an independent script) -------

TEST(Kem, PinnedVectorsMockWide) {
    using B = group::MockWide;
    const auto mu = B::GT::from_log(B::Scalar::from_u64(12345));
    const Bytes blob = bytes_of("fixed-blob");
    auto k = kem_derive<B>(mu, blob);
    EXPECT_EQ(to_hex(k.t1), "0493f54f5ea6db5a");
    EXPECT_EQ(to_hex(k.key), "c907f21093e24462edf93a631a7fc23d0c4250d70ed531a06124baf1b404eb27");
    EXPECT_EQ(to_hex(k.tag), "61e6a7ee150bb449160e9c9fe3941230d1123844266b2feaf6a5e92b55bc125b");

    const auto mu2 = B::GT::from_log(B::Scalar::from_u64(12346));
    EXPECT_EQ(to_hex(kem_derive<B>(mu2, blob).tag),
              "af64a2974ad9347fe02e03865b4133c3d434d30b9d44e46e2f1f01117be5f7bb");
    Bytes flipped = blob;
    flipped[0] ^= 1;
    EXPECT_EQ(to_hex(kem_derive<B>(mu, flipped).tag),
              "f176ef308752ccb1da1d31bdb9ec4fced1068e72dbe1c31d6643af824607ded8");
}

TEST(Kem, SealOpen) {
    Drbg rng(3);
    Digest key{};
    key[0] = 9;
    for (std::size_t n : {0u, 1u, 17u, 300u}) {
        auto msg = rng.bytes(n);
        auto blob = seal(key, msg, rng);
        EXPECT_EQ(blob.size(), n + kNonceBytes + kMacBytes);
        EXPECT_EQ(open(key, blob), msg);
        blob.back() ^= 1;
        EXPECT_FALSE(open(key, blob).has_value());
    }
    EXPECT_FALSE(open(key, Bytes(10)).has_value());
}

// --- setup shape -------------------------------------------------------------

TEST(SlottedSetup, CrossTermIndices) {
    Drbg rng(1);
    using B = group::MockWide;
    auto one = setup<B>(1, {"x"}, rng);
    EXPECT_TRUE(one.w.empty());
    auto two = setup<B>(2, {"x"}, rng);
    ASSERT_EQ(two.w.size(), 1u);
    EXPECT_TRUE(two.w.contains(4));  // d = {1, 3}
    auto four = setup<B>(4, {"x"}, rng);
    std::set<std::uint64_t> keys;
    for (const auto& [z, _] : four.w) keys.insert(z);
    EXPECT_EQ(keys, (std::set<std::uint64_t>{4, 5, 10, 7, 12, 13}));
}

TEST(SlottedSetup, RejectsBadArguments) {
    Drbg rng(1);
    using B = group::MockWide;
    EXPECT_THROW(setup<B>(0, {"x"}, rng), SchemeError);
    EXPECT_THROW(setup<B>(2, {}, rng), SchemeError);
    EXPECT_THROW(setup<B>(2, {"bad name"}, rng), SchemeError);
    auto crs = setup<B>(2, {"x"}, rng);
    EXPECT_THROW(keygen(crs, 0, rng), SchemeError);
    EXPECT_THROW(keygen(crs, 3, rng), SchemeError);
}

TEST(SlottedSetup, SlotPairingIdentity) {
    Drbg rng(2);
    using B = group::MockWide;
    auto crs = setup<B>(4, {"x"}, rng);
    for (std::size_t i = 1; i <= 4; ++i)
        EXPECT_EQ(B::pair(crs.slot(i).b, B::generator()), crs.z * B::pair(crs.h, crs.slot(i).a));
}

// --- exponent oracle (mock backend) -------------------------------------------

class SlottedOracle : public ::testing::TestWithParam<std::size_t> {};

TEST_P(SlottedOracle, EveryComponentMatchesDirectFormulas) {
    using B = group::MockWide;
    using S = B::Scalar;
    const std::size_t L = GetParam();
    Drbg rng(100 + L);
    auto universe = test_util::make_universe(4);
    auto attrs = cycle_attrs(L, universe);

    auto [crs, td] = setup_with_trapdoor<B>(L, universe, rng);
    test_util::ExponentOracle<S> o{td.a, td.b, td.gamma, crs.index_set.d};

    EXPECT_EQ(crs.h.log(), o.h());
    EXPECT_EQ(crs.z.log(), o.z());
    for (std::size_t i = 1; i <= L; ++i) {
        EXPECT_EQ(crs.slot(i).a.log(), o.slot_a(i));
        EXPECT_EQ(crs.slot(i).b.log(), o.slot_b(i));
        EXPECT_EQ(crs.slot(i).p.log(), o.slot_p(i));
        EXPECT_EQ(crs.slot(i).u.log(), o.slot_u(i));
    }
    for (const auto& [z, w] : crs.w) EXPECT_EQ(w.log(), o.cross(z));

    std::vector<S> r;
    std::vector<Registration<B>> regs;
    std::vector<KeyPair<B>> keys;
    for (std::size_t i = 1; i <= L; ++i) {
        keys.push_back(keygen(crs, i, rng));
        const auto& kp = keys.back();
        r.push_back(kp.sk.r);
        EXPECT_EQ(kp.pk.t.log(), kp.sk.r);
        EXPECT_EQ(kp.pk.q.log(), o.key_q(i, kp.sk.r));
        for (std::size_t j = 1; j <= L; ++j)
            EXPECT_EQ(kp.pk.v[j - 1].log(), j == i ? S::from_u64(0) : o.key_v(j, kp.sk.r));
        regs.push_back({kp.pk, attrs[i - 1]});
    }
    auto agg = register_keys<B>(crs, regs);
    std::vector<std::set<std::string>> attr_sets(attrs.begin(), attrs.end());
    EXPECT_EQ(agg.mpk.t_hat.log(), o.t_hat(r));
    for (const auto& w : universe) EXPECT_EQ(agg.mpk.u_hat.at(w).log(), o.u_hat(w, attr_sets));
    for (std::size_t i = 1; i <= L; ++i) {
        const auto& hk = agg.helper_keys[i - 1];
        EXPECT_EQ(hk.v_hat.log(), o.v_hat(i, r));
        for (const auto& w : universe) EXPECT_EQ(hk.w_hat.at(w).log(), o.w_hat(i, w, attr_sets));
    }

    auto policy = Policy::parse("(attr_001 and attr_002) or (attr_000 and attr_003)");
    auto [ct, wit] = encrypt_with_witness(agg.mpk, policy, bytes_of("hello"), rng);
    auto expect = o.ciphertext(wit.mu.log(), wit.v, wit.row_randomness, wit.h1.log(), ct.lsss, r, attr_sets);
    EXPECT_EQ(ct.c1.log(), expect.c1);
    EXPECT_EQ(ct.c2.log(), expect.c2);
    EXPECT_EQ(ct.c5.log(), expect.c5);
    ASSERT_EQ(ct.c3.size(), expect.c3.size());
    for (std::size_t k = 0; k < ct.c3.size(); ++k) {
        EXPECT_EQ(ct.c3[k].log(), expect.c3[k]);
        EXPECT_EQ(ct.c4[k].log(), expect.c4[k]);
    }

    for (std::size_t i = 1; i <= L; ++i) {
        auto ctp = transform(agg.helper_keys[i - 1], ct);
        ASSERT_EQ(ctp.has_value(), policy.satisfied_by(attrs[i - 1]));
        if (!ctp) continue;
        auto [c1, c2] = o.transform(i, wit.mu.log(), wit.v[0], r[i - 1]);
        EXPECT_EQ(ctp->c1.log(), c1);
        EXPECT_EQ(ctp->c2.log(), c2);
        EXPECT_EQ(decrypt_user(keys[i - 1].sk, *ctp, ct), bytes_of("hello"));
    }
}

INSTANTIATE_TEST_SUITE_P(Slots, SlottedOracle, ::testing::Values(1, 2, 4, 8));

TEST(SlottedKeys, FixedSecretHookAndSeedSensitivity) {
    using B = group::MockWide;
    Drbg rng(5);
    auto crs = setup<B>(3, {"x"}, rng);
    auto kp = keygen_with_secret(crs, 2, B::Scalar::from_u64(1));
    EXPECT_EQ(kp.pk.t, B::generator());
    EXPECT_EQ(kp.pk.q, crs.slot(2).p);
    EXPECT_EQ(kp.pk.v[0], crs.slot(1).a);
    EXPECT_EQ(kp.pk.v[2], crs.slot(3).a);
    EXPECT_EQ(kp.pk.v[1], B::G::identity());

    Drbg r1(77), r2(78);
    EXPECT_NE(keygen(crs, 1, r1).pk.t, keygen(crs, 1, r2).pk.t);
}

TEST(SlottedKeys, EmptyProductsAreIdentity) {
    using B = group::MockWide;
    Drbg rng(6);
    // Nobody holds "x": U_hat(x) is the full product. Everybody holds "y": identity.
    auto w = make_world<B>(3, {"x", "y"}, {{"y"}, {"y"}, {"y"}}, rng);
    EXPECT_EQ(w.agg.mpk.u_hat.at("y"), B::G::identity());
    EXPECT_EQ(w.agg.mpk.u_hat.at("x"), w.crs.slot(1).u * w.crs.slot(2).u * w.crs.slot(3).u);
    for (const auto& hk : w.agg.helper_keys) EXPECT_EQ(hk.w_hat.at("y"), B::G::identity());

    auto single = make_world<B>(1, {"x"}, {{"x"}}, rng);
    EXPECT_EQ(single.agg.helper_keys[0].v_hat, B::G::identity());
    EXPECT_EQ(single.agg.helper_keys[0].w_hat.at("x"), B::G::identity());
}

TEST(SlottedKeys, RegistrationValidation) {
    using B = group::MockWide;
    Drbg rng(7);
    auto w = make_world<B>(3, {"x"}, {{"x"}, {}, {"x"}}, rng);

    std::vector<Registration<B>> shorter(w.regs.begin(), w.regs.end() - 1);
    EXPECT_THROW(register_keys<B>(w.crs, shorter), SchemeError);

    auto tampered = w.regs;
    tampered[1].pk.v[0] = tampered[1].pk.v[0] * B::generator();
    EXPECT_FALSE(public_key_consistent(w.crs, tampered[1].pk));
    EXPECT_THROW(register_keys<B>(w.crs, tampered), SchemeError);
    EXPECT_NO_THROW(register_keys<B>(w.crs, tampered, KeyCheck::skip));

    auto wrong_slot = w.regs;
    std::swap(wrong_slot[0], wrong_slot[1]);
    EXPECT_THROW(register_keys<B>(w.crs, wrong_slot), SchemeError);

    auto foreign = w.regs;
    foreign[0].attrs.insert("nope");
    EXPECT_THROW(register_keys<B>(w.crs, foreign), SchemeError);
}

// --- correctness on every backend ----------------------------------------------

template <class B>
class SlottedScheme : public ::testing::Test {};
using Backends = ::testing::Types<group::MockSmall, group::MockWide, group::Bls12Backend>;
TYPED_TEST_SUITE(SlottedScheme, Backends);

template <class B>
constexpr bool is_real() {
    return std::is_same_v<B, group::Bls12Backend>;
}

TYPED_TEST(SlottedScheme, RoundTripAcrossSlotCounts) {
    using B = TypeParam;
    Drbg rng(11);
    auto universe = test_util::make_universe(6);
    const int trials = is_real<B>() ? 2 : 20;
    for (std::size_t L : {1u, 2u, 4u, 8u}) {
        if (is_real<B>() && L == 8) continue;
        auto w = make_world<B>(L, universe, cycle_attrs(L, universe), rng);
        for (int t = 0; t < trials; ++t) {
            auto i = 1 + rng.uniform(L);
            const auto& hk = w.agg.helper_keys[i - 1];
            AttributeSet target;
            auto pol = test_util::random_policy(rng, universe, 5);
            test_util::satisfying_set(rng, pol, target);
            bool ok = pol.satisfied_by(hk.attrs);
            auto msg = test_util::random_message(rng);
            auto ct = encrypt(w.agg.mpk, pol, msg, rng);
            auto ctp = transform(hk, ct);
            ASSERT_EQ(ctp.has_value(), ok) << pol.to_string();
            if (ok) {
                EXPECT_EQ(decrypt_user(w.keys[i - 1].sk, *ctp, ct), msg);
            }
        }
    }
}

TYPED_TEST(SlottedScheme, TamperedTransformIsRejected) {
    using B = TypeParam;
    Drbg rng(12);
    std::vector<std::string> universe{"a", "b", "c"};
    auto w = make_world<B>(2, universe, {{"a", "b"}, {"b", "c"}}, rng);
    auto ct = encrypt(w.agg.mpk, Policy::parse("b and (a or c)"), bytes_of("payload"), rng);
    auto ctp = *transform(w.agg.helper_keys[0], ct);
    auto bump = B::gt_generator();

    EXPECT_EQ(decrypt_user(w.keys[0].sk, ctp, ct), bytes_of("payload"));
    EXPECT_FALSE(decrypt_user(w.keys[0].sk, TransformCiphertext<B>{ctp.c1 * bump, ctp.c2}, ct).has_value());
    EXPECT_FALSE(decrypt_user(w.keys[0].sk, TransformCiphertext<B>{ctp.c1, ctp.c2 * bump}, ct).has_value());
    // Another user's secret on this transform.
    EXPECT_FALSE(decrypt_user(w.keys[1].sk, ctp, ct).has_value());
    auto other = *transform(w.agg.helper_keys[1], ct);
    EXPECT_FALSE(decrypt_user(w.keys[0].sk, other, ct).has_value());
    EXPECT_EQ(decrypt_user(w.keys[1].sk, other, ct), bytes_of("payload"));
}

TYPED_TEST(SlottedScheme, EmptyMessage) {
    using B = TypeParam;
    Drbg rng(13);
    auto w = make_world<B>(1, {"a"}, {{"a"}}, rng);
    auto ct = encrypt(w.agg.mpk, Policy::leaf("a"), Bytes{}, rng);
    EXPECT_EQ(decrypt_user(w.keys[0].sk, *transform(w.agg.helper_keys[0], ct), ct), Bytes{});
}

TYPED_TEST(SlottedScheme, CodecRoundTrip) {
    using B = TypeParam;
    Drbg rng(14);
    std::vector<std::string> universe{"a", "b", "c"};
    auto w = make_world<B>(2, universe, {{"a", "b"}, {"c"}}, rng);
    auto ct = encrypt(w.agg.mpk, Policy::parse("a and b or c"), bytes_of("x"), rng);
    auto ctp = *transform(w.agg.helper_keys[0], ct);

    auto crs2 = from_artifact<Crs<B>>(to_artifact(w.crs));
    EXPECT_EQ(crs2.universe, w.crs.universe);
    EXPECT_EQ(crs2.index_set.d, w.crs.index_set.d);
    EXPECT_EQ(crs2.h, w.crs.h);
    EXPECT_EQ(crs2.z, w.crs.z);
    EXPECT_EQ(crs2.w, w.crs.w);
    EXPECT_EQ(to_artifact(crs2), to_artifact(w.crs));

    EXPECT_EQ(from_artifact<MasterPublicKey<B>>(to_artifact(w.agg.mpk)), w.agg.mpk);
    EXPECT_EQ(from_artifact<HelperKey<B>>(to_artifact(w.agg.helper_keys[1])), w.agg.helper_keys[1]);
    EXPECT_EQ(from_artifact<PublicKey<B>>(to_artifact(w.keys[0].pk)), w.keys[0].pk);
    auto sk = from_artifact<SecretKey<B>>(to_artifact(w.keys[0].sk));
    EXPECT_EQ(sk.slot, 1u);
    EXPECT_EQ(sk.r, w.keys[0].sk.r);
    EXPECT_EQ(from_artifact<TransformCiphertext<B>>(to_artifact(ctp)), ctp);

    auto bytes = to_artifact(ct);
    auto ct2 = from_artifact<Ciphertext<B>>(bytes);
    EXPECT_EQ(to_artifact(ct2), bytes);
    EXPECT_EQ(ct2.lsss, ct.lsss);
    EXPECT_EQ(decrypt_user(w.keys[0].sk, *transform(w.agg.helper_keys[0], ct2), ct2), bytes_of("x"));
}

TYPED_TEST(SlottedScheme, CodecRejectsMalformed) {
    using B = TypeParam;
    Drbg rng(15);
    auto w = make_world<B>(1, {"a"}, {{"a"}}, rng);
    auto ct = encrypt(w.agg.mpk, Policy::leaf("a"), bytes_of("x"), rng);
    auto bytes = to_artifact(ct);

    EXPECT_THROW(from_artifact<TransformCiphertext<B>>(bytes), DecodeError);  // wrong kind
    for (std::size_t cut : {0ul, 3ul, bytes.size() / 2, bytes.size() - 1}) {
        Bytes trunc(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
        EXPECT_THROW(from_artifact<Ciphertext<B>>(trunc), DecodeError) << cut;
    }
    Bytes extra = bytes;
    extra.push_back(0);
    EXPECT_THROW(from_artifact<Ciphertext<B>>(extra), DecodeError);
    Bytes bad_magic = bytes;
    bad_magic[0] = 'X';
    EXPECT_THROW(from_artifact<Ciphertext<B>>(bad_magic), DecodeError);
}

TEST(SlottedCodec, WrongBackendRejected) {
    Drbg rng(16);
    auto crs = setup<group::MockWide>(1, {"a"}, rng);
    EXPECT_THROW(from_artifact<Crs<group::MockSmall>>(to_artifact(crs)), DecodeError);
}

// --- policy coverage ------------------------------------------------------------

TEST(SlottedScheme, ExhaustivePoliciesSmall) {
    using B = group::MockWide;
    Drbg rng(21);
    std::vector<std::string> universe{"a", "b", "c", "d"};
    // All 16 subsets as slot attribute sets.
    std::vector<AttributeSet> attrs;
    for (unsigned mask = 0; mask < 16; ++mask) {
        AttributeSet s;
        for (unsigned k = 0; k < 4; ++k)
            if (mask & (1u << k)) s.insert(universe[k]);
        attrs.push_back(s);
    }
    auto w = make_world<B>(16, universe, attrs, rng);
    for (int t = 0; t < 120; ++t) {
        auto pol = test_util::random_policy(rng, universe, 4);
        auto ct = encrypt(w.agg.mpk, pol, bytes_of("m"), rng);
        for (std::size_t i = 1; i <= 16; ++i) {
            auto ctp = transform(w.agg.helper_keys[i - 1], ct);
            ASSERT_EQ(ctp.has_value(), pol.satisfied_by(attrs[i - 1])) << pol.to_string();
            if (ctp) {
                ASSERT_EQ(decrypt_user(w.keys[i - 1].sk, *ctp, ct), bytes_of("m"));
            }
        }
    }
}

TEST(SlottedScheme, CiphertextRowsFollowPolicy) {
    using B = group::MockWide;
    Drbg rng(22);
    auto universe = test_util::make_universe(12);
    auto w = make_world<B>(1, universe, {{}}, rng);
    for (std::size_t beta = 1; beta <= 12; ++beta) {
        auto ct = encrypt(w.agg.mpk, test_util::and_policy(universe, beta), bytes_of("m"), rng);
        EXPECT_EQ(ct.c3.size(), beta);
        EXPECT_EQ(ct.c4.size(), beta);
    }
    EXPECT_THROW(encrypt(w.agg.mpk, Policy::leaf("unknown"), bytes_of("m"), rng), PolicyError);
}

TEST(SlottedScheme, TransformSizeIsConstantAndDecryptIsOneExponentiation) {
    using B = group::Bls12Backend;
    Drbg rng(23);
    auto universe = test_util::make_universe(8);
    AttributeSet all(universe.begin(), universe.end());
    auto w = make_world<B>(2, universe, {all, all}, rng);
    std::size_t size = 0;
    for (std::size_t beta : {1u, 4u, 8u}) {
        auto ct = encrypt(w.agg.mpk, test_util::and_policy(universe, beta), bytes_of("m"), rng);
        auto ctp = *transform(w.agg.helper_keys[0], ct);
        auto n = to_artifact(ctp).size();
        if (size == 0) size = n;
        EXPECT_EQ(n, size);

        group::CounterScope scope;
        auto out = decrypt_user(w.keys[0].sk, ctp, ct);
        auto d = scope.delta();
        EXPECT_EQ(out, bytes_of("m"));
        EXPECT_EQ(d.gt_exp, 1u);
        EXPECT_EQ(d.pairings, 0u);
        EXPECT_EQ(d.g_exp, 0u);
    }
}

TEST(SlottedScheme, AuthenticationFailureAfterTagMatch) {
    using B = group::MockWide;
    Drbg rng(24);
    auto w = make_world<B>(1, {"a"}, {{"a"}}, rng);
    auto [ct, wit] = encrypt_with_witness(w.agg.mpk, Policy::leaf("a"), bytes_of("secret"), rng);
    ct.blob.back() ^= 1;
    ct.tag = kem_derive<B>(wit.mu, ct.blob).tag;
    auto ctp = *transform(w.agg.helper_keys[0], ct);
    EXPECT_THROW(decrypt_user(w.keys[0].sk, ctp, ct), IntegrityError);
}
