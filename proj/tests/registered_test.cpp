#include <gtest/gtest.h>

#include "rabe/group/bls12.hpp"
#include "rabe/group/mock.hpp"
#include "rabe/registered/codec.hpp"
#include "test_support.hpp"

using namespace rabe;
using namespace rabe::registered;
using rabe::algebra::AttributeSet;
using rabe::algebra::Policy;

namespace {

Bytes bytes_of(std::string_view s) { return Bytes(s.begin(), s.end()); }

template <class B>
struct System {
    MultiCrs<B> crs;
    AuxState<B> aux;
    std::vector<UserKeys<B>> users;
    std::vector<AttributeSet> attrs;

    System(std::size_t levels, const std::vector<std::string>& universe, Drbg& rng)
        : crs(setup<B>(levels, universe, rng)), aux(initial_aux(crs)) {}

    void join(const AttributeSet& s, Drbg& rng) {
        users.push_back(keygen(crs, aux, rng));
        attrs.push_back(s);
        register_user(crs, aux, users.back().pk, s);
    }
};

// Brute-force replay of which (user, instance) rows exist after n joins: walk
// the joins one by one and, whenever instance k fills up, record its batch.
std::set<std::pair<std::uint64_t, std::size_t>> expected_dict2(std::uint64_t n, std::size_t levels) {
    std::set<std::pair<std::uint64_t, std::size_t>> out;
    for (std::size_t k = 0; k <= levels; ++k) {
        std::vector<std::uint64_t> batch;
        for (std::uint64_t u = 1; u <= n; ++u) {
            batch.push_back(u);
            if (batch.size() == (1u << k)) {
                for (auto v : batch) out.insert({v, k});
                batch.clear();
            }
        }
    }
    return out;
}

}  // namespace

TEST(RegisteredSetup, InstanceShapes) {
    using B = group::MockWide;
    Drbg rng(1);
    auto c0 = setup<B>(0, {"a"}, rng);
    ASSERT_EQ(c0.instances.size(), 1u);
    EXPECT_EQ(c0.instances[0].slot_count(), 1u);
    EXPECT_EQ(c0.capacity(), 1u);

    auto c2 = setup<B>(2, {"a"}, rng);
    ASSERT_EQ(c2.instances.size(), 3u);
    std::size_t prev = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(c2.instances[k].slot_count(), std::size_t{1} << k);
        auto n = to_artifact(c2.instances[k]).size();
        EXPECT_GT(n, prev);
        prev = n;
    }
}

TEST(RegisteredKeygen, SlotIndices) {
    EXPECT_EQ(slot_index(0, 0), 1u);
    EXPECT_EQ(slot_index(0, 1), 1u);
    EXPECT_EQ(slot_index(0, 2), 1u);
    std::vector<std::size_t> got;
    for (std::size_t k = 0; k <= 3; ++k) got.push_back(slot_index(5, k));
    EXPECT_EQ(got, (std::vector<std::size_t>{1, 2, 2, 6}));
}

TEST(RegisteredKeygen, SlotsFollowCounterAndCapacity) {
    using B = group::MockWide;
    Drbg rng(2);
    System<B> sys(3, {"a"}, rng);
    for (int i = 0; i < 5; ++i) sys.join({"a"}, rng);
    auto keys = keygen(sys.crs, sys.aux, rng);
    EXPECT_EQ(keys.pk.ctr, 5u);
    std::vector<std::size_t> slots;
    for (const auto& pk : keys.pk.instances) slots.push_back(pk.slot);
    EXPECT_EQ(slots, (std::vector<std::size_t>{1, 2, 2, 6}));

    System<B> small(1, {"a"}, rng);
    small.join({}, rng);
    small.join({}, rng);
    EXPECT_THROW(keygen(small.crs, small.aux, rng), SchemeError);
}

TEST(RegisteredRegister, FirstRegistrationAggregatesInstanceZero) {
    using B = group::MockWide;
    Drbg rng(3);
    System<B> sys(2, {"a"}, rng);
    EXPECT_FALSE(sys.aux.mpk.instances[0].has_value());
    sys.join({"a"}, rng);
    EXPECT_TRUE(sys.aux.mpk.instances[0].has_value());
    EXPECT_FALSE(sys.aux.mpk.instances[1].has_value());
    EXPECT_EQ(sys.aux.mpk.ctr, 1u);
}

TEST(RegisteredRegister, TwoUsersOneLevel) {
    using B = group::MockWide;
    Drbg rng(4);
    System<B> sys(1, {"a"}, rng);
    sys.join({"a"}, rng);
    sys.join({}, rng);
    EXPECT_TRUE(sys.aux.mpk.instances[0].has_value());
    EXPECT_TRUE(sys.aux.mpk.instances[1].has_value());
    EXPECT_TRUE(sys.aux.dict2.contains({1, 1}));
    EXPECT_TRUE(sys.aux.dict2.contains({2, 1}));
    EXPECT_EQ(sys.aux.dict2.at({1, 1}).slot, 1u);
    EXPECT_EQ(sys.aux.dict2.at({2, 1}).slot, 2u);
    EXPECT_EQ(sys.aux.dict2.at({1, 1}).attrs, AttributeSet{"a"});
}

TEST(RegisteredRegister, StaleAndMalformedKeysRejected) {
    using B = group::MockWide;
    Drbg rng(5);
    System<B> sys(2, {"a"}, rng);
    auto stale = keygen(sys.crs, sys.aux, rng);
    sys.join({"a"}, rng);
    EXPECT_THROW(register_user(sys.crs, sys.aux, stale.pk, {"a"}), SchemeError);

    auto fresh = keygen(sys.crs, sys.aux, rng);
    auto bad = fresh.pk;
    bad.instances[2].v[0] = bad.instances[2].v[0] * B::generator();
    EXPECT_THROW(register_user(sys.crs, sys.aux, bad, {"a"}), SchemeError);
    EXPECT_THROW(register_user(sys.crs, sys.aux, fresh.pk, {"zzz"}), SchemeError);
    auto before = sys.aux.ctr;
    EXPECT_EQ(before, 1u);
    register_user(sys.crs, sys.aux, fresh.pk, {"a"});
    EXPECT_EQ(sys.aux.ctr, 2u);
}

TEST(RegisteredRegister, Dict2MatchesReplay) {
    using B = group::MockSmall;
    Drbg rng(6);
    for (std::size_t levels = 0; levels <= 4; ++levels) {
        System<B> sys(levels, {"a"}, rng);
        for (std::uint64_t n = 1; n <= (1u << levels); ++n) {
            sys.join({}, rng);
            std::set<std::pair<std::uint64_t, std::size_t>> got;
            for (const auto& [key, _] : sys.aux.dict2) got.insert(key);
            ASSERT_EQ(got, expected_dict2(n, levels)) << "levels=" << levels << " n=" << n;
            for (std::size_t k = 0; k <= levels; ++k)
                EXPECT_EQ(sys.aux.mpk.instances[k].has_value(), n >= (1u << k));
        }
    }
}

TEST(RegisteredEncrypt, BottomComponents) {
    using B = group::MockWide;
    Drbg rng(7);
    System<B> sys(1, {"a"}, rng);
    EXPECT_THROW(encrypt(sys.aux.mpk, Policy::leaf("a"), bytes_of("m"), rng), SchemeError);
    sys.join({"a"}, rng);
    auto ct = encrypt(sys.aux.mpk, Policy::leaf("a"), bytes_of("m"), rng);
    EXPECT_TRUE(ct.instances[0].has_value());
    EXPECT_FALSE(ct.instances[1].has_value());
    sys.join({"a"}, rng);
    ct = encrypt(sys.aux.mpk, Policy::leaf("a"), bytes_of("m"), rng);
    EXPECT_TRUE(ct.instances[0].has_value());
    EXPECT_TRUE(ct.instances[1].has_value());
    EXPECT_EQ(ct.ctr, 2u);
}

TEST(RegisteredUpdate, LookupBehaviour) {
    using B = group::MockWide;
    Drbg rng(8);
    System<B> sys(1, {"a"}, rng);
    auto pending = keygen(sys.crs, sys.aux, rng);
    EXPECT_FALSE(update(sys.crs, sys.aux, pending.pk).has_value());

    sys.join({"a"}, rng);
    sys.join({}, rng);
    auto b1 = update(sys.crs, sys.aux, sys.users[0].pk);
    ASSERT_TRUE(b1.has_value());
    EXPECT_TRUE(b1->instances[0].has_value());
    EXPECT_TRUE(b1->instances[1].has_value());
    EXPECT_EQ(b1->user_ctr, 0u);
    EXPECT_EQ(b1->aux_ctr, 2u);
    EXPECT_EQ(update(sys.crs, sys.aux, sys.users[0].pk), b1);
}

TEST(RegisteredTransform, TieBreakPicksLargestInstance) {
    using B = group::MockWide;
    Drbg rng(9);
    System<B> sys(2, {"a", "b"}, rng);
    for (int i = 0; i < 4; ++i) sys.join({"a"}, rng);
    auto ct = encrypt(sys.aux.mpk, Policy::leaf("a"), bytes_of("hi"), rng);
    // User 4 is current in every instance.
    auto bundle = *update(sys.crs, sys.aux, sys.users[3].pk);
    auto out = transform_full(bundle, ct);
    ASSERT_EQ(out.status, TransformStatus::ok);
    EXPECT_EQ(out.result->instance, 2u);
    EXPECT_EQ(decrypt(sys.users[3].sk, *out.result, ct), bytes_of("hi"));

    auto ct_b = encrypt(sys.aux.mpk, Policy::leaf("b"), bytes_of("hi"), rng);
    auto none = transform_full(bundle, ct_b);
    EXPECT_EQ(none.status, TransformStatus::unsatisfied);
    EXPECT_FALSE(none.result.has_value());
}

TEST(RegisteredTransform, StaleHelperKeyOutcome) {
    using B = group::MockWide;
    Drbg rng(10);
    System<B> sys(2, {"a"}, rng);
    sys.join({"a"}, rng);
    sys.join({"a"}, rng);
    auto old_bundle = *update(sys.crs, sys.aux, sys.users[0].pk);
    sys.join({"a"}, rng);
    sys.join({"a"}, rng);
    auto ct = encrypt(sys.aux.mpk, Policy::leaf("a"), bytes_of("hi"), rng);
    // User 1's current batch is instance 2, aggregated after the bundle was fetched.
    EXPECT_EQ(transform_full(old_bundle, ct).status, TransformStatus::stale_helper_key);
    auto fresh = *update(sys.crs, sys.aux, sys.users[0].pk);
    auto out = transform_full(fresh, ct);
    ASSERT_EQ(out.status, TransformStatus::ok);
    EXPECT_EQ(decrypt(sys.users[0].sk, *out.result, ct), bytes_of("hi"));
}

TEST(RegisteredTransform, OlderCiphertextWithFresherBundle) {
    using B = group::MockWide;
    Drbg rng(11);
    System<B> sys(2, {"a"}, rng);
    for (int i = 0; i < 3; ++i) sys.join({"a"}, rng);
    auto ct = encrypt(sys.aux.mpk, Policy::leaf("a"), bytes_of("old"), rng);
    sys.join({"a"}, rng);
    // User 3 sits in instance 0 for ct; instance 1 was re-aggregated since.
    auto bundle = *update(sys.crs, sys.aux, sys.users[2].pk);
    auto out = transform_full(bundle, ct);
    ASSERT_EQ(out.status, TransformStatus::ok);
    EXPECT_EQ(out.result->instance, 0u);
    EXPECT_EQ(decrypt(sys.users[2].sk, *out.result, ct), bytes_of("old"));
}

// Randomised registration/encryption traces on the mock backend.
class RegisteredTraces : public ::testing::TestWithParam<std::size_t> {};

TEST_P(RegisteredTraces, EndToEnd) {
    using B = group::MockWide;
    const std::size_t levels = GetParam();
    auto universe = test_util::make_universe(4);
    Drbg rng(1000 + levels);
    for (int trace = 0; trace < 25; ++trace) {
        System<B> sys(levels, universe, rng);
        auto n = 1 + rng.uniform(sys.crs.capacity());
        std::vector<std::pair<MultiCiphertext<B>, std::pair<Policy, Bytes>>> cts;
        for (std::uint64_t j = 0; j < n; ++j) {
            sys.join(test_util::random_subset(rng, universe), rng);
            auto pol = test_util::random_policy(rng, universe, 4);
            auto msg = test_util::random_message(rng, 32);
            cts.push_back({encrypt(sys.aux.mpk, pol, msg, rng), {pol, msg}});
        }
        for (std::size_t u = 0; u < sys.users.size(); ++u) {
            auto bundle = *update(sys.crs, sys.aux, sys.users[u].pk);
            for (const auto& [ct, pm] : cts) {
                auto out = transform_full(bundle, ct);
                if (sys.users[u].pk.ctr >= ct.ctr) continue;  // registered after encryption
                bool allowed = pm.first.satisfied_by(sys.attrs[u]);
                ASSERT_EQ(out.status, allowed ? TransformStatus::ok : TransformStatus::unsatisfied);
                if (allowed) {
                    ASSERT_EQ(decrypt(sys.users[u].sk, *out.result, ct), pm.second);
                }
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Levels, RegisteredTraces, ::testing::Values(0, 1, 2, 3));

template <class B>
class RegisteredCodec : public ::testing::Test {};
using Backends = ::testing::Types<group::MockSmall, group::Bls12Backend>;
TYPED_TEST_SUITE(RegisteredCodec, Backends);

TYPED_TEST(RegisteredCodec, RoundTrips) {
    using B = TypeParam;
    Drbg rng(12);
    System<B> sys(1, {"a", "b"}, rng);
    sys.join({"a"}, rng);
    sys.join({"b"}, rng);
    auto ct = encrypt(sys.aux.mpk, Policy::parse("a or b"), bytes_of("x"), rng);
    auto bundle = *update(sys.crs, sys.aux, sys.users[0].pk);
    auto out = transform_full(bundle, ct);
    ASSERT_EQ(out.status, TransformStatus::ok);

    auto crs_bytes = to_artifact(sys.crs);
    EXPECT_EQ(to_artifact(from_artifact<MultiCrs<B>>(crs_bytes)), crs_bytes);
    EXPECT_EQ(from_artifact<MultiMasterPublicKey<B>>(to_artifact(sys.aux.mpk)), sys.aux.mpk);
    EXPECT_EQ(from_artifact<UserPublicKey<B>>(to_artifact(sys.users[1].pk)), sys.users[1].pk);
    auto sk_bytes = to_artifact(sys.users[0].sk);
    EXPECT_EQ(to_artifact(from_artifact<UserSecretKey<B>>(sk_bytes)), sk_bytes);
    EXPECT_EQ(from_artifact<HelperBundle<B>>(to_artifact(bundle)), bundle);
    EXPECT_EQ(from_artifact<FullTransform<B>>(to_artifact(*out.result)), *out.result);
    auto ct_bytes = to_artifact(ct);
    auto ct2 = from_artifact<MultiCiphertext<B>>(ct_bytes);
    EXPECT_EQ(to_artifact(ct2), ct_bytes);
    EXPECT_EQ(decrypt(sys.users[0].sk, *out.result, ct2), bytes_of("x"));

    auto aux_bytes = to_artifact(sys.aux);
    auto aux2 = from_artifact<AuxState<B>>(aux_bytes);
    EXPECT_EQ(to_artifact(aux2), aux_bytes);
    EXPECT_EQ(update(sys.crs, aux2, sys.users[0].pk), bundle);

    Bytes cut(aux_bytes.begin(), aux_bytes.end() - 1);
    EXPECT_THROW(from_artifact<AuxState<B>>(cut), DecodeError);
    EXPECT_THROW(from_artifact<MultiCiphertext<B>>(aux_bytes), DecodeError);
}

TEST(RegisteredReal, ShortTrace) {
    using B = group::Bls12Backend;
    Drbg rng(13);
    System<B> sys(1, {"a", "b"}, rng);
    sys.join({"a", "b"}, rng);
    auto ct1 = encrypt(sys.aux.mpk, Policy::parse("a and b"), bytes_of("one"), rng);
    sys.join({"b"}, rng);
    auto ct2 = encrypt(sys.aux.mpk, Policy::parse("a and b"), bytes_of("two"), rng);
    auto b0 = *update(sys.crs, sys.aux, sys.users[0].pk);
    auto b1 = *update(sys.crs, sys.aux, sys.users[1].pk);
    for (const auto* ct : {&ct1, &ct2}) {
        auto out = transform_full(b0, *ct);
        ASSERT_EQ(out.status, TransformStatus::ok);
        EXPECT_TRUE(decrypt(sys.users[0].sk, *out.result, *ct).has_value());
    }
    EXPECT_EQ(transform_full(b1, ct2).status, TransformStatus::unsatisfied);
}
