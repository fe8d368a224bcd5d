#include <gtest/gtest.h>

#include "rabe/group/bls12.hpp"
#include "rabe/group/mock.hpp"
#include "rabe/sim/engine.hpp"

using namespace rabe;
using namespace rabe::sim;

namespace {

Scenario two_users() {
    return parse_scenario(R"(
        # two users, the first satisfies the policy
        seed = 42
        universe = doctor, nurse, cardiology
        user = doctor, cardiology
        user = nurse
        policy = doctor and cardiology
        message = patient record 17
        reader = 1
        reward = 25
    )");
}

}  // namespace

TEST(ContentStore, AddressesByHash) {
    ContentStore s;
    auto k = s.put(Bytes{1, 2, 3});
    EXPECT_EQ(k, sha256(Bytes{1, 2, 3}));
    EXPECT_EQ(s.put(Bytes{1, 2, 3}), k);
    EXPECT_EQ(s.size(), 1u);
    EXPECT_EQ(Bytes(s.get(k)->begin(), s.get(k)->end()), (Bytes{1, 2, 3}));
    EXPECT_FALSE(s.get(Digest{}).has_value());
}

TEST(ScenarioConfig, ParsesAndValidates) {
    auto sc = two_users();
    EXPECT_EQ(sc.seed, 42u);
    EXPECT_EQ(sc.users.size(), 2u);
    EXPECT_EQ(sc.effective_levels(), 1u);
    EXPECT_EQ(sc.message, "patient record 17");
    EXPECT_EQ(sc.users[0], (algebra::AttributeSet{"doctor", "cardiology"}));

    EXPECT_THROW(parse_scenario("universe = a\nuser = a\npolicy = a\nbogus = 1\n"), Error);
    EXPECT_THROW(parse_scenario("universe = a\nuser = a\npolicy = b\n"), Error);
    EXPECT_THROW(parse_scenario("universe = a\nuser = a\npolicy = a\nreader = 2\n"), Error);
    EXPECT_THROW(parse_scenario("universe = a\nuser = a\npolicy = a\nlevels = 0\nuser = a\n"), Error);
    EXPECT_THROW(parse_scenario("universe = a\nuser = a\npolicy = a\nstrategy = sneaky\n"), Error);
    EXPECT_THROW(parse_scenario("universe = a\nuser = a\npolicy = a\nreward = x\n"), Error);
    EXPECT_THROW(parse_scenario("universe = a\nuser = a\npolicy = a\nreward = 500\n"), Error);
}

template <class B>
class Scenarios : public ::testing::Test {};
using Backends = ::testing::Types<group::MockWide, group::Bls12Backend>;
TYPED_TEST_SUITE(Scenarios, Backends);

TYPED_TEST(Scenarios, HappyCase) {
    auto rep = run_happy_case<TypeParam>(two_users());
    EXPECT_EQ(rep.outcome, Outcome::delivered);
    EXPECT_TRUE(rep.message_recovered);
    EXPECT_TRUE(rep.solver_paid);
    EXPECT_EQ(rep.balances.at("dcs"), 25u);
    EXPECT_EQ(rep.balances.at("du1"), 75u);
    EXPECT_TRUE(rep.conserved);
    EXPECT_TRUE(rep.audit_ok);
    EXPECT_TRUE(rep.fair());
    EXPECT_EQ(rep.crypto_ops.at("decrypt").gt_exp, 1u);
}

TYPED_TEST(Scenarios, DisputeCases) {
    for (auto strategy : {DcsStrategy::corrupt_c1, DcsStrategy::corrupt_c2, DcsStrategy::garbage}) {
        auto sc = two_users();
        sc.strategy = strategy;
        auto rep = run_dispute_case<TypeParam>(sc);
        EXPECT_EQ(rep.outcome, Outcome::refunded) << to_string(strategy);
        EXPECT_EQ(rep.verdict, 1);
        EXPECT_FALSE(rep.message_recovered);
        EXPECT_EQ(rep.balances.at("du1"), 100u);
        EXPECT_EQ(rep.balances.at("dcs"), 0u);
        EXPECT_TRUE(rep.fair());
    }
    for (auto mode : {DuMode::challenge_anyway, DuMode::forged_vk, DuMode::malformed_proof}) {
        auto sc = two_users();
        sc.du_mode = mode;
        auto rep = run_dispute_case<TypeParam>(sc);
        EXPECT_EQ(rep.outcome, Outcome::solver_paid_despite_challenge) << to_string(mode);
        EXPECT_EQ(rep.verdict, 0);
        EXPECT_EQ(rep.balances.at("dcs"), 25u);
        EXPECT_TRUE(rep.fair());
    }
}

TEST(Scenarios, NobodySatisfiesPolicy) {
    auto sc = two_users();
    sc.policy = "nurse and cardiology";
    auto rep = run_scenario<group::MockWide>(sc);
    EXPECT_FALSE(rep.submitted);
    EXPECT_EQ(rep.outcome, Outcome::cancelled);
    EXPECT_EQ(rep.balances.at("du1"), 100u);
    EXPECT_TRUE(rep.fair());
}

TEST(Scenarios, MinimalSystem) {
    auto sc = parse_scenario("universe = a\nuser = a\npolicy = a\n");
    EXPECT_EQ(sc.effective_levels(), 0u);
    auto rep = run_happy_case<group::MockSmall>(sc);
    EXPECT_EQ(rep.outcome, Outcome::delivered);
    EXPECT_TRUE(rep.audit_ok);
}

TEST(Scenarios, LaterReaderInLargerSystem) {
    auto sc = parse_scenario(R"(
        universe = a, b, c
        user = a
        user = b
        user = a, b
        user = c
        user = a, c
        policy = a and c
        reader = 5
        levels = 3
    )");
    auto rep = run_happy_case<group::MockWide>(sc);
    EXPECT_EQ(rep.outcome, Outcome::delivered);
    EXPECT_TRUE(rep.audit_ok);
}

TEST(Scenarios, Deterministic) {
    auto a = run_scenario<group::MockWide>(two_users());
    auto b = run_scenario<group::MockWide>(two_users());
    EXPECT_EQ(a.event_digest, b.event_digest);
    EXPECT_EQ(a.to_json(false), b.to_json(false));
    auto sc = two_users();
    sc.seed = 43;
    EXPECT_EQ(run_scenario<group::MockWide>(sc).outcome, Outcome::delivered);
}

TEST(Scenarios, ReportJson) {
    auto j = run_scenario<group::MockWide>(two_users()).to_json();
    EXPECT_EQ(j["outcome"], "delivered");
    EXPECT_TRUE(j["events"].is_array());
    EXPECT_EQ(j["events"][0]["function"], "publish_state");
    EXPECT_TRUE(j.contains("timings_ms"));
    EXPECT_EQ(j["ledger_ops"]["publish_state"]["calls"], 2);
}

TEST(Fuzz, SummaryAndDeterminism) {
    auto empty = fuzz_traces<group::MockWide>(0, 1);
    EXPECT_EQ(empty.traces, 0u);
    EXPECT_TRUE(empty.outcomes.empty());

    auto a = fuzz_traces<group::MockWide>(100, 9, 2);
    auto b = fuzz_traces<group::MockWide>(100, 9, 2);
    EXPECT_EQ(a.to_json(), b.to_json());
    EXPECT_TRUE(a.clean()) << a.to_json().dump();
    EXPECT_EQ(a.traces, 100u);
    // Every outcome kind shows up in a run this size.
    EXPECT_EQ(a.outcomes.size(), 4u) << a.to_json().dump();
}
