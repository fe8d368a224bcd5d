#include <gtest/gtest.h>

#include <set>

#include "rabe/ledger/ledger.hpp"
#include "rabe/rng.hpp"

using namespace rabe;
using namespace rabe::ledger;

namespace {

Digest id_of(std::uint8_t n) {
    Digest d{};
    d[0] = n;
    return d;
}

Bytes tag_bytes(std::uint8_t fill = 7, std::size_t len = 32) { return Bytes(len, fill); }

Ledger funded() { return Ledger({}, {{"du", 100}, {"dcs", 0}, {"dcs2", 0}}); }

// A task with a submitted result at block 0.
TaskId submitted(Ledger& l) {
    l.publish_tag("do", id_of(1), tag_bytes());
    auto id = l.create_task("du", id_of(1), 40).value;
    l.submit_result("dcs", id, tag_bytes(1, 50));
    return id;
}

}  // namespace

TEST(LedgerState, ConsecutiveCounters) {
    Ledger l;
    Digest a{}, b{};
    EXPECT_FALSE(l.publish_state("kc", 0, a, b));
    EXPECT_TRUE(l.publish_state("kc", 1, a, b));
    EXPECT_FALSE(l.publish_state("kc", 1, a, b));
    EXPECT_FALSE(l.publish_state("kc", 3, a, b));
    EXPECT_TRUE(l.publish_state("kc", 2, a, b));
    EXPECT_FALSE(l.publish_state("mallory", 3, a, b));
    EXPECT_EQ(l.state_log().size(), 2u);
}

TEST(LedgerTags, StoreOnce) {
    Ledger l;
    EXPECT_TRUE(l.publish_tag("do", id_of(1), tag_bytes()));
    auto stored = *l.tag(id_of(1));
    EXPECT_EQ(Bytes(stored.begin(), stored.end()), tag_bytes());
    EXPECT_FALSE(l.publish_tag("do", id_of(1), tag_bytes(9)));
    EXPECT_EQ((*l.tag(id_of(1)))[0], 7);
    EXPECT_FALSE(l.publish_tag("do", id_of(2), tag_bytes(7, 31)));
    EXPECT_FALSE(l.tag(id_of(2)).has_value());
}

TEST(LedgerTasks, CreateEscrows) {
    auto l = funded();
    l.publish_tag("do", id_of(1), tag_bytes());
    EXPECT_FALSE(l.create_task("du", id_of(2), 10));
    EXPECT_FALSE(l.create_task("du", id_of(1), 101));
    auto r = l.create_task("du", id_of(1), 100);
    ASSERT_TRUE(r);
    EXPECT_EQ(l.balance("du"), 0u);
    EXPECT_EQ(l.escrow(), 100u);
    EXPECT_EQ(l.task(r.value)->status, TaskStatus::open);
    EXPECT_TRUE(l.conserved());
}

TEST(LedgerTasks, FirstSubmissionWins) {
    auto l = funded();
    auto id = submitted(l);
    EXPECT_FALSE(l.submit_result("dcs2", id, tag_bytes(2)));
    EXPECT_EQ(l.task(id)->solver, "dcs");
    EXPECT_EQ(l.task(id)->status, TaskStatus::submitted);
}

TEST(LedgerTasks, ClaimAfterWindow) {
    auto l = funded();
    auto id = submitted(l);
    l.advance_block("anyone", 9);
    EXPECT_FALSE(l.claim_reward("dcs", id));
    l.advance_block("anyone", 1);
    EXPECT_FALSE(l.claim_reward("dcs2", id));
    EXPECT_TRUE(l.claim_reward("dcs", id));
    EXPECT_EQ(l.balance("dcs"), 40u);
    EXPECT_EQ(l.task(id)->status, TaskStatus::resolved_paid);
    EXPECT_FALSE(l.claim_reward("dcs", id));
    EXPECT_FALSE(l.submit_result("dcs2", id, tag_bytes()));
    EXPECT_EQ(l.balance("dcs"), 40u);
}

TEST(LedgerTasks, ChallengeWindowBoundary) {
    auto l = funded();
    auto id = submitted(l);
    l.advance_block("x", 9);
    EXPECT_FALSE(l.publish_fraud_proof("intruder", id, tag_bytes()));
    EXPECT_TRUE(l.publish_fraud_proof("du", id, tag_bytes()));
    EXPECT_EQ(l.task(id)->status, TaskStatus::challenged);
    l.advance_block("x", 5);
    EXPECT_FALSE(l.claim_reward("dcs", id));

    auto l2 = funded();
    auto id2 = submitted(l2);
    l2.advance_block("x", 10);
    EXPECT_FALSE(l2.publish_fraud_proof("du", id2, tag_bytes()));
}

TEST(LedgerTasks, Verdicts) {
    for (int verdict : {0, 1}) {
        auto l = funded();
        auto id = submitted(l);
        l.publish_fraud_proof("du", id, tag_bytes());
        EXPECT_FALSE(l.publish_verification_result("du", id, verdict));
        EXPECT_FALSE(l.publish_verification_result("pv", id, 2));
        EXPECT_TRUE(l.publish_verification_result("pv", id, verdict));
        EXPECT_FALSE(l.publish_verification_result("pv", id, 1 - verdict));
        if (verdict == 1) {
            EXPECT_EQ(l.task(id)->status, TaskStatus::resolved_refunded);
            EXPECT_EQ(l.balance("du"), 100u);
            EXPECT_EQ(l.balance("dcs"), 0u);
        } else {
            EXPECT_EQ(l.task(id)->status, TaskStatus::resolved_paid);
            EXPECT_EQ(l.balance("du"), 60u);
            EXPECT_EQ(l.balance("dcs"), 40u);
        }
        EXPECT_EQ(l.escrow(), 0u);
        EXPECT_TRUE(l.conserved());
    }
}

TEST(LedgerTasks, VerdictNeedsChallenge) {
    auto l = funded();
    auto id = submitted(l);
    EXPECT_FALSE(l.publish_verification_result("pv", id, 1));
}

TEST(LedgerTasks, CancelUnsolvedTask) {
    auto l = funded();
    l.publish_tag("do", id_of(1), tag_bytes());
    auto id = l.create_task("du", id_of(1), 30).value;
    l.advance_block("x", 19);
    EXPECT_FALSE(l.cancel_task("du", id));
    l.advance_block("x", 1);
    EXPECT_FALSE(l.cancel_task("dcs", id));
    EXPECT_TRUE(l.cancel_task("du", id));
    EXPECT_EQ(l.balance("du"), 100u);
    EXPECT_FALSE(l.submit_result("dcs", id, tag_bytes()));

    auto l2 = funded();
    auto id2 = submitted(l2);
    l2.advance_block("x", 50);
    EXPECT_FALSE(l2.cancel_task("du", id2));
}

TEST(LedgerBlocks, Advance) {
    Ledger l;
    EXPECT_EQ(l.advance_block("x", 1).value, 1u);
    EXPECT_FALSE(l.advance_block("x", 0));
    EXPECT_EQ(l.height(), 1u);
}

TEST(LedgerEvents, EveryCallLoggedAndCounted) {
    auto l = funded();
    submitted(l);
    l.submit_result("dcs2", 1, tag_bytes());
    ASSERT_EQ(l.events().size(), 4u);
    EXPECT_EQ(l.events()[3].outcome, "rejected: task is not open");
    EXPECT_EQ(l.events()[3].function, "submit_result");
    EXPECT_EQ(l.op_counts().at("submit_result").calls, 2u);
    EXPECT_EQ(l.op_counts().at("submit_result").storage_writes, 1u);
    auto line = l.events_jsonl().substr(0, l.events_jsonl().find('\n'));
    auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["function"], "publish_tag");
    EXPECT_EQ(j["outcome"], "ok");
    EXPECT_EQ(j["args"].get<std::string>().size(), 64u);
}

// Random mixed calls: conservation after every call, terminal states paid
// exactly once (from the event log), and replay determinism.
namespace {

struct FuzzResult {
    Digest events;
    std::map<Account, std::uint64_t> balances;
};

FuzzResult fuzz(std::uint64_t seed, int calls, bool check) {
    Drbg rng(seed);
    const std::vector<Account> accounts{"du", "du2", "dcs", "dcs2", "pv", "kc", "do"};
    Ledger l({5, "pv", "kc"}, {{"du", 500}, {"du2", 300}, {"dcs", 10}});
    std::uint64_t next_ctr = 1;
    std::map<TaskId, int> payouts;
    for (int i = 0; i < calls; ++i) {
        const auto& who = accounts[rng.uniform(accounts.size())];
        const TaskId task = 1 + rng.uniform(12);
        const std::uint8_t cid = static_cast<std::uint8_t>(rng.uniform(6));
        const auto before = l.task(task) ? l.task(task)->status : TaskStatus::open;
        Receipt r;
        switch (rng.uniform(9)) {
            case 0: r = l.publish_state(who, rng.coin() ? next_ctr : rng.uniform(4), {}, {}); break;
            case 1: r = l.publish_tag(who, id_of(cid), tag_bytes(1, rng.coin() ? 32 : rng.uniform(40))); break;
            case 2: r = l.create_task(who, id_of(cid), rng.uniform(120)); break;
            case 3: r = l.submit_result(who, task, rng.bytes(rng.uniform(20))); break;
            case 4: r = l.claim_reward(who, task); break;
            case 5: r = l.publish_fraud_proof(who, task, rng.bytes(8)); break;
            case 6: r = l.publish_verification_result(who, task, static_cast<int>(rng.uniform(3))); break;
            case 7: r = l.cancel_task(who, task); break;
            default: r = l.advance_block(who, rng.uniform(4)); break;
        }
        if (r && l.state_log().size() == next_ctr) ++next_ctr;
        if (check) {
            EXPECT_TRUE(l.conserved());
            if (const auto* t = l.task(task); t && !is_resolved(before) && is_resolved(t->status)) payouts[task]++;
        }
    }
    if (check) {
        for (const auto& [id, n] : payouts) EXPECT_EQ(n, 1) << id;
        std::map<TaskId, int> resolved_events;
        std::uint64_t escrow = 0;
        for (const auto& [id, t] : l.tasks())
            if (!is_resolved(t.status)) escrow += t.reward;
        EXPECT_EQ(escrow, l.escrow());
        std::uint64_t last = 0;
        for (const auto& e : l.events()) {
            EXPECT_GE(e.block, last);
            last = e.block;
        }
        EXPECT_EQ(l.events().size(), static_cast<std::size_t>(calls));
    }
    return {l.event_digest(), l.balances()};
}

}  // namespace

TEST(LedgerFuzz, ConservationAndReplay) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto a = fuzz(seed, 3000, true);
        auto b = fuzz(seed, 3000, false);
        EXPECT_EQ(a.events, b.events);
        EXPECT_EQ(a.balances, b.balances);
    }
    EXPECT_NE(fuzz(1, 200, false).events, fuzz(2, 200, false).events);
}
