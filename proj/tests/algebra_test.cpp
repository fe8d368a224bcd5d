#include <gtest/gtest.h>

#include "rabe/algebra/lsss.hpp"
#include "rabe/algebra/progression_free.hpp"
#include "rabe/group/mock.hpp"
#include "rabe/rng.hpp"

namespace {

using rabe::Drbg;
using rabe::PolicyError;
using rabe::algebra::AttributeSet;
using rabe::algebra::build_progression_free_set;
using rabe::algebra::LsssMatrix;
using rabe::algebra::Policy;
using rabe::algebra::policy_to_lsss;
using rabe::algebra::reconstruction_coefficients;
using rabe::algebra::verify_set;
using S = rabe::group::MockWide::Scalar;
using SmallS = rabe::group::MockSmall::Scalar;

using Set = std::vector<std::uint64_t>;

TEST(ProgressionFreeSet, GreedyExamples) {
    EXPECT_EQ(build_progression_free_set(1).d, (Set{1}));
    EXPECT_EQ(build_progression_free_set(2).d, (Set{1, 3}));
    EXPECT_EQ(build_progression_free_set(4).d, (Set{1, 3, 4, 9}));
    EXPECT_THROW(build_progression_free_set(0), rabe::SchemeError);
}

TEST(ProgressionFreeSet, VerifyExamples) {
    EXPECT_TRUE(verify_set(Set{1, 3, 4, 9}));
    EXPECT_FALSE(verify_set(Set{1, 2, 3}));
    EXPECT_FALSE(verify_set(Set{1, 2}));
    EXPECT_FALSE(verify_set(Set{1, 3, 5}));
    EXPECT_FALSE(verify_set(Set{3, 3}));
    EXPECT_FALSE(verify_set(Set{0, 5}));
    EXPECT_TRUE(verify_set(Set{}));
    EXPECT_TRUE(verify_set(Set{7}));
}

TEST(ProgressionFreeSet, GreedyOutputVerifiesUpTo64) {
    for (std::size_t len = 1; len <= 64; ++len) {
        auto set = build_progression_free_set(len);
        ASSERT_EQ(set.size(), len);
        ASSERT_TRUE(verify_set(set.d)) << "L=" << len;
        ASSERT_TRUE(std::is_sorted(set.d.begin(), set.d.end()));
    }
}

TEST(ProgressionFreeSet, MaxElementRegressionAt64) {
    // Cross-checked with an independent brute-force greedy in Python.
    auto set = build_progression_free_set(64);
    EXPECT_EQ(set.max(), 729u);
    EXPECT_EQ((std::vector<std::uint64_t>(set.d.begin(), set.d.begin() + 8)), (Set{1, 3, 4, 9, 10, 12, 13, 27}));
}

TEST(PolicyParser, PrecedenceAndParentheses) {
    auto p = Policy::parse("(dept_cs and role_phd) or admin");
    EXPECT_EQ(p.gate(), Policy::Gate::any);
    EXPECT_EQ(p.left().gate(), Policy::Gate::all);
    EXPECT_EQ(p.right().attribute(), "admin");

    auto q = Policy::parse("a or b and c");
    EXPECT_EQ(q.gate(), Policy::Gate::any);
    EXPECT_EQ(q.right().gate(), Policy::Gate::all);

    EXPECT_EQ(Policy::parse("A AND B"), Policy::parse("A and B"));
    EXPECT_EQ(Policy::parse("((x))").attribute(), "x");
}

TEST(PolicyParser, Errors) {
    EXPECT_THROW(Policy::parse(""), PolicyError);
    EXPECT_THROW(Policy::parse("   "), PolicyError);
    EXPECT_THROW(Policy::parse("a and"), PolicyError);
    EXPECT_THROW(Policy::parse("(a or b"), PolicyError);
    EXPECT_THROW(Policy::parse("a b"), PolicyError);
    EXPECT_THROW(Policy::parse("a & b"), PolicyError);
    EXPECT_THROW(Policy::parse("and"), PolicyError);
}

TEST(PolicyParser, TextAndBinaryRoundtrip) {
    for (const char* text : {"a", "a and b", "(a or b) and (c or (d and e))", "x1 or x2 or x3"}) {
        auto p = Policy::parse(text);
        EXPECT_EQ(Policy::parse(p.to_string()), p) << text;
        rabe::Writer w;
        p.encode(w);
        rabe::Reader r(w.bytes());
        EXPECT_EQ(Policy::decode(r), p);
        EXPECT_TRUE(r.done());
    }
}

TEST(PolicyParser, DecodeRejectsMalformedStreams) {
    rabe::Writer w;
    w.u32(2);
    w.u8(1);
    w.str("a");
    w.u8(2);  // gate with one operand
    rabe::Reader r(w.bytes());
    EXPECT_THROW(Policy::decode(r), rabe::DecodeError);
}

TEST(Lsss, AndOfTwo) {
    auto m = policy_to_lsss(Policy::parse("A and B"));
    EXPECT_EQ(m.rows, (std::vector<std::vector<std::int64_t>>{{1, 1}, {0, -1}}));
    EXPECT_EQ(m.rho, (std::vector<std::string>{"A", "B"}));
}

TEST(Lsss, OrOfTwo) {
    auto m = policy_to_lsss(Policy::parse("A or B"));
    EXPECT_EQ(m.rows, (std::vector<std::vector<std::int64_t>>{{1}, {1}}));
}

TEST(Lsss, NestedAnd) {
    auto m = policy_to_lsss(Policy::parse("A and (B and C)"));
    EXPECT_EQ(m.rows, (std::vector<std::vector<std::int64_t>>{{1, 1, 0}, {0, -1, 1}, {0, 0, -1}}));
}

TEST(Lsss, UniverseCheck) {
    std::vector<std::string> universe{"A", "B"};
    EXPECT_NO_THROW(policy_to_lsss(Policy::parse("A and B"), universe));
    EXPECT_THROW(policy_to_lsss(Policy::parse("A and Z"), universe), PolicyError);
}

TEST(Reconstruction, Examples) {
    auto and_m = policy_to_lsss(Policy::parse("A and B"));
    auto w = reconstruction_coefficients<S>(and_m, {"A", "B"});
    ASSERT_TRUE(w);
    EXPECT_EQ(w->at(0), S::from_u64(1));
    EXPECT_EQ(w->at(1), S::from_u64(1));
    EXPECT_FALSE(reconstruction_coefficients<S>(and_m, {"A"}));
    EXPECT_FALSE(reconstruction_coefficients<S>(and_m, {}));

    auto or_m = policy_to_lsss(Policy::parse("A or B"));
    auto wb = reconstruction_coefficients<S>(or_m, {"B"});
    ASSERT_TRUE(wb);
    EXPECT_EQ(wb->size(), 1u);
    EXPECT_EQ(wb->at(1), S::from_u64(1));
}

// --- randomised property: span membership <=> formula satisfaction ---------

Policy random_formula(Drbg& rng, int depth, int& leaves_left, const std::vector<std::string>& pool) {
    if (depth == 0 || leaves_left <= 1 || rng.uniform(3) == 0) {
        --leaves_left;
        return Policy::leaf(pool[rng.uniform(pool.size())]);
    }
    --leaves_left;  // reserve one leaf for the right branch
    auto l = random_formula(rng, depth - 1, leaves_left, pool);
    ++leaves_left;
    auto r = random_formula(rng, depth - 1, leaves_left, pool);
    return rng.coin() ? Policy::conj(l, r) : Policy::disj(l, r);
}

template <class F>
bool reconstructs(const LsssMatrix& m, const std::map<std::size_t, F>& omega) {
    for (std::size_t c = 0; c < m.col_count(); ++c) {
        F acc = F::from_u64(0);
        for (const auto& [row, w] : omega) acc = acc + w * F::from_i64(m.rows[row][c]);
        if (acc != F::from_u64(c == 0 ? 1 : 0)) return false;
    }
    return true;
}

template <class F>
void check_span_property(std::uint64_t seed) {
    const std::vector<std::string> pool{"a", "b", "c", "d", "e"};
    Drbg rng(seed);
    for (int trial = 0; trial < 300; ++trial) {
        int budget = 10;
        auto policy = random_formula(rng, 4, budget, pool);
        auto m = policy_to_lsss(policy);
        ASSERT_EQ(m.row_count(), policy.leaves().size());
        ASSERT_LE(m.row_count(), 10u);
        for (unsigned mask = 0; mask < (1u << pool.size()); ++mask) {
            AttributeSet attrs;
            for (std::size_t i = 0; i < pool.size(); ++i)
                if (mask & (1u << i)) attrs.insert(pool[i]);
            auto omega = reconstruction_coefficients<F>(m, attrs);
            ASSERT_EQ(omega.has_value(), policy.satisfied_by(attrs)) << policy.to_string() << " mask=" << mask;
            if (omega) {
                ASSERT_TRUE(reconstructs(m, *omega)) << policy.to_string();
                for (const auto& [row, w] : *omega) ASSERT_TRUE(attrs.contains(m.rho[row]));
            }
        }
    }
}

TEST(Reconstruction, SpanMembershipMatchesFormulaWide) { check_span_property<S>(101); }
TEST(Reconstruction, SpanMembershipMatchesFormulaSmallModulus) { check_span_property<SmallS>(202); }

}  // namespace
