// Acceptance suite: one PASS/FAIL line per criterion; exit status 0 iff all pass.

#include <cmath>
#include <cstdio>
#include <functional>

#include "exponent_oracle.hpp"
#include "rabe/bench.hpp"
#include "rabe/group/bls12.hpp"
#include "rabe/group/mock.hpp"
#include "rabe/sim/engine.hpp"
#include "test_support.hpp"

using namespace rabe;
using Real = group::Bls12Backend;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

Bytes bytes_of(std::string_view s) { return Bytes(s.begin(), s.end()); }

// 1. decrypt_user time flat in policy size, transform time grows >= 5x.
Verdict constant_decrypt_time() {
    Drbg rng(101);
    bench::Fixture<Real> fx(100, rng);
    const Bytes msg(64, 1);
    struct Case {
        std::size_t beta;
        std::optional<slotted::Ciphertext<Real>> ct;
        std::optional<slotted::TransformCiphertext<Real>> ctp;
        double transform_ms = 0, decrypt_ms = 0;
    };
    std::vector<Case> cases{{10, {}, {}}, {100, {}, {}}};
    const int transform_reps = 5, decrypt_rounds = 400;
    for (auto& c : cases) {
        c.ct = slotted::encrypt(fx.agg.mpk, bench::and_policy(fx.names, c.beta), msg, rng);
        for (int i = 0; i < transform_reps; ++i)
            c.transform_ms += bench::time_ms([&] { c.ctp = slotted::transform(fx.agg.helper_keys[0], *c.ct); });
        c.transform_ms /= transform_reps;
    }
    // Interleave the two policy sizes so drift affects both equally.
    for (int warm = 0; warm < 20; ++warm)
        for (auto& c : cases) slotted::decrypt_user(fx.keys[0].sk, *c.ctp, *c.ct);
    bool ok = true;
    for (int r = 0; r < decrypt_rounds; ++r)
        for (auto& c : cases)
            c.decrypt_ms += bench::time_ms([&] { ok = ok && slotted::decrypt_user(fx.keys[0].sk, *c.ctp, *c.ct) == msg; });
    for (auto& c : cases) c.decrypt_ms /= decrypt_rounds;
    const double d_rel = std::abs(cases[1].decrypt_ms - cases[0].decrypt_ms) / cases[0].decrypt_ms;
    const double t_ratio = cases[1].transform_ms / cases[0].transform_ms;
    char buf[256];
    std::snprintf(buf, sizeof buf, "decrypt %.4f ms vs %.4f ms (%.1f%% apart), transform %.2f ms vs %.2f ms (%.1fx)",
                  cases[0].decrypt_ms, cases[1].decrypt_ms, 100 * d_rel, cases[0].transform_ms,
                  cases[1].transform_ms, t_ratio);
    return {ok && d_rel < 0.20 && t_ratio >= 5.0, buf};
}

// 2. ct' size identical for beta 10..100; ct size affine with positive slope.
Verdict constant_transform_size() {
    Drbg rng(102);
    bench::Fixture<Real> fx(100, rng);
    std::vector<std::size_t> ct_sizes, ctp_sizes;
    for (std::size_t beta = 10; beta <= 100; beta += 10) {
        auto ct = slotted::encrypt(fx.agg.mpk, bench::and_policy(fx.names, beta), bytes_of("fixed message"), rng);
        auto ctp = *slotted::transform(fx.agg.helper_keys[0], ct);
        ct_sizes.push_back(to_artifact(ct).size());
        ctp_sizes.push_back(to_artifact(ctp).size());
    }
    bool ctp_const = std::all_of(ctp_sizes.begin(), ctp_sizes.end(), [&](auto s) { return s == ctp_sizes[0]; });
    const auto slope = static_cast<long>(ct_sizes[1]) - static_cast<long>(ct_sizes[0]);
    bool affine = slope > 0;
    for (std::size_t i = 1; i < ct_sizes.size(); ++i)
        affine = affine && static_cast<long>(ct_sizes[i]) - static_cast<long>(ct_sizes[i - 1]) == slope;
    char buf[256];
    std::snprintf(buf, sizeof buf, "ct' %zu bytes at every size; ct %zu..%zu bytes, %ld bytes per 10 attributes",
                  ctp_sizes[0], ct_sizes.front(), ct_sizes.back(), slope);
    return {ctp_const && affine, buf};
}

// 3. decrypt_user performs exactly one target-group exponentiation.
Verdict one_exponentiation() {
    Drbg rng(103);
    bench::Fixture<Real> fx(40, rng);
    std::string seen;
    bool ok = true;
    for (std::size_t beta : {1u, 10u, 40u}) {
        auto ct = slotted::encrypt(fx.agg.mpk, bench::and_policy(fx.names, beta), bytes_of("m"), rng);
        auto ctp = *slotted::transform(fx.agg.helper_keys[1], ct);
        group::CounterScope scope;
        auto m = slotted::decrypt_user(fx.keys[1].sk, ctp, ct);
        auto d = scope.delta();
        ok = ok && m == bytes_of("m") && d.gt_exp == 1 && d.pairings == 0 && d.g_exp == 0;
        seen += (seen.empty() ? "" : ", ") + std::to_string(d.gt_exp);
    }
    return {ok, "G_T exponentiations per decrypt_user at beta 1/10/40: " + seen + "; pairings 0"};
}

// 4. Correctness over randomised registration/encryption traces.
Verdict correctness_traces() {
    using B = group::MockSmall;
    auto universe = test_util::make_universe(5);
    std::size_t authorized = 0, unauthorized = 0, failures = 0;
    for (std::size_t levels = 0; levels <= 3; ++levels) {
        Drbg rng(400 + levels);
        for (int trace = 0; trace < 200; ++trace) {
            auto crs = registered::setup<B>(levels, universe, rng);
            auto aux = registered::initial_aux(crs);
            std::vector<registered::UserKeys<B>> users;
            std::vector<algebra::AttributeSet> attrs;
            struct Enc {
                registered::MultiCiphertext<B> ct;
                algebra::Policy policy;
                Bytes msg;
            };
            std::vector<Enc> encs;
            const auto n = 1 + rng.uniform(crs.capacity());
            for (std::uint64_t j = 0; j < n; ++j) {
                users.push_back(registered::keygen(crs, aux, rng));
                attrs.push_back(test_util::random_subset(rng, universe));
                registered::register_user(crs, aux, users.back().pk, attrs.back());
                if (rng.coin() || j + 1 == n) {
                    auto pol = test_util::random_policy(rng, universe, 5);
                    auto msg = test_util::random_message(rng, 48);
                    encs.push_back({registered::encrypt(aux.mpk, pol, msg, rng), pol, msg});
                }
            }
            for (std::size_t u = 0; u < users.size(); ++u) {
                auto bundle = registered::update(crs, aux, users[u].pk);
                if (!bundle) {
                    ++failures;
                    continue;
                }
                for (const auto& e : encs) {
                    if (users[u].pk.ctr >= e.ct.ctr) continue;  // registered after encryption
                    auto out = registered::transform_full(*bundle, e.ct);
                    if (e.policy.satisfied_by(attrs[u])) {
                        ++authorized;
                        if (out.status != registered::TransformStatus::ok ||
                            registered::decrypt(users[u].sk, *out.result, e.ct) != e.msg)
                            ++failures;
                    } else {
                        ++unauthorized;
                        if (out.result.has_value()) ++failures;
                    }
                }
            }
        }
    }
    return {failures == 0, std::to_string(4 * 200) + " traces (l=0..3, p=7919): " + std::to_string(authorized) +
                               " authorized decryptions, " + std::to_string(unauthorized) +
                               " unauthorized transforms, " + std::to_string(failures) + " failures"};
}

// Honest transforms on the real backend, shared by 5 and 6.
struct Honest {
    registered::MultiCrs<Real> crs;
    registered::AuxState<Real> aux;
    std::vector<registered::UserKeys<Real>> users;
    struct Item {
        std::size_t user;
        registered::MultiCiphertext<Real> ct;
        registered::FullTransform<Real> ft;
    };
    std::vector<Item> items;

    explicit Honest(Drbg& rng, std::size_t count) : crs(registered::setup<Real>(2, {"a", "b", "c"}, rng)), aux(registered::initial_aux(crs)) {
        for (int u = 0; u < 4; ++u) {
            users.push_back(registered::keygen(crs, aux, rng));
            registered::register_user(crs, aux, users.back().pk, {"a", "b", "c"});
        }
        const std::vector<std::string> policies{"a", "a and b", "(a or b) and c", "a and b and c"};
        for (std::size_t i = 0; i < count; ++i) {
            const auto u = i % users.size();
            auto ct = registered::encrypt(aux.mpk, algebra::Policy::parse(policies[i % policies.size()]),
                                          bytes_of("honest payload"), rng);
            auto bundle = *registered::update(crs, aux, users[u].pk);
            auto ft = *registered::transform_full(bundle, ct).result;
            items.push_back({u, std::move(ct), std::move(ft)});
        }
    }
};

// 5. Every single-point tampering is caught by decrypt_user and by the dispute.
Verdict verifiability() {
    Drbg rng(105);
    Honest h(rng, 100);
    std::size_t trials = 0, missed_decrypt = 0, missed_dispute = 0;
    for (int round = 0; round < 10; ++round)
        for (const auto& it : h.items) {
            auto bad = it.ft;
            auto bump = Real::gt_generator().pow(Real::Scalar::random_nonzero(rng));
            if (rng.coin())
                bad.ct.c1 = bad.ct.c1 * bump;
            else
                bad.ct.c2 = bad.ct.c2 * bump;
            ++trials;
            const auto& sk = h.users[it.user].sk;
            const auto& pk = h.users[it.user].pk;
            if (registered::decrypt(sk, bad, it.ct).has_value()) ++missed_decrypt;
            auto proof = to_artifact(fraud::fraud_prove(sk, pk, bad, rng));
            if (sim::pv_verdict<Real>(to_artifact(bad), proof, it.ct, pk) != 1) ++missed_dispute;
        }
    return {trials == 1000 && missed_decrypt == 0 && missed_dispute == 0,
            std::to_string(trials) + " tamperings (real backend): " + std::to_string(missed_decrypt) +
                " accepted by decrypt_user, " + std::to_string(missed_dispute) + " verdicts other than 1"};
}

// 6. False accusations against honest transforms never succeed.
Verdict exemptibility() {
    Drbg rng(106);
    Honest h(rng, 100);
    std::size_t trials = 0, successes = 0;
    for (int round = 0; round < 10; ++round)
        for (const auto& it : h.items) {
            const auto& sk = h.users[it.user].sk;
            const auto& pk = h.users[it.user].pk;
            fraud::FraudProof<Real> pi;
            switch (round % 3) {
                case 0: pi = fraud::fraud_prove(sk, pk, it.ft, rng); break;  // honest secret
                case 1:  // random vk on an honest transcript
                    pi = fraud::fraud_prove(sk, pk, it.ft, rng);
                    pi.vk = Real::gt_generator().pow(Real::Scalar::random(rng));
                    break;
                default: {  // vk and a valid proof for some other secret
                    registered::UserSecretKey<Real> fake = sk;
                    for (auto& s : fake.instances) s.r = Real::Scalar::random_nonzero(rng);
                    pi = fraud::fraud_prove(fake, pk, it.ft, rng);
                }
            }
            ++trials;
            if (sim::pv_verdict<Real>(to_artifact(it.ft), to_artifact(pi), it.ct, pk) != 0) ++successes;
        }
    return {trials == 1000 && successes == 0,
            std::to_string(trials) + " false accusations (honest-sk and forged-vk, real backend): " +
                std::to_string(successes) + " succeeded"};
}

// 7. Fairness and conservation over fuzzed protocol traces.
Verdict fairness() {
    auto s = sim::fuzz_traces<group::MockWide>(1200, 107, 2);
    std::string outcomes;
    for (const auto& [k, v] : s.outcomes) outcomes += (outcomes.empty() ? "" : ", ") + k + " " + std::to_string(v);
    return {s.traces >= 1000 && s.clean(),
            std::to_string(s.traces) + " traces (" + outcomes + "); fairness violations " +
                std::to_string(s.fairness_violations) + ", conservation violations " +
                std::to_string(s.conservation_violations) + ", audit failures " + std::to_string(s.audit_failures)};
}

// 8. Mock exponent oracle over every slot for L = 1, 2, 4.
Verdict mock_oracle() {
    using B = group::MockSmall;
    using S = B::Scalar;
    std::size_t checked = 0, mismatches = 0;
    auto check = [&](const S& got, const S& want) {
        ++checked;
        if (got != want) ++mismatches;
    };
    auto universe = test_util::make_universe(4);
    for (std::size_t L : {1u, 2u, 4u}) {
        Drbg rng(800 + L);
        auto [crs, td] = slotted::setup_with_trapdoor<B>(L, universe, rng);
        test_util::ExponentOracle<S> o{td.a, td.b, td.gamma, crs.index_set.d};
        check(crs.h.log(), o.h());
        check(crs.z.log(), o.z());
        for (std::size_t i = 1; i <= L; ++i) {
            check(crs.slot(i).a.log(), o.slot_a(i));
            check(crs.slot(i).b.log(), o.slot_b(i));
            check(crs.slot(i).p.log(), o.slot_p(i));
            check(crs.slot(i).u.log(), o.slot_u(i));
        }
        for (const auto& [z, w] : crs.w) check(w.log(), o.cross(z));

        std::vector<S> r;
        std::vector<std::set<std::string>> attrs;
        std::vector<slotted::Registration<B>> regs;
        std::vector<slotted::KeyPair<B>> keys;
        for (std::size_t i = 1; i <= L; ++i) {
            keys.push_back(slotted::keygen(crs, i, rng));
            r.push_back(keys.back().sk.r);
            check(keys.back().pk.t.log(), r.back());
            check(keys.back().pk.q.log(), o.key_q(i, r.back()));
            for (std::size_t j = 1; j <= L; ++j)
                if (j != i) check(keys.back().pk.v[j - 1].log(), o.key_v(j, r.back()));
            auto s = i == 1 ? test_util::random_subset(rng, universe)
                            : algebra::AttributeSet(universe.begin(), universe.end());
            if (i > 1) s.erase(universe[i % universe.size()]);
            attrs.emplace_back(s.begin(), s.end());
            regs.push_back({keys.back().pk, s});
        }
        auto agg = slotted::register_keys<B>(crs, regs);
        check(agg.mpk.t_hat.log(), o.t_hat(r));
        for (const auto& w : universe) check(agg.mpk.u_hat.at(w).log(), o.u_hat(w, attrs));
        for (std::size_t i = 1; i <= L; ++i) {
            check(agg.helper_keys[i - 1].v_hat.log(), o.v_hat(i, r));
            for (const auto& w : universe) check(agg.helper_keys[i - 1].w_hat.at(w).log(), o.w_hat(i, w, attrs));
        }
        for (const char* text : {"attr_000", "attr_001 and attr_002", "(attr_000 or attr_003) and attr_002"}) {
            auto pol = algebra::Policy::parse(text);
            auto [ct, wit] = slotted::encrypt_with_witness(agg.mpk, pol, bytes_of("oracle"), rng);
            auto e = o.ciphertext(wit.mu.log(), wit.v, wit.row_randomness, wit.h1.log(), ct.lsss, r, attrs);
            check(ct.c1.log(), e.c1);
            check(ct.c2.log(), e.c2);
            check(ct.c5.log(), e.c5);
            for (std::size_t k = 0; k < ct.c3.size(); ++k) {
                check(ct.c3[k].log(), e.c3[k]);
                check(ct.c4[k].log(), e.c4[k]);
            }
            for (std::size_t i = 1; i <= L; ++i) {
                auto ctp = slotted::transform(agg.helper_keys[i - 1], ct);
                ++checked;
                if (ctp.has_value() != pol.satisfied_by(regs[i - 1].attrs)) ++mismatches;
                if (!ctp) continue;
                auto [c1, c2] = o.transform(i, wit.mu.log(), wit.v[0], r[i - 1]);
                check(ctp->c1.log(), c1);
                check(ctp->c2.log(), c2);
            }
        }
    }
    return {mismatches == 0, std::to_string(checked) + " exponents compared (L=1,2,4, all slots): " +
                                 std::to_string(mismatches) + " mismatches"};
}

// 9. Ledger op counters per call do not depend on policy size.
Verdict constant_ledger_ops() {
    auto universe = test_util::make_universe(100);
    bool ok = true;
    std::string detail;
    for (auto strategy : {sim::DcsStrategy::honest, sim::DcsStrategy::corrupt_c1}) {
        std::optional<std::map<std::string, ledger::OpCount>> first;
        for (std::size_t beta = 10; beta <= 100; beta += 10) {
            sim::Scenario sc;
            sc.seed = 900 + beta;
            sc.universe = universe;
            sc.users = {algebra::AttributeSet(universe.begin(), universe.end()), {}};
            sc.policy = test_util::and_policy(universe, beta).to_string();
            sc.message = "constant-size message";
            sc.strategy = strategy;
            auto rep = sim::run_scenario<group::MockWide>(sc);
            if (!first)
                first = rep.ledger_ops;
            else if (rep.ledger_ops != *first)
                ok = false;
        }
        std::size_t calls = 0;
        for (const auto& [_, c] : *first) calls += c.calls;
        detail += std::string(detail.empty() ? "" : "; ") + to_string(strategy) + " flow: " + std::to_string(calls) +
                  " calls over " + std::to_string(first->size()) + " functions, identical for beta 10..100";
        if (!ok) detail += " (MISMATCH)";
    }
    return {ok, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"constant final-decryption cost", constant_decrypt_time},
        {"constant transform-ciphertext size", constant_transform_size},
        {"one-exponentiation decryption", one_exponentiation},
        {"correctness at desk scale", correctness_traces},
        {"verifiability", verifiability},
        {"exemptibility", exemptibility},
        {"fairness", fairness},
        {"mock-backend oracle equivalence", mock_oracle},
        {"constant ledger op counters", constant_ledger_ops},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        auto t0 = std::chrono::steady_clock::now();
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("CRITERION %zu %s: %s -- %s [%.1fs]\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first,
                    v.detail.c_str(), secs);
        std::fflush(stdout);
        if (!v.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
