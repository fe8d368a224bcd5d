#pragma once

#include <chrono>

#include "rabe/fraud/codec.hpp"
#include "rabe/registered/codec.hpp"
#include "rabe/sim/scenario.hpp"
#include "rabe/sim/store.hpp"

// Deterministic end-to-end protocol runs: KC, DO, DU, DCS and PV acting on a
// shared ledger and content store. One seeded generator drives everything.
namespace rabe::sim {

// On-ledger tag for a multi-instance ciphertext: a commitment to the
// per-instance verifiable tags (absent instances contribute an empty input).
template <group::PairingBackend B>
Digest tag_commitment(const registered::MultiCiphertext<B>& ct) {
    Transcript t("rabe/ct-tags");
    for (const auto& sub : ct.instances) {
        if (sub)
            t.add(sub->tag);
        else
            t.add(ByteView{});
    }
    return t.digest256();
}

// Public verifier rule on raw ledger bytes. Undecodable result: 1 (a
// malformed result cannot be correct). Undecodable proof: 0.
template <group::PairingBackend B>
int pv_verdict(ByteView result, ByteView proof, const registered::MultiCiphertext<B>& ct,
               const registered::UserPublicKey<B>& pk) {
    std::optional<registered::FullTransform<B>> ft;
    try {
        ft = from_artifact<registered::FullTransform<B>>(result);
    } catch (const Error&) {
        return 1;
    }
    std::optional<fraud::FraudProof<B>> pi;
    try {
        pi = from_artifact<fraud::FraudProof<B>>(proof);
    } catch (const Error&) {
        return 0;
    }
    return fraud::fraud_verify(*pi, *ft, ct, pk) ? 1 : 0;
}

template <group::PairingBackend B>
class ScenarioRun {
public:
    explicit ScenarioRun(const Scenario& sc) : sc_(sc), rng_(sc.seed), ledger_(config(sc), genesis(sc)) {
        sc_.validate();
    }

    ScenarioReport run() {
        register_users();
        publish_ciphertext();
        create_task();
        solve();
        if (report_.submitted) {
            read_result();
            if (report_.message_recovered && sc_.du_mode == DuMode::honest)
                accept();
            else
                dispute();
        } else {
            timeout();
        }
        finish();
        return std::move(report_);
    }

    static std::string user_account(std::size_t j) { return "du" + std::to_string(j); }

private:
    static ledger::LedgerConfig config(const Scenario& sc) { return {sc.window, "pv", "kc"}; }
    static std::map<ledger::Account, std::uint64_t> genesis(const Scenario& sc) {
        std::map<ledger::Account, std::uint64_t> g{{"dcs", 0}};
        for (std::size_t j = 1; j <= sc.users.size(); ++j) g[user_account(j)] = sc.du_funds;
        return g;
    }

    template <class F>
    void phase(const std::string& name, F&& f) {
        group::CounterScope scope;
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto dt = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        report_.timings_ms[name] += dt;
        auto d = scope.delta();
        auto& acc = report_.crypto_ops[name];
        acc.pairings += d.pairings;
        acc.g_exp += d.g_exp;
        acc.gt_exp += d.gt_exp;
        acc.g_mul += d.g_mul;
        acc.gt_mul += d.gt_mul;
    }

    static void require(bool ok, const std::string& step, const ledger::Receipt& r = {true, {}, 0}) {
        if (!ok) throw Error("scenario step '" + step + "' failed" + (r.error.empty() ? "" : ": " + r.error));
    }

    // Steps 1-2: keygen, registration, aux snapshot, PublishState.
    void register_users() {
        phase("registration", [&] {
            crs_ = registered::setup<B>(sc_.effective_levels(), sc_.universe, rng_);
            aux_ = registered::initial_aux(*crs_);
            for (std::size_t j = 1; j <= sc_.users.size(); ++j) {
                auto keys = registered::keygen(*crs_, *aux_, rng_);
                auto pk_digest = store_.put(to_artifact(keys.pk));
                registered::register_user(*crs_, *aux_, keys.pk, sc_.users[j - 1]);
                auto aux_digest = store_.put(to_artifact(*aux_));
                auto r = ledger_.publish_state("kc", aux_->ctr, pk_digest, aux_digest);
                require(r.ok, "publish_state", r);
                registry_[user_account(j)] = aux_->ctr;
                keys_.push_back(std::move(keys));
            }
        });
    }

    // Step 3: DO encrypts, uploads, PublishTag.
    void publish_ciphertext() {
        phase("encrypt", [&] {
            auto ct = registered::encrypt(aux_->mpk, algebra::Policy::parse(sc_.policy), as_bytes(sc_.message), rng_);
            cid_ = store_.put(to_artifact(ct));
            auto commitment = tag_commitment(ct);
            auto r = ledger_.publish_tag("do", cid_, commitment);
            require(r.ok, "publish_tag", r);
        });
    }

    void create_task() {
        auto r = ledger_.create_task(du(), cid_, sc_.reward);
        require(r.ok, "create_task", r);
        task_ = r.value;
    }

    // Public lookups any party can do: ciphertext by id (checked against the
    // on-ledger tag), a user's pk through the published state log.
    registered::MultiCiphertext<B> fetch_ciphertext() const {
        auto bytes = store_.get(cid_);
        require(bytes.has_value(), "fetch ciphertext");
        auto ct = from_artifact<registered::MultiCiphertext<B>>(*bytes);
        require(ledger_.tag(cid_) == tag_commitment(ct), "ciphertext tag check");
        return ct;
    }

    registered::UserPublicKey<B> fetch_public_key(const ledger::Account& who) const {
        auto idx = registry_.at(who);
        const auto& entry = ledger_.state_log().at(idx - 1);
        auto bytes = store_.get(entry.pk_digest);
        require(bytes.has_value(), "fetch public key");
        return from_artifact<registered::UserPublicKey<B>>(*bytes);
    }

    // Step 4: DCS transforms and submits (first submission wins).
    void solve() {
        phase("transform", [&] {
            auto ct = fetch_ciphertext();
            auto pk = fetch_public_key(du());
            auto bundle = registered::update(*crs_, *aux_, pk);
            require(bundle.has_value(), "update");
            auto out = registered::transform_full(*bundle, ct);
            if (out.status != registered::TransformStatus::ok) return;
            auto ft = *out.result;
            Bytes result;
            switch (sc_.strategy) {
                case DcsStrategy::honest: result = to_artifact(ft); break;
                case DcsStrategy::corrupt_c1:
                    ft.ct.c1 = ft.ct.c1 * B::gt_generator().pow(B::Scalar::random_nonzero(rng_));
                    result = to_artifact(ft);
                    break;
                case DcsStrategy::corrupt_c2:
                    ft.ct.c2 = ft.ct.c2 * B::gt_generator().pow(B::Scalar::random_nonzero(rng_));
                    result = to_artifact(ft);
                    break;
                case DcsStrategy::garbage: result = rng_.bytes(1 + rng_.uniform(200)); break;
            }
            auto r = ledger_.submit_result("dcs", task_, result);
            require(r.ok, "submit_result", r);
            report_.submitted = true;
        });
    }

    // Step 5: DU fetches the result and decrypts locally.
    void read_result() {
        phase("decrypt", [&] {
            const auto& bytes = ledger_.task(task_)->result;
            try {
                ft_ = from_artifact<registered::FullTransform<B>>(bytes);
            } catch (const Error&) {
                return;
            }
            auto ct = fetch_ciphertext();
            std::optional<Bytes> m;
            try {
                m = registered::decrypt(keys_[sc_.reader - 1].sk, *ft_, ct);
            } catch (const IntegrityError&) {
            }
            report_.message_recovered = m && std::ranges::equal(*m, as_bytes(sc_.message));
        });
        report_.result_correct = report_.message_recovered;
    }

    // Steps 6-8 (happy case): window passes, DCS claims.
    void accept() {
        ledger_.advance_block("dcs", sc_.window);
        auto r = ledger_.claim_reward("dcs", task_);
        require(r.ok, "claim_reward", r);
    }

    // Dispute: DU publishes a fraud proof in the window, PV rules.
    void dispute() {
        Bytes proof;
        phase("dispute", [&] {
            const auto& sk = keys_[sc_.reader - 1].sk;
            const auto& pk = keys_[sc_.reader - 1].pk;
            const bool lying = report_.message_recovered;
            if (!ft_) return;  // undecodable result: any bytes will do
            if (lying && sc_.du_mode == DuMode::malformed_proof) {
                proof = rng_.bytes(40);
                return;
            }
            auto pi = fraud::fraud_prove(sk, pk, *ft_, rng_);
            if (lying && sc_.du_mode == DuMode::forged_vk) pi.vk = B::gt_generator().pow(B::Scalar::random(rng_));
            proof = to_artifact(pi);
        });
        auto r = ledger_.publish_fraud_proof(du(), task_, proof);
        require(r.ok, "publish_fraud_proof", r);
        report_.challenged = true;

        int verdict = 0;
        phase("verify", [&] {
            const auto* t = ledger_.task(task_);
            verdict = pv_verdict<B>(t->result, t->proof, fetch_ciphertext(), fetch_public_key(t->creator));
        });
        r = ledger_.publish_verification_result("pv", task_, verdict);
        require(r.ok, "publish_verification_result", r);
        report_.verdict = verdict;
        ledger_.advance_block("pv", sc_.window);
    }

    // No satisfying helper key: nobody submits; DU reclaims after 2 windows.
    void timeout() {
        ledger_.advance_block(du(), 2 * sc_.window);
        auto r = ledger_.cancel_task(du(), task_);
        require(r.ok, "cancel_task", r);
    }

    void finish() {
        const auto* t = ledger_.task(task_);
        require(ledger::is_resolved(t->status), "task resolution");
        report_.solver_paid = t->status == ledger::TaskStatus::resolved_paid;
        if (report_.solver_paid)
            report_.outcome = report_.challenged ? Outcome::solver_paid_despite_challenge : Outcome::delivered;
        else
            report_.outcome = report_.challenged ? Outcome::refunded : Outcome::cancelled;
        report_.conserved = ledger_.conserved();
        report_.audit_ok = audit();
        report_.balances = ledger_.balances();
        report_.events_jsonl = ledger_.events_jsonl();
        report_.event_digest = ledger_.event_digest();
        report_.ledger_ops = ledger_.op_counts();
    }

    // Every published state digest resolves to a snapshot that hashes back to
    // it and carries the published counter; the last one is the live aux.
    bool audit() const {
        const auto& log = ledger_.state_log();
        if (log.size() != sc_.users.size()) return false;
        for (const auto& entry : log) {
            auto aux_bytes = store_.get(entry.aux_digest);
            auto pk_bytes = store_.get(entry.pk_digest);
            if (!aux_bytes || !pk_bytes || sha256(*aux_bytes) != entry.aux_digest) return false;
            try {
                auto aux = from_artifact<registered::AuxState<B>>(*aux_bytes);
                auto pk = from_artifact<registered::UserPublicKey<B>>(*pk_bytes);
                if (aux.ctr != entry.ctr || pk.ctr + 1 != entry.ctr) return false;
            } catch (const Error&) {
                return false;
            }
        }
        return sha256(to_artifact(*aux_)) == log.back().aux_digest;
    }

    ledger::Account du() const { return user_account(sc_.reader); }

    Scenario sc_;
    Drbg rng_;
    ledger::Ledger ledger_;
    ContentStore store_;
    std::optional<registered::MultiCrs<B>> crs_;
    std::optional<registered::AuxState<B>> aux_;
    std::vector<registered::UserKeys<B>> keys_;
    std::map<ledger::Account, std::uint64_t> registry_;
    Digest cid_{};
    ledger::TaskId task_ = 0;
    std::optional<registered::FullTransform<B>> ft_;
    ScenarioReport report_;
};

template <group::PairingBackend B>
ScenarioReport run_scenario(const Scenario& sc) {
    return ScenarioRun<B>(sc).run();
}

// Both drivers run the same pipeline; the names mirror the two protocol
// flows. The dispute driver requires a deviating party.
template <group::PairingBackend B>
ScenarioReport run_happy_case(const Scenario& sc) {
    if (sc.strategy != DcsStrategy::honest || sc.du_mode != DuMode::honest)
        throw Error("happy case needs an honest DCS and DU");
    return run_scenario<B>(sc);
}

template <group::PairingBackend B>
ScenarioReport run_dispute_case(const Scenario& sc) {
    if (sc.strategy == DcsStrategy::honest && sc.du_mode == DuMode::honest)
        throw Error("dispute case needs a misbehaving DCS or DU");
    return run_scenario<B>(sc);
}

// ---------------------------------------------------------------------------

inline Scenario random_scenario(Drbg& rng, std::size_t max_levels) {
    Scenario sc;
    sc.seed = rng.next_u64();
    const std::size_t levels = rng.uniform(max_levels + 1);
    sc.levels = levels;
    sc.universe = {"a0", "a1", "a2", "a3", "a4"};
    const auto n = 1 + rng.uniform(std::uint64_t{1} << levels);
    for (std::uint64_t j = 0; j < n; ++j) {
        algebra::AttributeSet s;
        for (const auto& a : sc.universe)
            if (rng.uniform(3) != 0) s.insert(a);
        sc.users.push_back(s);
    }
    sc.reader = 1 + rng.uniform(n);
    // Mostly policies the reader satisfies, so disputes are exercised.
    const auto& mine = sc.users[sc.reader - 1];
    std::vector<std::string> pool = rng.uniform(5) != 0 && !mine.empty()
                                        ? std::vector<std::string>(mine.begin(), mine.end())
                                        : sc.universe;
    auto pick = [&] { return pool[rng.uniform(pool.size())]; };
    sc.policy = pick();
    for (auto extra = rng.uniform(3); extra > 0; --extra) sc.policy += (rng.coin() ? " and " : " or ") + pick();
    sc.message = to_hex(rng.bytes(1 + rng.uniform(24)));
    sc.strategy = static_cast<DcsStrategy>(rng.uniform(4));
    sc.du_mode = static_cast<DuMode>(rng.uniform(4));
    sc.window = 1 + rng.uniform(12);
    sc.du_funds = 50 + rng.uniform(100);
    sc.reward = 1 + rng.uniform(sc.du_funds);
    return sc;
}

struct FuzzSummary {
    std::size_t traces = 0;
    std::map<std::string, std::size_t> outcomes;
    std::size_t fairness_violations = 0;
    std::size_t conservation_violations = 0;
    std::size_t audit_failures = 0;
    std::size_t false_accusations = 0;  // verdict 1 against a correct result
    std::size_t missed_frauds = 0;      // incorrect result, solver paid
    Digest digest{};

    bool clean() const {
        return fairness_violations == 0 && conservation_violations == 0 && audit_failures == 0 &&
               false_accusations == 0 && missed_frauds == 0;
    }

    nlohmann::json to_json() const {
        return {{"traces", traces},
                {"outcomes", outcomes},
                {"fairness_violations", fairness_violations},
                {"conservation_violations", conservation_violations},
                {"audit_failures", audit_failures},
                {"false_accusations", false_accusations},
                {"missed_frauds", missed_frauds},
                {"digest", to_hex(digest)}};
    }
};

template <group::PairingBackend B>
FuzzSummary fuzz_traces(std::size_t n, std::uint64_t seed, std::size_t max_levels = 2) {
    Drbg rng(seed);
    FuzzSummary s;
    Transcript digest("rabe/fuzz");
    for (std::size_t i = 0; i < n; ++i) {
        auto sc = random_scenario(rng, max_levels);
        auto rep = run_scenario<B>(sc);
        ++s.traces;
        ++s.outcomes[to_string(rep.outcome)];
        if (!rep.fair()) ++s.fairness_violations;
        if (!rep.conserved) ++s.conservation_violations;
        if (!rep.audit_ok) ++s.audit_failures;
        if (rep.result_correct && rep.verdict == 1) ++s.false_accusations;
        if (rep.submitted && !rep.result_correct && rep.solver_paid) ++s.missed_frauds;
        digest.add(rep.event_digest);
    }
    s.digest = digest.digest256();
    return s;
}

}  // namespace rabe::sim
