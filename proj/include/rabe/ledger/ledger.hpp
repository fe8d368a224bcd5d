#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rabe/bytes.hpp"
#include "rabe/hash.hpp"

// Simulated contract: registration-state log, ciphertext tags, and escrowed
// outsourced-decryption tasks with a challenge window. Calls never throw for
// protocol violations; they return a rejected receipt and are still logged.
namespace rabe::ledger {

using Account = std::string;
using TaskId = std::uint64_t;

enum class TaskStatus { open, submitted, challenged, resolved_paid, resolved_refunded };

inline const char* status_name(TaskStatus s) {
    switch (s) {
        case TaskStatus::open: return "open";
        case TaskStatus::submitted: return "submitted";
        case TaskStatus::challenged: return "challenged";
        case TaskStatus::resolved_paid: return "resolved-paid";
        case TaskStatus::resolved_refunded: return "resolved-refunded";
    }
    return "?";
}

inline bool is_resolved(TaskStatus s) { return s == TaskStatus::resolved_paid || s == TaskStatus::resolved_refunded; }

struct TaskRecord {
    TaskId id = 0;
    Account creator;
    Digest ciphertext_id{};
    std::uint64_t reward = 0;
    TaskStatus status = TaskStatus::open;
    std::uint64_t created_block = 0;
    Bytes result;
    Account solver;
    std::uint64_t submit_block = 0;
    Bytes proof;
    std::optional<int> verdict;
};

struct StateEntry {
    std::uint64_t ctr;
    Digest pk_digest;
    Digest aux_digest;
};

struct Event {
    std::uint64_t seq;
    std::uint64_t block;
    Account caller;
    std::string function;
    Digest args_digest;
    std::string outcome;  // "ok" or "rejected: <reason>"

    nlohmann::json to_json() const {
        return {{"seq", seq},           {"block", block},
                {"caller", caller},     {"function", function},
                {"args", to_hex(args_digest)}, {"outcome", outcome}};
    }
};

struct Receipt {
    bool ok = false;
    std::string error;
    std::uint64_t value = 0;  // task id for create_task, height for advance_block

    explicit operator bool() const { return ok; }
};

// Gas stand-in, per function.
struct OpCount {
    std::uint64_t calls = 0;
    std::uint64_t storage_writes = 0;
    std::uint64_t bytes_written = 0;
    std::uint64_t transfers = 0;

    friend bool operator==(const OpCount&, const OpCount&) = default;
};

struct LedgerConfig {
    std::uint64_t window = 10;
    Account verifier = "pv";
    Account curator = "kc";
};

class Ledger {
public:
    explicit Ledger(LedgerConfig cfg = {}, std::map<Account, std::uint64_t> genesis = {})
        : cfg_(std::move(cfg)), balances_(std::move(genesis)) {
        for (const auto& [_, v] : balances_) supply_ += v;
    }

    // --- contract functions ----------------------------------------------

    Receipt publish_state(const Account& caller, std::uint64_t ctr, const Digest& pk_digest,
                          const Digest& aux_digest) {
        Call c(*this, caller, "publish_state", args().u64(ctr).raw(pk_digest).raw(aux_digest));
        if (caller != cfg_.curator) return c.reject("caller is not the key curator");
        const std::uint64_t expected = state_log_.empty() ? 1 : state_log_.back().ctr + 1;
        if (ctr != expected) return c.reject("non-consecutive counter");
        state_log_.push_back({ctr, pk_digest, aux_digest});
        c.write(8 + 64);
        return c.ok();
    }

    Receipt publish_tag(const Account& caller, const Digest& ciphertext_id, ByteView tag) {
        Call c(*this, caller, "publish_tag", args().raw(ciphertext_id).blob(tag));
        if (tag.size() != 32) return c.reject("tag must be 32 bytes");
        if (tag_log_.contains(ciphertext_id)) return c.reject("tag already published");
        Digest t{};
        std::copy(tag.begin(), tag.end(), t.begin());
        tag_log_.emplace(ciphertext_id, t);
        c.write(64);
        return c.ok();
    }

    Receipt create_task(const Account& caller, const Digest& ciphertext_id, std::uint64_t reward) {
        Call c(*this, caller, "create_task", args().raw(ciphertext_id).u64(reward));
        if (!tag_log_.contains(ciphertext_id)) return c.reject("unknown ciphertext");
        if (reward == 0) return c.reject("reward must be positive");
        auto it = balances_.find(caller);
        if (it == balances_.end() || it->second < reward) return c.reject("insufficient balance");
        it->second -= reward;
        escrow_ += reward;
        c.transfer();
        TaskRecord t;
        t.id = next_task_++;
        t.creator = caller;
        t.ciphertext_id = ciphertext_id;
        t.reward = reward;
        t.created_block = height_;
        tasks_.emplace(t.id, std::move(t));
        c.write(8 + 32 + 8 + 8);
        return c.ok(next_task_ - 1);
    }

    Receipt submit_result(const Account& caller, TaskId id, ByteView result) {
        Call c(*this, caller, "submit_result", args().u64(id).blob(result));
        auto* t = find(id);
        if (t == nullptr) return c.reject("unknown task");
        if (t->status != TaskStatus::open) return c.reject("task is not open");
        t->status = TaskStatus::submitted;
        t->result.assign(result.begin(), result.end());
        t->solver = caller;
        t->submit_block = height_;
        c.write(result.size() + 8);
        return c.ok();
    }

    Receipt claim_reward(const Account& caller, TaskId id) {
        Call c(*this, caller, "claim_reward", args().u64(id));
        auto* t = find(id);
        if (t == nullptr) return c.reject("unknown task");
        if (t->status != TaskStatus::submitted) return c.reject("task is not awaiting payout");
        if (caller != t->solver) return c.reject("caller is not the solver");
        if (height_ < t->submit_block + cfg_.window) return c.reject("challenge window still open");
        pay(*t, t->solver, TaskStatus::resolved_paid, c);
        return c.ok();
    }

    Receipt publish_fraud_proof(const Account& caller, TaskId id, ByteView proof) {
        Call c(*this, caller, "publish_fraud_proof", args().u64(id).blob(proof));
        auto* t = find(id);
        if (t == nullptr) return c.reject("unknown task");
        if (t->status != TaskStatus::submitted) return c.reject("task has no pending result");
        if (caller != t->creator) return c.reject("caller is not the task creator");
        if (height_ >= t->submit_block + cfg_.window) return c.reject("challenge window closed");
        t->status = TaskStatus::challenged;
        t->proof.assign(proof.begin(), proof.end());
        c.write(proof.size());
        return c.ok();
    }

    Receipt publish_verification_result(const Account& caller, TaskId id, int verdict) {
        Call c(*this, caller, "publish_verification_result", args().u64(id).u8(static_cast<std::uint8_t>(verdict)));
        if (caller != cfg_.verifier) return c.reject("caller is not the public verifier");
        if (verdict != 0 && verdict != 1) return c.reject("verdict must be 0 or 1");
        auto* t = find(id);
        if (t == nullptr) return c.reject("unknown task");
        if (t->status != TaskStatus::challenged) return c.reject("task is not challenged");
        t->verdict = verdict;
        if (verdict == 1)
            pay(*t, t->creator, TaskStatus::resolved_refunded, c);
        else
            pay(*t, t->solver, TaskStatus::resolved_paid, c);
        return c.ok();
    }

    // Extension: reclaim the escrow of a task nobody solved.
    Receipt cancel_task(const Account& caller, TaskId id) {
        Call c(*this, caller, "cancel_task", args().u64(id));
        auto* t = find(id);
        if (t == nullptr) return c.reject("unknown task");
        if (t->status != TaskStatus::open) return c.reject("task is not open");
        if (caller != t->creator) return c.reject("caller is not the task creator");
        if (height_ < t->created_block + 2 * cfg_.window) return c.reject("cancellation not yet allowed");
        pay(*t, t->creator, TaskStatus::resolved_refunded, c);
        return c.ok();
    }

    Receipt advance_block(const Account& caller, std::uint64_t n) {
        Call c(*this, caller, "advance_block", args().u64(n));
        if (n == 0) return c.reject("must advance by at least one block");
        height_ += n;
        return c.ok(height_);
    }

    // --- views -----------------------------------------------------------

    std::uint64_t height() const { return height_; }
    std::uint64_t window() const { return cfg_.window; }
    const LedgerConfig& config() const { return cfg_; }
    std::uint64_t balance(const Account& a) const {
        auto it = balances_.find(a);
        return it == balances_.end() ? 0 : it->second;
    }
    const std::map<Account, std::uint64_t>& balances() const { return balances_; }
    std::uint64_t escrow() const { return escrow_; }
    std::uint64_t supply() const { return supply_; }
    bool conserved() const {
        std::uint64_t total = escrow_;
        for (const auto& [_, v] : balances_) total += v;
        return total == supply_;
    }
    const TaskRecord* task(TaskId id) const {
        auto it = tasks_.find(id);
        return it == tasks_.end() ? nullptr : &it->second;
    }
    const std::map<TaskId, TaskRecord>& tasks() const { return tasks_; }
    const std::vector<StateEntry>& state_log() const { return state_log_; }
    std::optional<Digest> tag(const Digest& ciphertext_id) const {
        auto it = tag_log_.find(ciphertext_id);
        if (it == tag_log_.end()) return std::nullopt;
        return it->second;
    }
    const std::vector<Event>& events() const { return events_; }
    const std::map<std::string, OpCount>& op_counts() const { return ops_; }

    std::string events_jsonl() const {
        std::string out;
        for (const auto& e : events_) out += e.to_json().dump() + "\n";
        return out;
    }
    Digest event_digest() const { return sha256(as_bytes(events_jsonl())); }

private:
    // Argument encoder for the event digest.
    struct Args {
        Writer w;
        Args& u8(std::uint8_t v) { w.u8(v); return *this; }
        Args& u64(std::uint64_t v) { w.u64(v); return *this; }
        Args& raw(ByteView b) { w.raw(b); return *this; }
        Args& blob(ByteView b) { w.blob(b); return *this; }
    };
    static Args args() { return {}; }

    // One contract invocation: counts it, and logs exactly one event.
    class Call {
    public:
        Call(Ledger& l, const Account& caller, const char* fn, Args& a)
            : l_(l), caller_(caller), fn_(fn), digest_(sha256(a.w.bytes())) {
            l_.ops_[fn_].calls++;
        }
        void write(std::size_t bytes) {
            l_.ops_[fn_].storage_writes++;
            l_.ops_[fn_].bytes_written += bytes;
        }
        void transfer() { l_.ops_[fn_].transfers++; }
        Receipt ok(std::uint64_t value = 0) {
            log("ok");
            return {true, {}, value};
        }
        Receipt reject(std::string why) {
            log("rejected: " + why);
            return {false, std::move(why), 0};
        }

    private:
        void log(std::string outcome) {
            l_.events_.push_back({l_.events_.size(), l_.height_, caller_, fn_, digest_, std::move(outcome)});
        }
        Ledger& l_;
        Account caller_;
        std::string fn_;
        Digest digest_;
    };

    TaskRecord* find(TaskId id) {
        auto it = tasks_.find(id);
        return it == tasks_.end() ? nullptr : &it->second;
    }

    void pay(TaskRecord& t, const Account& to, TaskStatus final_status, Call& c) {
        escrow_ -= t.reward;
        balances_[to] += t.reward;
        t.status = final_status;
        c.transfer();
        c.write(8);
    }

    LedgerConfig cfg_;
    std::map<Account, std::uint64_t> balances_;
    std::uint64_t supply_ = 0;
    std::uint64_t escrow_ = 0;
    std::uint64_t height_ = 0;
    TaskId next_task_ = 1;
    std::map<TaskId, TaskRecord> tasks_;
    std::vector<StateEntry> state_log_;
    std::map<Digest, Digest> tag_log_;
    std::vector<Event> events_;
    std::map<std::string, OpCount> ops_;
};

}  // namespace rabe::ledger
