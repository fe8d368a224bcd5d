#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rabe/algebra/policy.hpp"
#include "rabe/group/counters.hpp"
#include "rabe/ledger/ledger.hpp"

namespace rabe::sim {

enum class DcsStrategy { honest, corrupt_c1, corrupt_c2, garbage };

// How the data user behaves when the result it got is actually correct.
// Anything but `honest` is an attempted false accusation.
enum class DuMode { honest, challenge_anyway, forged_vk, malformed_proof };

enum class Outcome { delivered, refunded, solver_paid_despite_challenge, cancelled };

inline const char* to_string(DcsStrategy s) {
    switch (s) {
        case DcsStrategy::honest: return "honest";
        case DcsStrategy::corrupt_c1: return "corrupt-C1";
        case DcsStrategy::corrupt_c2: return "corrupt-C2";
        case DcsStrategy::garbage: return "garbage";
    }
    return "?";
}

inline const char* to_string(DuMode m) {
    switch (m) {
        case DuMode::honest: return "honest";
        case DuMode::challenge_anyway: return "challenge-anyway";
        case DuMode::forged_vk: return "forged-vk";
        case DuMode::malformed_proof: return "malformed-proof";
    }
    return "?";
}

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::delivered: return "delivered";
        case Outcome::refunded: return "refunded";
        case Outcome::solver_paid_despite_challenge: return "solver-paid-despite-challenge";
        case Outcome::cancelled: return "cancelled";
    }
    return "?";
}

inline DcsStrategy parse_strategy(std::string_view s) {
    for (auto v : {DcsStrategy::honest, DcsStrategy::corrupt_c1, DcsStrategy::corrupt_c2, DcsStrategy::garbage})
        if (s == to_string(v)) return v;
    throw Error("unknown DCS strategy '" + std::string(s) + "'");
}

inline DuMode parse_du_mode(std::string_view s) {
    for (auto v : {DuMode::honest, DuMode::challenge_anyway, DuMode::forged_vk, DuMode::malformed_proof})
        if (s == to_string(v)) return v;
    throw Error("unknown DU mode '" + std::string(s) + "'");
}

struct Scenario {
    std::uint64_t seed = 1;
    std::optional<std::size_t> levels;  // default: smallest l with 2^l >= users
    std::vector<std::string> universe;
    std::vector<algebra::AttributeSet> users;
    std::string policy;
    std::string message = "hello";
    std::size_t reader = 1;  // 1-based user acting as DU
    DcsStrategy strategy = DcsStrategy::honest;
    DuMode du_mode = DuMode::honest;
    std::uint64_t reward = 10;
    std::uint64_t window = 10;
    std::uint64_t du_funds = 100;

    std::size_t effective_levels() const {
        if (levels) return *levels;
        std::size_t l = 0;
        while ((std::size_t{1} << l) < users.size()) ++l;
        return l;
    }

    void validate() const {
        if (users.empty()) throw Error("scenario has no users");
        if (universe.empty()) throw Error("scenario has an empty universe");
        if ((std::size_t{1} << effective_levels()) < users.size()) throw Error("more users than 2^l");
        if (reader < 1 || reader > users.size()) throw Error("reader must name a registered user");
        if (window == 0) throw Error("window must be positive");
        if (reward == 0 || reward > du_funds) throw Error("reward must be in 1..funds");
        auto p = algebra::Policy::parse(policy);
        for (const auto& a : p.leaves())
            if (std::find(universe.begin(), universe.end(), a) == universe.end())
                throw Error("policy attribute '" + a + "' is not in the universe");
        for (const auto& u : users)
            for (const auto& a : u)
                if (std::find(universe.begin(), universe.end(), a) == universe.end())
                    throw Error("user attribute '" + a + "' is not in the universe");
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        auto item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::uint64_t parse_u64(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        auto x = std::stoull(v, &pos);
        if (pos != v.size()) throw Error("");
        return x;
    } catch (...) {
        throw Error("bad integer for '" + key + "': " + v);
    }
}

}  // namespace detail

// Line-based "key = value" config; '#' starts a comment. Repeated `user`
// lines add users in registration order.
inline Scenario parse_scenario(std::string_view text) {
    Scenario sc;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        auto body = detail::trim(line);
        if (body.empty()) continue;
        auto eq = body.find('=');
        if (eq == std::string::npos) throw Error("line " + std::to_string(lineno) + ": expected key = value");
        auto key = detail::trim(std::string_view(body).substr(0, eq));
        auto value = detail::trim(std::string_view(body).substr(eq + 1));
        if (key == "seed") sc.seed = detail::parse_u64(value, key);
        else if (key == "levels") sc.levels = detail::parse_u64(value, key);
        else if (key == "universe") sc.universe = detail::split_list(value);
        else if (key == "user") {
            auto xs = detail::split_list(value);
            sc.users.emplace_back(xs.begin(), xs.end());
        } else if (key == "policy") sc.policy = value;
        else if (key == "message") sc.message = value;
        else if (key == "reader") sc.reader = detail::parse_u64(value, key);
        else if (key == "strategy") sc.strategy = parse_strategy(value);
        else if (key == "du") sc.du_mode = parse_du_mode(value);
        else if (key == "reward") sc.reward = detail::parse_u64(value, key);
        else if (key == "window") sc.window = detail::parse_u64(value, key);
        else if (key == "funds") sc.du_funds = detail::parse_u64(value, key);
        else throw Error("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    sc.validate();
    return sc;
}

struct ScenarioReport {
    Outcome outcome = Outcome::cancelled;
    bool submitted = false;
    bool result_correct = false;  // the stored result decrypts to the message
    bool message_recovered = false;
    bool challenged = false;
    std::optional<int> verdict;
    bool solver_paid = false;
    bool conserved = false;
    bool audit_ok = false;
    std::map<ledger::Account, std::uint64_t> balances;
    std::string events_jsonl;
    Digest event_digest{};
    std::map<std::string, ledger::OpCount> ledger_ops;
    std::map<std::string, group::OpCounters> crypto_ops;  // per phase
    std::map<std::string, double> timings_ms;             // per phase

    bool fair() const { return solver_paid == (submitted && result_correct); }

    nlohmann::json to_json(bool with_timings = true) const {
        nlohmann::json j;
        j["outcome"] = to_string(outcome);
        j["submitted"] = submitted;
        j["result_correct"] = result_correct;
        j["message_recovered"] = message_recovered;
        j["challenged"] = challenged;
        j["verdict"] = verdict ? nlohmann::json(*verdict) : nlohmann::json(nullptr);
        j["solver_paid"] = solver_paid;
        j["fair"] = fair();
        j["conserved"] = conserved;
        j["audit_ok"] = audit_ok;
        j["balances"] = balances;
        j["event_digest"] = to_hex(event_digest);
        auto& ops = j["ledger_ops"];
        ops = nlohmann::json::object();
        for (const auto& [fn, c] : ledger_ops)
            ops[fn] = {{"calls", c.calls},
                       {"storage_writes", c.storage_writes},
                       {"bytes_written", c.bytes_written},
                       {"transfers", c.transfers}};
        auto& crypto = j["crypto_ops"];
        crypto = nlohmann::json::object();
        for (const auto& [phase, c] : crypto_ops)
            crypto[phase] = {{"pairings", c.pairings}, {"g_exp", c.g_exp}, {"gt_exp", c.gt_exp},
                             {"g_mul", c.g_mul},       {"gt_mul", c.gt_mul}};
        if (with_timings) j["timings_ms"] = timings_ms;
        std::vector<nlohmann::json> events;
        std::istringstream in(events_jsonl);
        for (std::string line; std::getline(in, line);)
            if (!line.empty()) events.push_back(nlohmann::json::parse(line));
        j["events"] = events;
        return j;
    }
};

}  // namespace rabe::sim
