#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "rabe/slotted/scheme.hpp"

// Full registered scheme from l+1 slotted instances; instance k has 2^k slots.
// User counters are 0-based stamps (the aux counter at keygen); "user u" in
// Dict2 keys is the 1-based registration order, u = stamp + 1.
namespace rabe::registered {

using slotted::AttributeSet;
using slotted::Policy;

inline std::uint64_t instance_slots(std::size_t k) { return std::uint64_t{1} << k; }

// i_k = (ctr mod 2^k) + 1
inline std::size_t slot_index(std::uint64_t ctr, std::size_t k) {
    return static_cast<std::size_t>(ctr % instance_slots(k)) + 1;
}

// Registration count at which the batch holding user u (1-based) in instance k
// was aggregated.
inline std::uint64_t helper_epoch(std::uint64_t user, std::size_t k) {
    const auto n = instance_slots(k);
    return (user + n - 1) / n * n;
}

// Batch that mpk_k reflects after ctr registrations (0 = none yet).
inline std::uint64_t public_epoch(std::uint64_t ctr, std::size_t k) {
    const auto n = instance_slots(k);
    return ctr / n * n;
}

template <group::PairingBackend B>
struct MultiCrs {
    std::vector<slotted::Crs<B>> instances;

    std::size_t levels() const { return instances.size() - 1; }
    std::uint64_t capacity() const { return instance_slots(levels()); }
    const std::vector<std::string>& universe() const { return instances.front().universe; }
};

template <group::PairingBackend B>
struct MultiMasterPublicKey {
    std::uint64_t ctr = 0;
    std::vector<std::optional<slotted::MasterPublicKey<B>>> instances;

    friend bool operator==(const MultiMasterPublicKey&, const MultiMasterPublicKey&) = default;
};

template <group::PairingBackend B>
struct UserPublicKey {
    std::uint64_t ctr = 0;
    std::vector<slotted::PublicKey<B>> instances;

    friend bool operator==(const UserPublicKey&, const UserPublicKey&) = default;
};

template <group::PairingBackend B>
struct UserSecretKey {
    std::uint64_t ctr = 0;
    std::vector<slotted::SecretKey<B>> instances;
};

template <group::PairingBackend B>
struct UserKeys {
    UserPublicKey<B> pk;
    UserSecretKey<B> sk;
};

// Output of update: the user's Dict2 rows. aux_ctr records the registration
// count the lookup ran against.
template <group::PairingBackend B>
struct HelperBundle {
    std::uint64_t user_ctr = 0;
    std::uint64_t aux_ctr = 0;
    std::vector<std::optional<slotted::HelperKey<B>>> instances;

    friend bool operator==(const HelperBundle&, const HelperBundle&) = default;
};

template <group::PairingBackend B>
struct AuxState {
    std::uint64_t ctr = 0;
    std::map<std::pair<std::size_t, std::size_t>, slotted::Registration<B>> dict1;  // (k, slot)
    std::map<std::pair<std::uint64_t, std::size_t>, slotted::HelperKey<B>> dict2;   // (user, k)
    MultiMasterPublicKey<B> mpk;
};

template <group::PairingBackend B>
struct MultiCiphertext {
    std::uint64_t ctr = 0;
    std::vector<std::optional<slotted::Ciphertext<B>>> instances;
};

template <group::PairingBackend B>
struct FullTransform {
    std::size_t instance = 0;
    slotted::TransformCiphertext<B> ct;

    friend bool operator==(const FullTransform&, const FullTransform&) = default;
};

enum class TransformStatus { ok, unsatisfied, stale_helper_key };

template <group::PairingBackend B>
struct TransformOutcome {
    TransformStatus status = TransformStatus::unsatisfied;
    std::optional<FullTransform<B>> result;
};

// ---------------------------------------------------------------------------

template <group::PairingBackend B>
MultiCrs<B> setup(std::size_t levels, const std::vector<std::string>& universe, Drbg& rng) {
    if (levels > 20) throw SchemeError("too many instances");
    MultiCrs<B> crs;
    for (std::size_t k = 0; k <= levels; ++k) {
        auto sub = rng.fork("instance/" + std::to_string(k));
        crs.instances.push_back(slotted::setup<B>(instance_slots(k), universe, sub));
    }
    return crs;
}

template <group::PairingBackend B>
AuxState<B> initial_aux(const MultiCrs<B>& crs) {
    AuxState<B> aux;
    aux.mpk.instances.resize(crs.instances.size());
    return aux;
}

template <group::PairingBackend B>
UserKeys<B> keygen(const MultiCrs<B>& crs, const AuxState<B>& aux, Drbg& rng) {
    if (aux.ctr >= crs.capacity()) throw SchemeError("registration capacity exhausted");
    UserKeys<B> keys;
    keys.pk.ctr = keys.sk.ctr = aux.ctr;
    for (std::size_t k = 0; k < crs.instances.size(); ++k) {
        auto kp = slotted::keygen(crs.instances[k], slot_index(aux.ctr, k), rng);
        keys.pk.instances.push_back(std::move(kp.pk));
        keys.sk.instances.push_back(std::move(kp.sk));
    }
    return keys;
}

// RegPK. Mutates aux in place; callers wanting snapshots copy it first.
template <group::PairingBackend B>
const MultiMasterPublicKey<B>& register_user(const MultiCrs<B>& crs, AuxState<B>& aux, const UserPublicKey<B>& pk,
                                             const AttributeSet& attrs,
                                             slotted::KeyCheck check = slotted::KeyCheck::verify) {
    if (pk.ctr != aux.ctr) throw SchemeError("public key counter does not match registration state");
    if (aux.ctr >= crs.capacity()) throw SchemeError("registration capacity exhausted");
    if (pk.instances.size() != crs.instances.size()) throw SchemeError("public key has wrong number of instances");
    for (const auto& a : attrs)
        if (std::find(crs.universe().begin(), crs.universe().end(), a) == crs.universe().end())
            throw SchemeError("registered attribute '" + a + "' is not in the universe");
    for (std::size_t k = 0; k < crs.instances.size(); ++k) {
        const auto& sub = pk.instances[k];
        if (sub.slot != slot_index(aux.ctr, k) || sub.v.size() != instance_slots(k))
            throw SchemeError("public key slot layout does not match its counter");
        if (check == slotted::KeyCheck::verify && !slotted::public_key_consistent(crs.instances[k], sub))
            throw SchemeError("malformed public key for instance " + std::to_string(k));
    }

    for (std::size_t k = 0; k < crs.instances.size(); ++k) {
        const auto n = instance_slots(k);
        const auto i = slot_index(aux.ctr, k);
        aux.dict1.insert_or_assign({k, i}, slotted::Registration<B>{pk.instances[k], attrs});
        if (i != n) continue;

        std::vector<slotted::Registration<B>> regs;
        for (std::size_t j = 1; j <= n; ++j) regs.push_back(aux.dict1.at({k, j}));
        auto agg = slotted::register_keys<B>(crs.instances[k], regs, slotted::KeyCheck::skip);
        aux.mpk.instances[k] = std::move(agg.mpk);
        for (std::size_t j = 1; j <= n; ++j)
            aux.dict2.insert_or_assign({aux.ctr + j + 1 - n, k}, std::move(agg.helper_keys[j - 1]));
    }
    aux.mpk.ctr = ++aux.ctr;
    return aux.mpk;
}

template <group::PairingBackend B>
MultiCiphertext<B> encrypt(const MultiMasterPublicKey<B>& mpk, const Policy& policy, ByteView message, Drbg& rng) {
    MultiCiphertext<B> ct;
    ct.ctr = mpk.ctr;
    bool any = false;
    for (const auto& sub : mpk.instances) {
        if (sub) {
            ct.instances.push_back(slotted::encrypt(*sub, policy, message, rng));
            any = true;
        } else {
            ct.instances.push_back(std::nullopt);
        }
    }
    if (!any) throw SchemeError("no instance has been aggregated yet");
    return ct;
}

// Update; nullopt for a key that has not been registered.
template <group::PairingBackend B>
std::optional<HelperBundle<B>> update(const MultiCrs<B>& crs, const AuxState<B>& aux, const UserPublicKey<B>& pk) {
    if (pk.ctr >= aux.ctr) return std::nullopt;
    HelperBundle<B> out;
    out.user_ctr = pk.ctr;
    out.aux_ctr = aux.ctr;
    for (std::size_t k = 0; k < crs.instances.size(); ++k) {
        auto it = aux.dict2.find({pk.ctr + 1, k});
        out.instances.push_back(it == aux.dict2.end() ? std::nullopt : std::optional(it->second));
    }
    return out;
}

// Picks the largest k where the bundle's hsk_k and ct_k come from the same
// aggregation and the policy is satisfied.
template <group::PairingBackend B>
TransformOutcome<B> transform_full(const HelperBundle<B>& hsk, const MultiCiphertext<B>& ct) {
    const auto user = hsk.user_ctr + 1;
    bool stale = ct.ctr > hsk.aux_ctr;
    for (std::size_t k = ct.instances.size(); k-- > 0;) {
        if (!ct.instances[k] || helper_epoch(user, k) != public_epoch(ct.ctr, k)) continue;
        if (k >= hsk.instances.size() || !hsk.instances[k]) {
            stale = true;
            continue;
        }
        auto out = slotted::transform(*hsk.instances[k], *ct.instances[k]);
        if (out) return {TransformStatus::ok, FullTransform<B>{k, std::move(*out)}};
    }
    return {stale ? TransformStatus::stale_helper_key : TransformStatus::unsatisfied, std::nullopt};
}

template <group::PairingBackend B>
std::optional<Bytes> decrypt(const UserSecretKey<B>& sk, const FullTransform<B>& ft, const MultiCiphertext<B>& ct) {
    if (ft.instance >= ct.instances.size() || ft.instance >= sk.instances.size() || !ct.instances[ft.instance])
        return std::nullopt;
    return slotted::decrypt_user(sk.instances[ft.instance], ft.ct, *ct.instances[ft.instance]);
}

}  // namespace rabe::registered
