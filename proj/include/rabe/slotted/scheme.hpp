#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rabe/algebra/lsss.hpp"
#include "rabe/algebra/progression_free.hpp"
#include "rabe/slotted/kem.hpp"

// Slotted registered ABE with verifiable outsourced decryption.
//
// Slots are numbered 1..L throughout, as are the entries of the index set D.
// Public keys, CRS entries and helper keys are stored 0-based internally;
// use the `slot(i)` style accessors with 1-based indices.
namespace rabe::slotted {

using algebra::AttributeSet;
using algebra::LsssMatrix;
using algebra::Policy;

template <group::PairingBackend B>
struct SlotParams {
    typename B::G a, b, p, u;
};

template <group::PairingBackend B>
struct Crs {
    std::vector<std::string> universe;
    algebra::ProgressionFreeSet index_set;
    typename B::GT z;
    typename B::G h;
    std::vector<SlotParams<B>> slots;
    // W_z for every z in the cross index set E = {d_i + d_j : i != j}.
    std::map<std::uint64_t, typename B::G> w;

    std::size_t slot_count() const { return slots.size(); }
    const SlotParams<B>& slot(std::size_t i) const { return slots.at(i - 1); }
    std::uint64_t cross_index(std::size_t i, std::size_t j) const { return index_set.at(i) + index_set.at(j); }
    const typename B::G& cross(std::size_t i, std::size_t j) const { return w.at(cross_index(i, j)); }
};

// Setup randomness, kept only by tests that recompute exponents directly.
template <group::PairingBackend B>
struct SetupTrapdoor {
    typename B::Scalar a, b;
    std::vector<typename B::Scalar> gamma;
};

template <group::PairingBackend B>
struct PublicKey {
    std::size_t slot = 0;
    typename B::G t;  // g^r
    typename B::G q;  // P_i^r; carried for format fidelity, never aggregated
    // v[j-1] = A_j^r for j != slot; the own-slot entry is the identity.
    std::vector<typename B::G> v;

    friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

template <group::PairingBackend B>
struct SecretKey {
    std::size_t slot = 0;
    typename B::Scalar r;
};

template <group::PairingBackend B>
struct KeyPair {
    PublicKey<B> pk;
    SecretKey<B> sk;
};

template <group::PairingBackend B>
struct Registration {
    PublicKey<B> pk;
    AttributeSet attrs;
};

template <group::PairingBackend B>
struct MasterPublicKey {
    std::vector<std::string> universe;
    typename B::GT z;
    typename B::G h;
    typename B::G t_hat;
    std::map<std::string, typename B::G> u_hat;

    friend bool operator==(const MasterPublicKey&, const MasterPublicKey&) = default;
};

template <group::PairingBackend B>
struct HelperKey {
    std::size_t slot = 0;
    AttributeSet attrs;
    typename B::G a, b, v_hat;
    std::map<std::string, typename B::G> w_hat;

    friend bool operator==(const HelperKey&, const HelperKey&) = default;
};

template <group::PairingBackend B>
struct Ciphertext {
    Policy policy;
    LsssMatrix lsss;
    Bytes blob;
    typename B::GT c1;
    typename B::G c2;
    std::vector<typename B::G> c3, c4;
    typename B::G c5;
    Digest tag{};
};

template <group::PairingBackend B>
struct TransformCiphertext {
    typename B::GT c1, c2;

    friend bool operator==(const TransformCiphertext&, const TransformCiphertext&) = default;
};

// Encryption randomness, for exponent-oracle tests.
template <group::PairingBackend B>
struct EncryptionWitness {
    typename B::GT mu;
    std::vector<typename B::Scalar> v;  // v[0] = s
    std::vector<typename B::Scalar> row_randomness;
    typename B::G h1;
};

template <group::PairingBackend B>
struct Aggregate {
    MasterPublicKey<B> mpk;
    std::vector<HelperKey<B>> helper_keys;
};

enum class KeyCheck { verify, skip };

template <class S>
S scalar_pow(S base, std::uint64_t e) {
    S acc = S::from_u64(1);
    while (e != 0) {
        if (e & 1U) acc = acc * base;
        base = base * base;
        e >>= 1U;
    }
    return acc;
}

// ---------------------------------------------------------------------------

template <group::PairingBackend B>
std::pair<Crs<B>, SetupTrapdoor<B>> setup_with_trapdoor(std::size_t slot_count, std::vector<std::string> universe,
                                                         Drbg& rng) {
    using S = typename B::Scalar;
    if (slot_count == 0) throw SchemeError("setup needs at least one slot");
    if (universe.empty()) throw SchemeError("attribute universe is empty");
    for (const auto& u : universe)
        if (!Policy::valid_identifier(u)) throw SchemeError("invalid attribute name '" + u + "'");

    Crs<B> crs;
    crs.universe = std::move(universe);
    crs.index_set = algebra::build_progression_free_set(slot_count);
    const auto d_max = crs.index_set.max();

    SetupTrapdoor<B> td{S::random_nonzero(rng), S::random_nonzero(rng), {}};
    for (std::size_t i = 0; i < slot_count; ++i) td.gamma.push_back(S::random(rng));

    const auto g = B::generator();
    const S alpha = -scalar_pow(td.a, 3 * d_max);
    crs.h = B::G::identity();
    for (auto d : crs.index_set.d) crs.h = crs.h * g.pow(scalar_pow(td.a, 3 * d_max - d));
    crs.z = B::gt_generator().pow(alpha);

    const auto g_alpha = g.pow(alpha);
    for (std::size_t i = 1; i <= slot_count; ++i) {
        const S t = scalar_pow(td.a, crs.index_set.at(i));
        crs.slots.push_back({g.pow(t), g_alpha * crs.h.pow(t), g.pow(td.gamma[i - 1]), g.pow(td.b * t)});
    }
    for (std::size_t i = 1; i <= slot_count; ++i)
        for (std::size_t j = i + 1; j <= slot_count; ++j) {
            auto z = crs.cross_index(i, j);
            if (!crs.w.contains(z)) crs.w.emplace(z, g.pow(td.b * scalar_pow(td.a, z)));
        }
    return {std::move(crs), std::move(td)};
}

template <group::PairingBackend B>
Crs<B> setup(std::size_t slot_count, std::vector<std::string> universe, Drbg& rng) {
    return setup_with_trapdoor<B>(slot_count, std::move(universe), rng).first;
}

template <group::PairingBackend B>
KeyPair<B> keygen_with_secret(const Crs<B>& crs, std::size_t slot, const typename B::Scalar& r) {
    if (slot < 1 || slot > crs.slot_count()) throw SchemeError("slot index out of range");
    KeyPair<B> kp;
    kp.pk.slot = slot;
    kp.pk.t = B::generator().pow(r);
    kp.pk.q = crs.slot(slot).p.pow(r);
    kp.pk.v.resize(crs.slot_count(), B::G::identity());
    for (std::size_t j = 1; j <= crs.slot_count(); ++j)
        if (j != slot) kp.pk.v[j - 1] = crs.slot(j).a.pow(r);
    kp.sk = {slot, r};
    return kp;
}

template <group::PairingBackend B>
KeyPair<B> keygen(const Crs<B>& crs, std::size_t slot, Drbg& rng) {
    return keygen_with_secret(crs, slot, B::Scalar::random_nonzero(rng));
}

// Well-formedness of a submitted public key: e(T_i, A_j) = e(g, V_{j,i}) for
// every j != i, i.e. each cross term really is A_j raised to log_g T_i.
template <group::PairingBackend B>
bool public_key_consistent(const Crs<B>& crs, const PublicKey<B>& pk) {
    if (pk.slot < 1 || pk.slot > crs.slot_count() || pk.v.size() != crs.slot_count()) return false;
    for (std::size_t j = 1; j <= crs.slot_count(); ++j) {
        if (j == pk.slot) continue;
        if (B::pair(pk.t, crs.slot(j).a) != B::pair(B::generator(), pk.v[j - 1])) return false;
    }
    return true;
}

template <group::PairingBackend B>
Aggregate<B> register_keys(const Crs<B>& crs, std::span<const Registration<B>> regs,
                           KeyCheck check = KeyCheck::verify) {
    const std::size_t n = crs.slot_count();
    if (regs.size() != n) throw SchemeError("registration list must fill every slot");
    for (std::size_t i = 1; i <= n; ++i) {
        const auto& reg = regs[i - 1];
        if (reg.pk.slot != i) throw SchemeError("public key registered for the wrong slot");
        if (reg.pk.v.size() != n) throw SchemeError("public key has wrong number of cross terms");
        for (const auto& attr : reg.attrs)
            if (std::find(crs.universe.begin(), crs.universe.end(), attr) == crs.universe.end())
                throw SchemeError("registered attribute '" + attr + "' is not in the universe");
        if (check == KeyCheck::verify && !public_key_consistent(crs, reg.pk))
            throw SchemeError("malformed public key for slot " + std::to_string(i));
    }

    Aggregate<B> out;
    auto& mpk = out.mpk;
    mpk.universe = crs.universe;
    mpk.z = crs.z;
    mpk.h = crs.h;
    mpk.t_hat = B::G::identity();
    for (const auto& reg : regs) mpk.t_hat = mpk.t_hat * reg.pk.t;
    for (const auto& w : crs.universe) {
        auto acc = B::G::identity();
        for (std::size_t j = 1; j <= n; ++j)
            if (!regs[j - 1].attrs.contains(w)) acc = acc * crs.slot(j).u;
        mpk.u_hat.emplace(w, acc);
    }

    for (std::size_t i = 1; i <= n; ++i) {
        HelperKey<B> hsk;
        hsk.slot = i;
        hsk.attrs = regs[i - 1].attrs;
        hsk.a = crs.slot(i).a;
        hsk.b = crs.slot(i).b;
        hsk.v_hat = B::G::identity();
        for (std::size_t j = 1; j <= n; ++j)
            if (j != i) hsk.v_hat = hsk.v_hat * regs[j - 1].pk.v[i - 1];
        for (const auto& w : crs.universe) {
            auto acc = B::G::identity();
            for (std::size_t j = 1; j <= n; ++j)
                if (j != i && !regs[j - 1].attrs.contains(w)) acc = acc * crs.cross(i, j);
            hsk.w_hat.emplace(w, acc);
        }
        out.helper_keys.push_back(std::move(hsk));
    }
    return out;
}

template <group::PairingBackend B>
std::pair<Ciphertext<B>, EncryptionWitness<B>> encrypt_with_witness(const MasterPublicKey<B>& mpk,
                                                                    const Policy& policy, ByteView message,
                                                                    Drbg& rng) {
    using S = typename B::Scalar;
    Ciphertext<B> ct{policy, algebra::policy_to_lsss(policy, mpk.universe), {}, {}, {}, {}, {}, {}, {}};
    const auto& m = ct.lsss;
    const auto g = B::generator();

    EncryptionWitness<B> wit;
    wit.mu = B::gt_generator().pow(S::random_nonzero(rng));
    ct.blob = seal(kem_key<B>(wit.mu), message, rng);
    ct.tag = kem_derive<B>(wit.mu, ct.blob).tag;

    wit.v.push_back(S::random_nonzero(rng));
    for (std::size_t c = 1; c < m.col_count(); ++c) wit.v.push_back(S::random(rng));
    const S& s = wit.v[0];

    // h = h1 * h2 with h1 uniform.
    wit.h1 = g.pow(S::random(rng));
    const auto h2 = mpk.h * wit.h1.inverse();

    ct.c1 = wit.mu * mpk.z.pow(s);
    ct.c2 = g.pow(s);
    for (std::size_t k = 0; k < m.row_count(); ++k) {
        S share = S::from_u64(0);
        for (std::size_t c = 0; c < m.col_count(); ++c) share = share + S::from_i64(m.rows[k][c]) * wit.v[c];
        const S sk = S::random(rng);
        wit.row_randomness.push_back(sk);
        ct.c3.push_back(h2.pow(share) * mpk.u_hat.at(m.rho[k]).pow(-sk));
        ct.c4.push_back(g.pow(sk));
    }
    ct.c5 = (wit.h1 * mpk.t_hat.inverse()).pow(s);
    return {std::move(ct), std::move(wit)};
}

template <group::PairingBackend B>
Ciphertext<B> encrypt(const MasterPublicKey<B>& mpk, const Policy& policy, ByteView message, Drbg& rng) {
    return encrypt_with_witness(mpk, policy, message, rng).first;
}

// Outsourced transformation. Returns nullopt (the scheme's bottom) when the
// helper key's attributes do not satisfy the ciphertext policy.
template <group::PairingBackend B>
std::optional<TransformCiphertext<B>> transform(const HelperKey<B>& hsk, const Ciphertext<B>& ct) {
    auto omega = algebra::reconstruction_coefficients<typename B::Scalar>(ct.lsss, hsk.attrs);
    if (!omega) return std::nullopt;

    auto c1 = ct.c1 * B::pair(ct.c2, hsk.b).inverse() * B::pair(ct.c5, hsk.a) * B::pair(ct.c2, hsk.v_hat);
    for (const auto& [row, w] : *omega) {
        if (w.is_zero()) continue;
        auto term = B::pair(ct.c3.at(row), hsk.a) * B::pair(ct.c4.at(row), hsk.w_hat.at(ct.lsss.rho[row]));
        c1 = c1 * term.pow(w);
    }
    return TransformCiphertext<B>{c1, B::pair(ct.c2, hsk.a)};
}

// mu' = C1' * C2'^r, one target-group exponentiation. Returns nullopt when the
// verifiable tag rejects mu' (invalid transform ciphertext). Throws
// IntegrityError if the tag passes but the payload fails authentication.
template <group::PairingBackend B>
std::optional<Bytes> decrypt_user(const SecretKey<B>& sk, const TransformCiphertext<B>& ctp,
                                  const Ciphertext<B>& ct) {
    const auto mu = ctp.c1 * ctp.c2.pow(sk.r);
    const auto kem = kem_derive<B>(mu, ct.blob);
    if (kem.tag != ct.tag) return std::nullopt;
    auto message = open(kem.key, ct.blob);
    if (!message) throw IntegrityError("ciphertext payload failed authentication after tag check");
    return message;
}

}  // namespace rabe::slotted
