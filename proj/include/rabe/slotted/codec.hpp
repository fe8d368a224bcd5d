#pragma once

#include "rabe/container.hpp"
#include "rabe/slotted/scheme.hpp"

namespace rabe::slotted::io {

using group::read_element;
using group::write_element;

inline void write_strings(Writer& w, const std::vector<std::string>& xs) {
    w.u32(static_cast<std::uint32_t>(xs.size()));
    for (const auto& x : xs) w.str(x);
}

inline std::vector<std::string> read_strings(Reader& r) {
    std::vector<std::string> out(r.count(4));
    for (auto& x : out) x = r.str();
    return out;
}

inline void write_attrs(Writer& w, const AttributeSet& attrs) {
    w.u32(static_cast<std::uint32_t>(attrs.size()));
    for (const auto& a : attrs) w.str(a);
}

inline AttributeSet read_attrs(Reader& r) {
    AttributeSet out;
    auto n = r.count(4);
    for (std::size_t i = 0; i < n; ++i) {
        auto a = r.str();
        if (!Policy::valid_identifier(a)) throw DecodeError("invalid attribute name");
        if (!out.insert(std::move(a)).second) throw DecodeError("duplicate attribute");
    }
    return out;
}

template <class E>
void write_elements(Writer& w, const std::vector<E>& xs) {
    w.u32(static_cast<std::uint32_t>(xs.size()));
    for (const auto& x : xs) write_element(w, x);
}

template <class E>
std::vector<E> read_elements(Reader& r) {
    std::vector<E> out(r.count(5 + E::encoded_size));
    for (auto& x : out) x = read_element<E>(r);
    return out;
}

template <class E>
void write_named(Writer& w, const std::map<std::string, E>& xs) {
    w.u32(static_cast<std::uint32_t>(xs.size()));
    for (const auto& [name, x] : xs) {
        w.str(name);
        write_element(w, x);
    }
}

template <class E>
std::map<std::string, E> read_named(Reader& r, const std::vector<std::string>* universe) {
    std::map<std::string, E> out;
    auto n = r.count(9 + E::encoded_size);
    for (std::size_t i = 0; i < n; ++i) {
        auto name = r.str();
        auto x = read_element<E>(r);
        if (!out.emplace(std::move(name), std::move(x)).second) throw DecodeError("duplicate attribute entry");
    }
    if (universe != nullptr) {
        if (out.size() != universe->size()) throw DecodeError("per-attribute table does not cover the universe");
        for (const auto& u : *universe)
            if (!out.contains(u)) throw DecodeError("per-attribute table does not cover the universe");
    }
    return out;
}

inline std::size_t read_slot(Reader& r) {
    auto s = r.u32();
    if (s == 0) throw DecodeError("slot index must be positive");
    return s;
}

}  // namespace rabe::slotted::io

namespace rabe {

template <group::PairingBackend B>
struct Codec<slotted::Crs<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::crs;
    static std::string backend() { return B::name(); }

    static void write(Writer& w, const slotted::Crs<B>& crs) {
        using namespace slotted::io;
        write_strings(w, crs.universe);
        w.u32(static_cast<std::uint32_t>(crs.index_set.d.size()));
        for (auto d : crs.index_set.d) w.u64(d);
        write_element(w, crs.z);
        write_element(w, crs.h);
        w.u32(static_cast<std::uint32_t>(crs.slots.size()));
        for (const auto& s : crs.slots) {
            write_element(w, s.a);
            write_element(w, s.b);
            write_element(w, s.p);
            write_element(w, s.u);
        }
        w.u32(static_cast<std::uint32_t>(crs.w.size()));
        for (const auto& [z, e] : crs.w) {
            w.u64(z);
            write_element(w, e);
        }
    }

    static slotted::Crs<B> read(Reader& r) {
        using namespace slotted::io;
        slotted::Crs<B> crs;
        crs.universe = read_strings(r);
        auto n = r.count(8);
        if (n == 0) throw DecodeError("CRS without slots");
        for (std::size_t i = 0; i < n; ++i) crs.index_set.d.push_back(r.u64());
        if (crs.index_set.d != algebra::build_progression_free_set(n).d) throw DecodeError("unexpected index set");
        crs.z = read_element<typename B::GT>(r);
        crs.h = read_element<typename B::G>(r);
        if (r.count(4 * (5 + B::G::encoded_size)) != n) throw DecodeError("slot table size mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            slotted::SlotParams<B> s;
            s.a = read_element<typename B::G>(r);
            s.b = read_element<typename B::G>(r);
            s.p = read_element<typename B::G>(r);
            s.u = read_element<typename B::G>(r);
            crs.slots.push_back(std::move(s));
        }
        auto wn = r.count(13 + B::G::encoded_size);
        for (std::size_t k = 0; k < wn; ++k) {
            auto z = r.u64();
            if (!crs.w.emplace(z, read_element<typename B::G>(r)).second) throw DecodeError("duplicate cross term");
        }
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j)
                if (!crs.w.contains(crs.cross_index(i, j))) throw DecodeError("missing cross term");
        std::size_t expected = 0;
        {
            std::set<std::uint64_t> e;
            for (std::size_t i = 1; i <= n; ++i)
                for (std::size_t j = i + 1; j <= n; ++j) e.insert(crs.cross_index(i, j));
            expected = e.size();
        }
        if (crs.w.size() != expected) throw DecodeError("unexpected cross terms");
        return crs;
    }
};

template <group::PairingBackend B>
struct Codec<slotted::MasterPublicKey<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::master_public_key;
    static std::string backend() { return B::name(); }

    static void write(Writer& w, const slotted::MasterPublicKey<B>& mpk) {
        using namespace slotted::io;
        write_strings(w, mpk.universe);
        write_element(w, mpk.z);
        write_element(w, mpk.h);
        write_element(w, mpk.t_hat);
        write_named(w, mpk.u_hat);
    }

    static slotted::MasterPublicKey<B> read(Reader& r) {
        using namespace slotted::io;
        slotted::MasterPublicKey<B> mpk;
        mpk.universe = read_strings(r);
        mpk.z = read_element<typename B::GT>(r);
        mpk.h = read_element<typename B::G>(r);
        mpk.t_hat = read_element<typename B::G>(r);
        mpk.u_hat = read_named<typename B::G>(r, &mpk.universe);
        return mpk;
    }
};

template <group::PairingBackend B>
struct Codec<slotted::HelperKey<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::helper_key;
    static std::string backend() { return B::name(); }

    static void write(Writer& w, const slotted::HelperKey<B>& hsk) {
        using namespace slotted::io;
        w.u32(static_cast<std::uint32_t>(hsk.slot));
        write_attrs(w, hsk.attrs);
        write_element(w, hsk.a);
        write_element(w, hsk.b);
        write_element(w, hsk.v_hat);
        write_named(w, hsk.w_hat);
    }

    static slotted::HelperKey<B> read(Reader& r) {
        using namespace slotted::io;
        slotted::HelperKey<B> hsk;
        hsk.slot = read_slot(r);
        hsk.attrs = read_attrs(r);
        hsk.a = read_element<typename B::G>(r);
        hsk.b = read_element<typename B::G>(r);
        hsk.v_hat = read_element<typename B::G>(r);
        hsk.w_hat = read_named<typename B::G>(r, nullptr);
        return hsk;
    }
};

template <group::PairingBackend B>
struct Codec<slotted::PublicKey<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::public_key;
    static std::string backend() { return B::name(); }

    static void write(Writer& w, const slotted::PublicKey<B>& pk) {
        using namespace slotted::io;
        w.u32(static_cast<std::uint32_t>(pk.slot));
        write_element(w, pk.t);
        write_element(w, pk.q);
        write_elements(w, pk.v);
    }

    static slotted::PublicKey<B> read(Reader& r) {
        using namespace slotted::io;
        slotted::PublicKey<B> pk;
        pk.slot = read_slot(r);
        pk.t = read_element<typename B::G>(r);
        pk.q = read_element<typename B::G>(r);
        pk.v = read_elements<typename B::G>(r);
        if (pk.slot > pk.v.size()) throw DecodeError("public key slot exceeds cross-term count");
        return pk;
    }
};

template <group::PairingBackend B>
struct Codec<slotted::SecretKey<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::secret_key;
    static std::string backend() { return B::name(); }

    static void write(Writer& w, const slotted::SecretKey<B>& sk) {
        w.u32(static_cast<std::uint32_t>(sk.slot));
        group::write_element(w, sk.r);
    }

    static slotted::SecretKey<B> read(Reader& r) {
        slotted::SecretKey<B> sk;
        sk.slot = slotted::io::read_slot(r);
        sk.r = group::read_element<typename B::Scalar>(r);
        return sk;
    }
};

template <group::PairingBackend B>
struct Codec<slotted::Ciphertext<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::ciphertext;
    static std::string backend() { return B::name(); }

    // The LSSS matrix is not stored: it is a deterministic function of the
    // policy and is recompiled on decode.
    static void write(Writer& w, const slotted::Ciphertext<B>& ct) {
        using namespace slotted::io;
        ct.policy.encode(w);
        w.blob(ct.blob);
        write_element(w, ct.c1);
        write_element(w, ct.c2);
        w.u32(static_cast<std::uint32_t>(ct.c3.size()));
        for (std::size_t k = 0; k < ct.c3.size(); ++k) {
            write_element(w, ct.c3[k]);
            write_element(w, ct.c4[k]);
        }
        write_element(w, ct.c5);
        w.raw(ct.tag);
    }

    static slotted::Ciphertext<B> read(Reader& r) {
        using namespace slotted::io;
        auto policy = algebra::Policy::decode(r);
        slotted::Ciphertext<B> ct{policy, algebra::policy_to_lsss(policy), {}, {}, {}, {}, {}, {}, {}};
        auto blob = r.blob();
        ct.blob.assign(blob.begin(), blob.end());
        ct.c1 = read_element<typename B::GT>(r);
        ct.c2 = read_element<typename B::G>(r);
        auto rows = r.count(2 * (5 + B::G::encoded_size));
        if (rows != ct.lsss.row_count()) throw DecodeError("ciphertext row count does not match its policy");
        for (std::size_t k = 0; k < rows; ++k) {
            ct.c3.push_back(read_element<typename B::G>(r));
            ct.c4.push_back(read_element<typename B::G>(r));
        }
        ct.c5 = read_element<typename B::G>(r);
        auto tag = r.take(ct.tag.size());
        std::copy(tag.begin(), tag.end(), ct.tag.begin());
        return ct;
    }
};

template <group::PairingBackend B>
struct Codec<slotted::TransformCiphertext<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::transform_ciphertext;
    static std::string backend() { return B::name(); }

    static void write(Writer& w, const slotted::TransformCiphertext<B>& ctp) {
        group::write_element(w, ctp.c1);
        group::write_element(w, ctp.c2);
    }

    static slotted::TransformCiphertext<B> read(Reader& r) {
        slotted::TransformCiphertext<B> ctp;
        ctp.c1 = group::read_element<typename B::GT>(r);
        ctp.c2 = group::read_element<typename B::GT>(r);
        return ctp;
    }
};

}  // namespace rabe
