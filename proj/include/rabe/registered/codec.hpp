#pragma once

#include "rabe/registered/scheme.hpp"
#include "rabe/slotted/codec.hpp"

namespace rabe::registered::io {

template <class T>
void write_optional(Writer& w, const std::optional<T>& x) {
    w.u8(x ? 1 : 0);
    if (x) Codec<T>::write(w, *x);
}

template <class T>
std::optional<T> read_optional(Reader& r) {
    auto flag = r.u8();
    if (flag > 1) throw DecodeError("bad presence flag");
    if (flag == 0) return std::nullopt;
    return Codec<T>::read(r);
}

template <class T>
void write_list(Writer& w, const std::vector<T>& xs) {
    w.u32(static_cast<std::uint32_t>(xs.size()));
    for (const auto& x : xs) Codec<T>::write(w, x);
}

template <class T>
std::vector<T> read_list(Reader& r) {
    std::vector<T> out(r.count(1));
    for (auto& x : out) x = Codec<T>::read(r);
    return out;
}

template <class T>
void write_optional_list(Writer& w, const std::vector<std::optional<T>>& xs) {
    w.u32(static_cast<std::uint32_t>(xs.size()));
    for (const auto& x : xs) write_optional(w, x);
}

template <class T>
std::vector<std::optional<T>> read_optional_list(Reader& r) {
    std::vector<std::optional<T>> out(r.count(1));
    for (auto& x : out) x = read_optional<T>(r);
    return out;
}

inline void check_levels(std::size_t n) {
    if (n == 0 || n > 21) throw DecodeError("instance count out of range");
}

}  // namespace rabe::registered::io

namespace rabe {

template <group::PairingBackend B>
struct Codec<registered::MultiCrs<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::multi_crs;
    static std::string backend() { return B::name(); }
    static void write(Writer& w, const registered::MultiCrs<B>& crs) { registered::io::write_list(w, crs.instances); }
    static registered::MultiCrs<B> read(Reader& r) {
        registered::MultiCrs<B> crs{registered::io::read_list<slotted::Crs<B>>(r)};
        registered::io::check_levels(crs.instances.size());
        for (std::size_t k = 0; k < crs.instances.size(); ++k) {
            if (crs.instances[k].slot_count() != registered::instance_slots(k))
                throw DecodeError("instance has the wrong number of slots");
            if (crs.instances[k].universe != crs.instances[0].universe)
                throw DecodeError("instances disagree on the attribute universe");
        }
        return crs;
    }
};

template <group::PairingBackend B>
struct Codec<registered::MultiMasterPublicKey<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::multi_master_public_key;
    static std::string backend() { return B::name(); }
    static void write(Writer& w, const registered::MultiMasterPublicKey<B>& mpk) {
        w.u64(mpk.ctr);
        registered::io::write_optional_list(w, mpk.instances);
    }
    static registered::MultiMasterPublicKey<B> read(Reader& r) {
        registered::MultiMasterPublicKey<B> mpk;
        mpk.ctr = r.u64();
        mpk.instances = registered::io::read_optional_list<slotted::MasterPublicKey<B>>(r);
        registered::io::check_levels(mpk.instances.size());
        return mpk;
    }
};

template <group::PairingBackend B>
struct Codec<registered::UserPublicKey<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::user_public_key;
    static std::string backend() { return B::name(); }
    static void write(Writer& w, const registered::UserPublicKey<B>& pk) {
        w.u64(pk.ctr);
        registered::io::write_list(w, pk.instances);
    }
    static registered::UserPublicKey<B> read(Reader& r) {
        registered::UserPublicKey<B> pk;
        pk.ctr = r.u64();
        pk.instances = registered::io::read_list<slotted::PublicKey<B>>(r);
        registered::io::check_levels(pk.instances.size());
        return pk;
    }
};

template <group::PairingBackend B>
struct Codec<registered::UserSecretKey<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::user_secret_key;
    static std::string backend() { return B::name(); }
    static void write(Writer& w, const registered::UserSecretKey<B>& sk) {
        w.u64(sk.ctr);
        registered::io::write_list(w, sk.instances);
    }
    static registered::UserSecretKey<B> read(Reader& r) {
        registered::UserSecretKey<B> sk;
        sk.ctr = r.u64();
        sk.instances = registered::io::read_list<slotted::SecretKey<B>>(r);
        registered::io::check_levels(sk.instances.size());
        return sk;
    }
};

template <group::PairingBackend B>
struct Codec<registered::MultiCiphertext<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::multi_ciphertext;
    static std::string backend() { return B::name(); }
    static void write(Writer& w, const registered::MultiCiphertext<B>& ct) {
        w.u64(ct.ctr);
        registered::io::write_optional_list(w, ct.instances);
    }
    static registered::MultiCiphertext<B> read(Reader& r) {
        registered::MultiCiphertext<B> ct;
        ct.ctr = r.u64();
        ct.instances = registered::io::read_optional_list<slotted::Ciphertext<B>>(r);
        registered::io::check_levels(ct.instances.size());
        return ct;
    }
};

template <group::PairingBackend B>
struct Codec<registered::HelperBundle<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::helper_bundle;
    static std::string backend() { return B::name(); }
    static void write(Writer& w, const registered::HelperBundle<B>& b) {
        w.u64(b.user_ctr);
        w.u64(b.aux_ctr);
        registered::io::write_optional_list(w, b.instances);
    }
    static registered::HelperBundle<B> read(Reader& r) {
        registered::HelperBundle<B> b;
        b.user_ctr = r.u64();
        b.aux_ctr = r.u64();
        b.instances = registered::io::read_optional_list<slotted::HelperKey<B>>(r);
        registered::io::check_levels(b.instances.size());
        return b;
    }
};

template <group::PairingBackend B>
struct Codec<registered::FullTransform<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::full_transform;
    static std::string backend() { return B::name(); }
    static void write(Writer& w, const registered::FullTransform<B>& ft) {
        w.u32(static_cast<std::uint32_t>(ft.instance));
        Codec<slotted::TransformCiphertext<B>>::write(w, ft.ct);
    }
    static registered::FullTransform<B> read(Reader& r) {
        registered::FullTransform<B> ft;
        ft.instance = r.u32();
        if (ft.instance > 20) throw DecodeError("instance index out of range");
        ft.ct = Codec<slotted::TransformCiphertext<B>>::read(r);
        return ft;
    }
};

// Aux snapshot: counter, Dict1 rows, Dict2 rows, then the mpk.
template <group::PairingBackend B>
struct Codec<registered::AuxState<B>> {
    static constexpr ArtifactKind kind = ArtifactKind::aux_state;
    static std::string backend() { return B::name(); }
    static void write(Writer& w, const registered::AuxState<B>& aux) {
        w.u64(aux.ctr);
        w.u32(static_cast<std::uint32_t>(aux.dict1.size()));
        for (const auto& [key, reg] : aux.dict1) {
            w.u32(static_cast<std::uint32_t>(key.first));
            w.u32(static_cast<std::uint32_t>(key.second));
            Codec<slotted::PublicKey<B>>::write(w, reg.pk);
            slotted::io::write_attrs(w, reg.attrs);
        }
        w.u32(static_cast<std::uint32_t>(aux.dict2.size()));
        for (const auto& [key, hsk] : aux.dict2) {
            w.u64(key.first);
            w.u32(static_cast<std::uint32_t>(key.second));
            Codec<slotted::HelperKey<B>>::write(w, hsk);
        }
        Codec<registered::MultiMasterPublicKey<B>>::write(w, aux.mpk);
    }
    static registered::AuxState<B> read(Reader& r) {
        registered::AuxState<B> aux;
        aux.ctr = r.u64();
        auto n1 = r.count(8);
        for (std::size_t i = 0; i < n1; ++i) {
            std::size_t k = r.u32(), slot = r.u32();
            auto pk = Codec<slotted::PublicKey<B>>::read(r);
            auto attrs = slotted::io::read_attrs(r);
            if (!aux.dict1.emplace(std::pair{k, slot}, slotted::Registration<B>{pk, attrs}).second)
                throw DecodeError("duplicate Dict1 row");
        }
        auto n2 = r.count(12);
        for (std::size_t i = 0; i < n2; ++i) {
            std::uint64_t user = r.u64();
            std::size_t k = r.u32();
            if (!aux.dict2.emplace(std::pair{user, k}, Codec<slotted::HelperKey<B>>::read(r)).second)
                throw DecodeError("duplicate Dict2 row");
        }
        aux.mpk = Codec<registered::MultiMasterPublicKey<B>>::read(r);
        if (aux.mpk.ctr != aux.ctr) throw DecodeError("aux counter disagrees with its mpk");
        return aux;
    }
};

}  // namespace rabe
