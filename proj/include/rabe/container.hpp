#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "rabe/bytes.hpp"

namespace rabe {

enum class ArtifactKind : std::uint8_t {
    crs = 1,
    master_public_key = 2,
    helper_key = 3,
    public_key = 4,
    secret_key = 5,
    ciphertext = 6,
    transform_ciphertext = 7,
    multi_crs = 8,
    multi_master_public_key = 9,
    user_public_key = 10,
    user_secret_key = 11,
    multi_ciphertext = 12,
    helper_bundle = 13,
    full_transform = 14,
    aux_state = 15,
    fraud_proof = 16,
};

inline const char* artifact_name(ArtifactKind k) {
    switch (k) {
        case ArtifactKind::crs: return "crs";
        case ArtifactKind::master_public_key: return "master-public-key";
        case ArtifactKind::helper_key: return "helper-key";
        case ArtifactKind::public_key: return "public-key";
        case ArtifactKind::secret_key: return "secret-key";
        case ArtifactKind::ciphertext: return "ciphertext";
        case ArtifactKind::transform_ciphertext: return "transform-ciphertext";
        case ArtifactKind::multi_crs: return "multi-crs";
        case ArtifactKind::multi_master_public_key: return "multi-master-public-key";
        case ArtifactKind::user_public_key: return "user-public-key";
        case ArtifactKind::user_secret_key: return "user-secret-key";
        case ArtifactKind::multi_ciphertext: return "multi-ciphertext";
        case ArtifactKind::helper_bundle: return "helper-bundle";
        case ArtifactKind::full_transform: return "full-transform";
        case ArtifactKind::aux_state: return "aux-state";
        case ArtifactKind::fraud_proof: return "fraud-proof";
    }
    return "unknown";
}

// Versioned binary container:
//   magic "RABE" | u16 version | str backend | u8 kind | u32 n |
//   n x (u16 section id | u32 length | payload)
// Section ids are unique and written in ascending order.
inline constexpr std::uint8_t kMagic[4] = {'R', 'A', 'B', 'E'};
inline constexpr std::uint16_t kFormatVersion = 1;

class ContainerWriter {
public:
    ContainerWriter(ArtifactKind kind, std::string backend) : kind_(kind), backend_(std::move(backend)) {}

    void section(std::uint16_t id, Bytes payload) {
        if (sections_.contains(id)) throw Error("duplicate container section");
        sections_.emplace(id, std::move(payload));
    }

    Bytes finish() const {
        Writer w;
        w.raw(kMagic);
        w.u16(kFormatVersion);
        w.str(backend_);
        w.u8(static_cast<std::uint8_t>(kind_));
        w.u32(static_cast<std::uint32_t>(sections_.size()));
        for (const auto& [id, payload] : sections_) {
            w.u16(id);
            w.blob(payload);
        }
        return std::move(w).bytes();
    }

private:
    ArtifactKind kind_;
    std::string backend_;
    std::map<std::uint16_t, Bytes> sections_;
};

class ContainerReader {
public:
    ContainerReader(ByteView data, ArtifactKind expected, const std::string& backend) {
        Reader r(data);
        auto magic = r.take(4);
        if (!std::equal(magic.begin(), magic.end(), kMagic)) throw DecodeError("bad container magic");
        if (r.u16() != kFormatVersion) throw DecodeError("unsupported container version");
        auto got_backend = r.str();
        if (got_backend != backend) throw DecodeError("artifact was produced by backend '" + got_backend + "'");
        auto kind = r.u8();
        if (kind != static_cast<std::uint8_t>(expected))
            throw DecodeError(std::string("expected a ") + artifact_name(expected) + " artifact");
        auto n = r.count(6);
        int last = -1;
        for (std::size_t i = 0; i < n; ++i) {
            auto id = r.u16();
            if (static_cast<int>(id) <= last) throw DecodeError("container sections out of order");
            last = id;
            sections_.emplace(id, r.blob());
        }
        r.expect_end();
    }

    bool has(std::uint16_t id) const { return sections_.contains(id); }

    Reader section(std::uint16_t id) const {
        auto it = sections_.find(id);
        if (it == sections_.end()) throw DecodeError("missing container section");
        return Reader(it->second);
    }

private:
    std::map<std::uint16_t, ByteView> sections_;
};

// Peeks at a container header without decoding the payload.
struct ContainerHeader {
    std::string backend;
    ArtifactKind kind;
};

inline ContainerHeader peek_header(ByteView data) {
    Reader r(data);
    auto magic = r.take(4);
    if (!std::equal(magic.begin(), magic.end(), kMagic)) throw DecodeError("bad container magic");
    if (r.u16() != kFormatVersion) throw DecodeError("unsupported container version");
    ContainerHeader h;
    h.backend = r.str();
    h.kind = static_cast<ArtifactKind>(r.u8());
    return h;
}

// Every codec below writes its body into this single section.
inline constexpr std::uint16_t kBodySection = 1;

// Codec<T> provides: static constexpr ArtifactKind kind; static void
// write(Writer&, const T&); static T read(Reader&). The backend name comes
// from T's backend.
template <class T>
struct Codec;

template <class T>
Bytes to_artifact(const T& value) {
    Writer body;
    Codec<T>::write(body, value);
    ContainerWriter cw(Codec<T>::kind, Codec<T>::backend());
    cw.section(kBodySection, std::move(body).bytes());
    return cw.finish();
}

template <class T>
T from_artifact(ByteView data) {
    ContainerReader cr(data, Codec<T>::kind, Codec<T>::backend());
    auto r = cr.section(kBodySection);
    auto value = Codec<T>::read(r);
    r.expect_end();
    return value;
}

}  // namespace rabe
