#pragma once

#include <map>
#include <optional>

#include "rabe/hash.hpp"

namespace rabe::sim {

// In-memory content-addressed object store; key = SHA-256 of the bytes.
class ContentStore {
public:
    Digest put(Bytes data) {
        auto key = sha256(data);
        objects_.try_emplace(key, std::move(data));
        return key;
    }

    std::optional<ByteView> get(const Digest& key) const {
        auto it = objects_.find(key);
        if (it == objects_.end()) return std::nullopt;
        return ByteView(it->second);
    }

    bool contains(const Digest& key) const { return objects_.contains(key); }
    std::size_t size() const { return objects_.size(); }

private:
    std::map<Digest, Bytes> objects_;
};

}  // namespace rabe::sim
