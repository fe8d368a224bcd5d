#pragma once

#include "json.hpp"
#include "rabe/container.hpp"

// Text envelope around a binary container:
//   {"format":"rabe","version":1,"kind":"...","backend":"...","data":"<hex>"}
namespace rabe {

inline std::string to_envelope(ByteView container) {
    auto h = peek_header(container);
    nlohmann::json j{{"format", "rabe"},
                     {"version", kFormatVersion},
                     {"kind", artifact_name(h.kind)},
                     {"backend", h.backend},
                     {"data", to_hex(container)}};
    return j.dump(2) + "\n";
}

// Accepts either an envelope or raw container bytes.
inline Bytes from_envelope(ByteView text) {
    auto first = std::find_if(text.begin(), text.end(), [](std::uint8_t c) { return !std::isspace(c); });
    if (first == text.end() || *first != '{') return Bytes(text.begin(), text.end());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("bad envelope: ") + e.what());
    }
    if (!j.is_object() || j.value("format", "") != "rabe" || !j.contains("data") || !j["data"].is_string())
        throw DecodeError("not a rabe envelope");
    if (j.value("version", 0) != kFormatVersion) throw DecodeError("unsupported envelope version");
    auto data = from_hex(j["data"].get<std::string>());
    auto h = peek_header(data);
    if (j.value("kind", "") != artifact_name(h.kind) || j.value("backend", "") != h.backend)
        throw DecodeError("envelope header disagrees with its payload");
    return data;
}

}  // namespace rabe
