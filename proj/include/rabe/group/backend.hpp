#pragma once

#include <concepts>
#include <cstdint>
#include <string>

#include "rabe/bytes.hpp"
#include "rabe/hash.hpp"
#include "rabe/rng.hpp"

namespace rabe::group {

// Wire tags of the canonical element encoding: kind, u32 length, payload.
enum class ElementKind : std::uint8_t { source = 0x01, target = 0x02, scalar = 0x03 };

template <class E>
concept GroupElement = requires(const E& a, const E& b, ByteView bytes) {
    { a * b } -> std::same_as<E>;
    { a.inverse() } -> std::same_as<E>;
    { a == b } -> std::convertible_to<bool>;
    { a.is_identity() } -> std::convertible_to<bool>;
    { a.to_bytes() } -> std::same_as<Bytes>;
    { E::from_bytes(bytes) } -> std::same_as<E>;
    { E::identity() } -> std::same_as<E>;
    { E::kind } -> std::convertible_to<ElementKind>;
    { E::encoded_size } -> std::convertible_to<std::size_t>;
};

template <class S>
concept ScalarField = requires(const S& a, const S& b, ByteView bytes, Drbg& rng, std::uint64_t n, std::int64_t z) {
    { a + b } -> std::same_as<S>;
    { a - b } -> std::same_as<S>;
    { a * b } -> std::same_as<S>;
    { -a } -> std::same_as<S>;
    { a.inverse() } -> std::same_as<S>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a == b } -> std::convertible_to<bool>;
    { S::from_u64(n) } -> std::same_as<S>;
    { S::from_i64(z) } -> std::same_as<S>;
    { S::from_wide(bytes) } -> std::same_as<S>;
    { S::random(rng) } -> std::same_as<S>;
    { S::random_nonzero(rng) } -> std::same_as<S>;
    { a.to_bytes() } -> std::same_as<Bytes>;
    { S::from_bytes(bytes) } -> std::same_as<S>;
};

// A symmetric prime-order pairing group G x G -> GT. `G` and `GT` expose
// exponentiation as `pow(Scalar)`.
template <class B>
concept PairingBackend = ScalarField<typename B::Scalar> && GroupElement<typename B::G> &&
                         GroupElement<typename B::GT> &&
                         requires(const typename B::G& x, const typename B::GT& t, const typename B::Scalar& k) {
                             { B::name() } -> std::convertible_to<std::string>;
                             { B::generator() } -> std::same_as<typename B::G>;
                             { B::gt_generator() } -> std::same_as<typename B::GT>;
                             { B::pair(x, x) } -> std::same_as<typename B::GT>;
                             { x.pow(k) } -> std::same_as<typename B::G>;
                             { t.pow(k) } -> std::same_as<typename B::GT>;
                         };

template <PairingBackend B>
typename B::Scalar hash_to_scalar(std::string_view domain_tag, std::initializer_list<ByteView> inputs) {
    Transcript t(domain_tag);
    for (auto in : inputs) t.add(in);
    auto wide = t.digest512();
    return B::Scalar::from_wide(wide);
}

template <PairingBackend B>
typename B::Scalar hash_to_scalar(std::string_view domain_tag, const std::vector<Bytes>& inputs) {
    Transcript t(domain_tag);
    for (const auto& in : inputs) t.add(in);
    auto wide = t.digest512();
    return B::Scalar::from_wide(wide);
}

// Element encoding: 1-byte kind, 4-byte big-endian length, payload.
template <class E>
void write_element(Writer& w, const E& e) {
    w.u8(static_cast<std::uint8_t>(E::kind));
    w.blob(e.to_bytes());
}

template <class E>
E read_element(Reader& r) {
    auto kind = r.u8();
    if (kind != static_cast<std::uint8_t>(E::kind)) throw DecodeError("unexpected element kind tag");
    auto payload = r.blob();
    if (payload.size() != E::encoded_size) throw DecodeError("element payload has wrong length");
    return E::from_bytes(payload);
}

template <class E>
Bytes encode_element(const E& e) {
    Writer w;
    write_element(w, e);
    return std::move(w).bytes();
}

template <class E>
E decode_element(ByteView bytes) {
    Reader r(bytes);
    auto e = read_element<E>(r);
    r.expect_end();
    return e;
}

template <class E>
E product(const std::vector<E>& xs) {
    auto acc = E::identity();
    for (const auto& x : xs) acc = acc * x;
    return acc;
}

}  // namespace rabe::group
