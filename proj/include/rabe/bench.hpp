#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "rabe/group/counters.hpp"
#include "rabe/slotted/codec.hpp"

// Policy-size sweep over AND policies, in the shape of the outsourcing
// experiments: encrypt / transform / decrypt_user time and artifact sizes.
namespace rabe::bench {

struct Point {
    std::size_t attrs = 0;
    std::size_t ct_bytes = 0;
    std::size_t ctp_bytes = 0;
    double encrypt_ms = 0;
    double transform_ms = 0;
    double decrypt_ms = 0;
    std::uint64_t decrypt_gt_exp = 0;
};

inline std::vector<std::string> universe(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        auto digits = std::to_string(i);
        out.push_back("attr_" + std::string(digits.size() < 3 ? 3 - digits.size() : 0, '0') + digits);
    }
    return out;
}

inline algebra::Policy and_policy(const std::vector<std::string>& names, std::size_t count) {
    auto p = algebra::Policy::leaf(names.at(0));
    for (std::size_t i = 1; i < count; ++i) p = algebra::Policy::conj(p, algebra::Policy::leaf(names.at(i)));
    return p;
}

// A two-slot system where both users hold every attribute in the universe.
template <group::PairingBackend B>
struct Fixture {
    slotted::Crs<B> crs;
    slotted::Aggregate<B> agg;
    std::vector<slotted::KeyPair<B>> keys;
    std::vector<std::string> names;

    Fixture(std::size_t max_attrs, Drbg& rng) : names(universe(max_attrs)) {
        crs = slotted::setup<B>(2, names, rng);
        algebra::AttributeSet all(names.begin(), names.end());
        std::vector<slotted::Registration<B>> regs;
        for (std::size_t i = 1; i <= 2; ++i) {
            keys.push_back(slotted::keygen(crs, i, rng));
            regs.push_back({keys.back().pk, all});
        }
        agg = slotted::register_keys<B>(crs, regs, slotted::KeyCheck::skip);
    }
};

template <class F>
double time_ms(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

template <group::PairingBackend B>
Point measure(const Fixture<B>& fx, std::size_t attrs, std::size_t reps, Drbg& rng) {
    Point pt;
    pt.attrs = attrs;
    const auto policy = and_policy(fx.names, attrs);
    const Bytes message(64, 0x5a);
    for (std::size_t rep = 0; rep < reps; ++rep) {
        std::optional<slotted::Ciphertext<B>> ct;
        pt.encrypt_ms += time_ms([&] { ct = slotted::encrypt(fx.agg.mpk, policy, message, rng); });
        std::optional<slotted::TransformCiphertext<B>> ctp;
        pt.transform_ms += time_ms([&] { ctp = slotted::transform(fx.agg.helper_keys[0], *ct); });
        if (!ctp) throw SchemeError("benchmark transform failed");
        group::CounterScope scope;
        std::optional<Bytes> out;
        pt.decrypt_ms += time_ms([&] { out = slotted::decrypt_user(fx.keys[0].sk, *ctp, *ct); });
        pt.decrypt_gt_exp = scope.delta().gt_exp;
        if (!out || *out != message) throw SchemeError("benchmark decryption failed");
        if (rep == 0) {
            pt.ct_bytes = to_artifact(*ct).size();
            pt.ctp_bytes = to_artifact(*ctp).size();
        }
    }
    pt.encrypt_ms /= static_cast<double>(reps);
    pt.transform_ms /= static_cast<double>(reps);
    pt.decrypt_ms /= static_cast<double>(reps);
    return pt;
}

inline std::string csv_header() { return "attrs,ct_bytes,ctp_bytes,encrypt_ms,transform_ms,decrypt_ms,decrypt_gt_exp"; }

inline std::string csv_row(const Point& p) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%.4f,%.4f,%.4f,%llu", p.attrs, p.ct_bytes, p.ctp_bytes, p.encrypt_ms,
                  p.transform_ms, p.decrypt_ms, static_cast<unsigned long long>(p.decrypt_gt_exp));
    return buf;
}

}  // namespace rabe::bench
