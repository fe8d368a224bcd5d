#pragma once

#include <cstdint>

namespace rabe::group {

// Per-thread tallies of the expensive group operations. Both backends bump
// these, which lets tests assert cost shapes (e.g. a single target-group
// exponentiation in final decryption) without timing anything.
struct OpCounters {
    std::uint64_t pairings = 0;
    std::uint64_t g_exp = 0;
    std::uint64_t gt_exp = 0;
    std::uint64_t g_mul = 0;
    std::uint64_t gt_mul = 0;

    OpCounters operator-(const OpCounters& o) const {
        return {pairings - o.pairings, g_exp - o.g_exp, gt_exp - o.gt_exp, g_mul - o.g_mul, gt_mul - o.gt_mul};
    }
};

inline OpCounters& op_counters() {
    thread_local OpCounters counters;
    return counters;
}

class CounterScope {
public:
    CounterScope() : start_(op_counters()) {}
    OpCounters delta() const { return op_counters() - start_; }

private:
    OpCounters start_;
};

}  // namespace rabe::group
