#pragma once

#include <cstdint>

namespace bicx {

// Counter-based generator (splitmix64 over a per-stream key). Episode
// substreams are derived by mixing the episode index into the stream id, so
// changing replication counts never reshuffles earlier episodes. Identical
// output on every platform.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(seed ^ mix(stream ^ 0x9e3779b97f4a7c15ull))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // uniform in [0, 1)
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1]; suits the half-open y convention
    double next_unit_open() { return 1.0 - next_unit(); }

    // uniform in [lo, hi)
    double next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }
    std::uint64_t state_;
};

} // namespace bicx
