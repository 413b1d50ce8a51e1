#pragma once

#include <cstdint>

namespace kmpp {

// Deterministic per-trial random stream based on splitmix64. The stream
// state is seeded with an avalanche mix of (base_seed, stream_index), so
// streams are independent and order-insensitive; identical (seed, index)
// always reproduces the same draw sequence. The constants are fixed and
// documented in the README so results can be reproduced bit for bit.
class RngStream {
public:
    RngStream(std::uint64_t base_seed, std::uint64_t stream_index)
        : state_(mix64(base_seed + kGamma * (stream_index + 1))),
          init_state_(state_) {}

    std::uint64_t next_u64() {
        state_ += kGamma;
        return mix64(state_);
    }

    // uniform in [0, 1), 53 random bits
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // The derived per-stream seed (state right after mixing); recorded in
    // trial CSVs.
    std::uint64_t derived_seed() const { return init_state_; }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
    std::uint64_t init_state_;
};

} // namespace kmpp
