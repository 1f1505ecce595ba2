#pragma once

// Counter-based random numbers (Philox4x32-10).  Every stream is
// addressed by (seed, stream id), so per-sample streams reproduce
// exactly regardless of how samples are distributed over workers.

#include <array>
#include <cmath>
#include <cstdint>

namespace rfso {

namespace detail {

inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0;; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
               static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
               static_cast<std::uint32_t>(p0)};
        if (round == 9) break;
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

} // namespace detail

/// Deterministic uniform stream addressed by (seed, stream id).
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream_id) {}

    /// Uniform double strictly inside (0, 1).
    double uniform() {
        const std::uint64_t bits = next_u64();
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Unit-rate exponential variate.
    double exponential() { return -std::log(uniform()); }

private:
    std::uint64_t next_u64() {
        if (have_ == 0) {
            buf_ = detail::philox4x32_10(
                {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                 static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                key_);
            ++block_;
            have_ = 2;
        }
        const int i = 2 * (2 - have_);
        --have_;
        return (static_cast<std::uint64_t>(buf_[i]) << 32) | buf_[i + 1];
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int have_ = 0;
};

} // namespace rfso
