#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ima {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 64-bit seed is the cipher key. The 128-bit counter is split into a
/// 64-bit block index (low words) and a 64-bit stream id (high words), so
/// every (seed, stream) pair names an independent sequence of 2^64 blocks of
/// four 32-bit outputs. Streams never overlap and need no skip-ahead, which
/// lets Monte Carlo replicate m draw from stream m regardless of which
/// thread runs it.
///
/// Stream conventions used by the library:
///   - `simulate(..., seed)` and the gap samplers taking a plain seed use
///     stream 0 of that seed.
///   - Monte Carlo replicate m uses stream m of the master seed for both its
///     time grid and its innovations.
///   - Nested experiments (bootstrap inside a Monte Carlo replicate) key a
///     fresh seed with `derive_seed(parent_seed, index)`; resample b of a
///     bootstrap run then uses stream b of that derived seed.
class Philox4x32 {
public:
    using result_type = std::uint32_t;

    explicit Philox4x32(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (used_ == 4) {
            buffer_ = block(block_index_++);
            used_ = 0;
        }
        return buffer_[used_++];
    }

    /// Raw block function: encrypts counter {index, stream} under the key.
    [[nodiscard]] std::array<std::uint32_t, 4> block(std::uint64_t index) const noexcept {
        std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(index),
                                         static_cast<std::uint32_t>(index >> 32),
                                         static_cast<std::uint32_t>(stream_),
                                         static_cast<std::uint32_t>(stream_ >> 32)};
        return encrypt(ctr, key_);
    }

    static std::array<std::uint32_t, 4> encrypt(std::array<std::uint32_t, 4> ctr,
                                                std::array<std::uint32_t, 2> key) noexcept {
        constexpr std::uint64_t kM0 = 0xD2511F53u;
        constexpr std::uint64_t kM1 = 0xCD9E8D57u;
        constexpr std::uint32_t kW0 = 0x9E3779B9u;
        constexpr std::uint32_t kW1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = kM0 * ctr[0];
            const std::uint64_t p1 = kM1 * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += kW0;
            key[1] += kW1;
        }
        return ctr;
    }

    [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_index_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
};

using Rng = Philox4x32;

/// SplitMix64 finalizer applied to (seed, index); used to key child experiments.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace ima
