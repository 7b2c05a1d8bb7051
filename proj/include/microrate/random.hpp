#pragma once

// Counter-based random streams.
//
// Every Monte Carlo trial owns a stream keyed by (seed, trial index). The
// k-th output of a stream is a pure function of (key, k), so results do not
// depend on which thread runs which trial or in what order.

#include <cstdint>
#include <limits>

namespace microrate {

/// SplitMix64 output finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// SplitMix64 stream whose starting state is derived from (seed, stream id).
/// Satisfies UniformRandomBitGenerator.
class CounterStream {
public:
    using result_type = std::uint64_t;

    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    constexpr CounterStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : key_(mix64(mix64(seed + kGamma) ^ (stream_id * 0xd1342543de82ef95ULL + 1))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    constexpr result_type operator()() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * kGamma);
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    constexpr double uniform_open01() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    constexpr std::uint64_t draws() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace microrate
