#pragma once
#include <cstdint>

namespace modres {

// Counter-based splitmix64 mixing. Every random decision in the project is a
// pure function of (seed, counter), so parallel runs consume no shared stream.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix_stages(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) { return mix_stages(x + kGolden); }

// Stream value `index` of the stream rooted at `master`. Used for per-trial
// and per-pair seeds; index 0 is already well mixed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix_stages(master + kGolden * (index + 1));
}

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return mix_stages(state_ += kGolden); }

    // Uniform in [0, bound) via 128-bit multiply-shift.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    // Uniform in [0, 1).
    double next_unit() { return (next() >> 11) * 0x1.0p-53; }

    bool next_bool() { return next() >> 63; }

  private:
    std::uint64_t state_;
};

}  // namespace modres
