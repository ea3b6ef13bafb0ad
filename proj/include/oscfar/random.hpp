#pragma once

#include <array>
#include <cstdint>

namespace oscfar {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Output is a
// pure function of (counter, key), so any trial of any shard can be generated
// without touching shared state.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) noexcept;
};

// Sequential uniforms for one logical stream, addressed by
// (seed, stream, substream). Draws lie on the 53-bit grid in (0, 1]: the
// all-zero bit pattern maps to 2^-53 rather than 0, and 1 is reachable.
class UniformStream {
public:
    UniformStream(std::uint64_t seed, std::uint32_t stream, std::uint64_t substream) noexcept;

    double next() noexcept;

    static double to_unit_interval(std::uint64_t bits) noexcept;

private:
    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    Philox4x32::Counter block_{};
    int used_ = 2;
};

}  // namespace oscfar
