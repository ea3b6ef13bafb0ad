#include "oscfar/random.hpp"

namespace oscfar {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53u;
constexpr std::uint32_t kMulB = 0xCD9E8D57u;
constexpr std::uint32_t kWeylA = 0x9E3779B9u;
constexpr std::uint32_t kWeylB = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

inline Philox4x32::Counter round(const Philox4x32::Counter& c, const Philox4x32::Key& k) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMulA, c[0], lo0, hi0);
    mulhilo(kMulB, c[2], lo1, hi1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) noexcept {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeylA;
            key[1] += kWeylB;
        }
        ctr = round(ctr, key);
    }
    return ctr;
}

UniformStream::UniformStream(std::uint64_t seed, std::uint32_t stream,
                             std::uint64_t substream) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      ctr_{0u, stream, static_cast<std::uint32_t>(substream),
           static_cast<std::uint32_t>(substream >> 32)} {}

double UniformStream::to_unit_interval(std::uint64_t bits) noexcept {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

double UniformStream::next() noexcept {
    if (used_ == 2) {
        block_ = Philox4x32::generate(ctr_, key_);
        ++ctr_[0];
        used_ = 0;
    }
    const int i = 2 * used_++;
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(block_[i + 1]) << 32) | static_cast<std::uint64_t>(block_[i]);
    return to_unit_interval(bits);
}

}  // namespace oscfar
