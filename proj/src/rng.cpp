#include "mvns/rng.hpp"

#include <cmath>
#include <numbers>

namespace mvns {

namespace {

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
    const uint64_t p = static_cast<uint64_t>(a) * b;
    hi = static_cast<uint32_t>(p >> 32);
    lo = static_cast<uint32_t>(p);
}

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

} // namespace

std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> c,
                                   std::array<uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
        uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, c[0], hi0, lo0);
        mulhilo(kPhiloxM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

CounterRng::CounterRng(uint64_t seed, StreamTag tag)
    : key_{static_cast<uint32_t>(seed),
           static_cast<uint32_t>(seed >> 32) ^
               (static_cast<uint32_t>(tag) * 0x9E3779B9u)} {}

std::array<double, 2> CounterRng::normal_pair(uint64_t c0, uint32_t c1, uint32_t c2) const {
    const auto r = philox4x32({static_cast<uint32_t>(c0), c1, c2,
                               static_cast<uint32_t>(c0 >> 32)},
                              key_);
    // 53-bit uniforms; u1 in (0,1] keeps the log finite.
    const uint64_t a = (static_cast<uint64_t>(r[0]) << 32) | r[1];
    const uint64_t b = (static_cast<uint64_t>(r[2]) << 32) | r[3];
    const double u1 = 1.0 - static_cast<double>(a >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    return {rad * std::cos(ang), rad * std::sin(ang)};
}

double CounterRng::normal(uint64_t c0, uint32_t c1, uint32_t c2) const {
    return normal_pair(c0, c1, c2)[0];
}

double CounterRng::uniform(uint64_t c0, uint32_t c1, uint32_t c2) const {
    const auto r = philox4x32({static_cast<uint32_t>(c0), c1, c2,
                               static_cast<uint32_t>(c0 >> 32)},
                              key_);
    const uint64_t a = (static_cast<uint64_t>(r[0]) << 32) | r[1];
    return 1.0 - static_cast<double>(a >> 11) * 0x1.0p-53;
}

} // namespace mvns
