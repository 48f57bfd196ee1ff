#pragma once

#include <array>
#include <cstdint>

namespace mvns {

// Philox4x32-10 counter-based generator. Every random number in the project
// is a pure function of (seed, stream tag, counter), so any draw can be
// reproduced in isolation and parallel schedules cannot change results.
std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> counter,
                                   std::array<uint32_t, 2> key);

// Independent stream domains. Mixed into the key so e.g. noise increments
// and initial-data sampling never collide on the same counters.
enum class StreamTag : uint32_t {
    noise = 0x01,
    init = 0x02,
    calibration = 0x03,
    assumption = 0x04,
    metric_test = 0x05,
};

class CounterRng {
  public:
    CounterRng(uint64_t seed, StreamTag tag);

    // Two iid N(0,1) draws at the given counter coordinates.
    std::array<double, 2> normal_pair(uint64_t c0, uint32_t c1, uint32_t c2) const;
    double normal(uint64_t c0, uint32_t c1, uint32_t c2) const;
    // Uniform in (0,1].
    double uniform(uint64_t c0, uint32_t c1, uint32_t c2) const;

  private:
    std::array<uint32_t, 2> key_;
};

// Sequential convenience view over a CounterRng for sampling-style code.
class RngSequence {
  public:
    RngSequence(uint64_t seed, StreamTag tag, uint32_t stream = 0)
        : rng_(seed, tag), stream_(stream) {}
    double normal() { return rng_.normal(next_++, stream_, 0); }
    double uniform() { return rng_.uniform(next_++, stream_, 1); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  private:
    CounterRng rng_;
    uint32_t stream_;
    uint64_t next_ = 0;
};

} // namespace mvns
