#pragma once

// Counter-based random streams.
//
// Draw c (c = 1, 2, ...) of stream s under seed k is
//     mix(key + c * 0x9E3779B97F4A7C15),  key = mix(k ^ mix(s + 0x9E3779B97F4A7C15))
// where mix is the SplitMix64 finalizer. Trials and bootstrap replicates use
// their index as the stream id, so any subset of them can be regenerated
// independently and in any order.

#include <cstdint>

namespace hoi {

std::uint64_t splitmix64_mix(std::uint64_t x);

// Inverse of the standard normal CDF for p in (0, 1).
double inverse_normal_cdf(double p);

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    // Uniform on the open interval (0, 1) with 53-bit resolution.
    double uniform();
    // Uniform integer in [0, bound), bound >= 1 (Lemire's rejection method).
    std::uint64_t below(std::uint64_t bound);
    // Standard normal via the inverse CDF of one uniform draw.
    double normal();
    // Unit-rate exponential, -log(U).
    double exponential();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace hoi
