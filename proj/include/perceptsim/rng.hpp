#pragma once

#include <cstdint>
#include <random>

namespace perceptsim {

/// Seeded variate stream used by the simulator.
///
/// Engine: MT19937-64 (Matsumoto & Nishimura), whose output sequence is fixed
/// by the C++ standard, so a seed yields the same 64-bit words on every
/// conforming library. Uniforms take the top 53 bits and sit at the centre of
/// their 2^-53 cell, so they lie strictly inside (0, 1). Normals use one
/// uniform each through Wichura's AS241 inverse normal CDF (PPND16, ~1e-16
/// relative accuracy). The standard library distributions are not used because
/// their algorithms differ between implementations.
class VariateStream {
public:
    explicit VariateStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform();
    double standard_normal();
    double normal(double mean, double sd) { return mean + sd * standard_normal(); }

private:
    std::mt19937_64 engine_;
};

/// Inverse of the standard normal CDF for p in (0, 1) (AS241 / PPND16).
double normal_quantile(double p);

}  // namespace perceptsim
