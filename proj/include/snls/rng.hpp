#pragma once

#include <cmath>
#include <cstdint>

namespace snls {

// Counter-based RNG: Philox4x32-10. A draw is a pure function of
// (seed, path, step, mode), so ensembles are reproducible and independent of
// evaluation order across threads.

struct Philox4x32 {
    uint32_t counter[4];
    uint32_t key[2];
};

inline void philox_round(Philox4x32& s) {
    constexpr uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    const uint64_t p0 = static_cast<uint64_t>(M0) * s.counter[0];
    const uint64_t p1 = static_cast<uint64_t>(M1) * s.counter[2];
    const uint32_t c0 = static_cast<uint32_t>(p1 >> 32) ^ s.counter[1] ^ s.key[0];
    const uint32_t c1 = static_cast<uint32_t>(p1);
    const uint32_t c2 = static_cast<uint32_t>(p0 >> 32) ^ s.counter[3] ^ s.key[1];
    const uint32_t c3 = static_cast<uint32_t>(p0);
    s.counter[0] = c0;
    s.counter[1] = c1;
    s.counter[2] = c2;
    s.counter[3] = c3;
    s.key[0] += 0x9E3779B9u;  // Weyl increments
    s.key[1] += 0xBB67AE85u;
}

inline void philox10(Philox4x32& s) {
    for (int i = 0; i < 10; ++i) philox_round(s);
}

/// One standard normal, deterministic in (seed, path, step, mode).
/// Uses the Box-Muller transform on the four Philox output words.
inline double normal_draw(uint64_t seed, uint64_t path, uint64_t step, uint64_t mode) {
    Philox4x32 s;
    s.counter[0] = static_cast<uint32_t>(step);
    s.counter[1] = static_cast<uint32_t>(step >> 32);
    s.counter[2] = static_cast<uint32_t>(mode);
    s.counter[3] = static_cast<uint32_t>(path);
    s.key[0] = static_cast<uint32_t>(seed);
    s.key[1] = static_cast<uint32_t>(seed >> 32) ^ static_cast<uint32_t>(path >> 32);
    philox10(s);
    // 53-bit uniforms from the four 32-bit words; u1 shifted into (0, 1].
    const uint64_t a = (static_cast<uint64_t>(s.counter[0]) << 21) ^ (s.counter[1] >> 11);
    const uint64_t b = (static_cast<uint64_t>(s.counter[2]) << 21) ^ (s.counter[3] >> 11);
    const double u1 = (static_cast<double>(a & ((1ull << 53) - 1)) + 1.0) * 0x1p-53;
    const double u2 = static_cast<double>(b & ((1ull << 53) - 1)) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
}

/// Lineage for a noise sample: draws are indexed by (seed, path, step, mode).
struct RngState {
    uint64_t seed = 0;
    uint64_t path = 0;
    uint64_t step = 0;
};

}  // namespace snls
