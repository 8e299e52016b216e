#pragma once

#include <cmath>
#include <cstdint>

namespace sdde {

/// Philox4x32-10 counter-based generator. Every draw is a pure function of
/// (key, counter), so increments are reproducible in any evaluation order.
struct Philox4x32 {
    struct Block {
        std::uint32_t v[4];
    };

    static Block round10(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3,
                         std::uint32_t k0, std::uint32_t k1) {
        constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
        constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
        for (int r = 0; r < 10; ++r) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            c0 = n0;
            c1 = lo1;
            c2 = n2;
            c3 = lo0;
            k0 += W0;
            k1 += W1;
        }
        return Block{{c0, c1, c2, c3}};
    }
};

/// Two uniform doubles in (0, 1] from one philox block.
inline void philox_uniform2(std::uint64_t key, std::uint64_t ctr_lo, std::uint64_t ctr_hi,
                            double& u1, double& u2) {
    const auto b = Philox4x32::round10(
        static_cast<std::uint32_t>(ctr_lo), static_cast<std::uint32_t>(ctr_lo >> 32),
        static_cast<std::uint32_t>(ctr_hi), static_cast<std::uint32_t>(ctr_hi >> 32),
        static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32));
    const std::uint64_t a = (static_cast<std::uint64_t>(b.v[0]) << 32) | b.v[1];
    const std::uint64_t c = (static_cast<std::uint64_t>(b.v[2]) << 32) | b.v[3];
    constexpr double scale = 1.0 / 9007199254740992.0; // 2^-53
    u1 = static_cast<double>((a >> 11) + 1) * scale;   // (0, 1]
    u2 = static_cast<double>(c >> 11) * scale;         // [0, 1)
}

/// Standard normal draw keyed by (seed; a, b, c) via Box-Muller.
inline double philox_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    double u1, u2;
    // pack: ctr_lo <- a, ctr_hi <- (b in low 32 | c in high 32)
    philox_uniform2(seed, a, b | (c << 32), u1, u2);
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

/// Uniform double in [0, 1) keyed by (seed; a, b, c).
inline double philox_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                             std::uint64_t c) {
    double u1, u2;
    philox_uniform2(seed, a, b | (c << 32), u1, u2);
    return u2;
}

} // namespace sdde
