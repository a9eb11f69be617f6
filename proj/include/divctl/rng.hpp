#pragma once

#include <cmath>
#include <cstdint>

namespace divctl {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256** seeded from a (seed, stream) key. Each Monte Carlo path owns
// one stream, so results do not depend on which thread ran which path.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t k = seed;
        const std::uint64_t a = splitmix64(k);
        std::uint64_t m = index ^ 0xD1B54A32D192ED03ULL;
        const std::uint64_t b = splitmix64(m);
        std::uint64_t sm = a ^ (b * 0xC2B2AE3D27D4EB4FULL);
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on the open interval (0, 1).
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

// 256-block ziggurat (Doornik's ZIGNOR layout, with the density at the block
// edges tabulated so a rejection test costs one exp). The simulator draws two
// normals per Euler step for ~10^10 steps per acceptance run, which is why
// this exists instead of std::normal_distribution.
struct ZigguratTables {
    static constexpr int kBlocks = 256;
    static constexpr double kR = 3.6541528853610088;
    static constexpr double kV = 4.92867323399e-3;
    double x[kBlocks + 1];
    double f[kBlocks + 1];  // exp(-x^2/2) at the block edges
    double ratio[kBlocks];
    ZigguratTables();
};

extern const ZigguratTables kZiggurat;

// Marsaglia's tail method beyond kR.
inline double normal_tail(Stream& s, bool negative) {
    double x, y;
    do {
        x = std::log(s.uniform()) / ZigguratTables::kR;
        y = std::log(s.uniform());
    } while (-2.0 * y < x * x);
    return negative ? x - ZigguratTables::kR : ZigguratTables::kR - x;
}

inline double standard_normal(Stream& s) {
    const ZigguratTables& z = kZiggurat;
    for (;;) {
        const std::uint64_t r = s.next();
        // Bits 11..63 as a signed integer give u uniform on (-1, 1).
        const double u = (static_cast<double>(static_cast<std::int64_t>(r) >> 11) + 0.5) * 0x1.0p-52;
        const unsigned i = static_cast<unsigned>(r & 0xFF);
        if (std::abs(u) < z.ratio[i]) return u * z.x[i];
        if (i == 0) return normal_tail(s, u < 0.0);
        const double xx = u * z.x[i];
        if (z.f[i + 1] + s.uniform() * (z.f[i] - z.f[i + 1]) < std::exp(-0.5 * xx * xx)) return xx;
    }
}

}  // namespace divctl
