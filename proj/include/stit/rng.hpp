#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace stit {

// SplitMix64 step; used only to derive well-separated seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// One deterministic random stream.  All draws go through uniform01() so the
// byte-level output of a run is a pure function of the seed sequence.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : eng_(seed) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // Uniform on [a, b).
    double uniform(double a, double b) {
        return a + (b - a) * uniform01();
    }

    // Strictly positive Exp(1) draw (a zero draw would stall jump times).
    double exponential1() {
        for (;;) {
            double u = uniform01();
            double z = -std::log1p(-u);
            if (z > 0.0) return z;
        }
    }

    // Exp(rate).
    double exponential(double rate) { return exponential1() / rate; }

    // Uniform integer in {0, ..., n-1}.
    std::size_t index(std::size_t n) {
        std::size_t i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

private:
    std::mt19937_64 eng_;
};

// The three independent streams one replication consumes:
//   u — discrete selection uniforms,
//   v — holding times / lifetimes,
//   g — hyperplane proposals.
// Splitting them keeps the constructions aligned draw-for-draw and makes
// replications reproducible independently of each other.
struct RngStreams {
    RngStream u, v, g;

    static RngStreams make(std::uint64_t seed, std::uint64_t replication = 0) {
        std::uint64_t s = seed;
        std::uint64_t base = splitmix64(s);
        base ^= 0x9e3779b97f4a7c15ULL * (replication + 1);
        std::uint64_t b = base;
        std::uint64_t su = splitmix64(b);
        std::uint64_t sv = splitmix64(b);
        std::uint64_t sg = splitmix64(b);
        return RngStreams{RngStream(su), RngStream(sv), RngStream(sg)};
    }
};

}  // namespace stit
