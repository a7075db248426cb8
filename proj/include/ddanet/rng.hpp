#ifndef DDANET_RNG_HPP
#define DDANET_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ddanet {

// All randomness in the library flows through this wrapper. std::mt19937_64
// has a standardized bit stream, but the standard *distributions* do not, so
// uniform/normal variates are derived from raw bits by hand. This keeps runs
// reproducible across standard library implementations.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Fixed seed-splitting arithmetic: stream k of master seed s.
// Growing the number of streams never reshuffles earlier ones.
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
    return splitmix64(master ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
}

class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // 53-bit uniform in [0,1)
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Box-Muller with cached spare
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    // integer in [0, n); multiply-shift, deterministic across platforms
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<__uint128_t>(gen_()) * n) >> 64);
    }

    std::vector<double> gaussian_vector(int n) {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = normal();
        return v;
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace ddanet

#endif
