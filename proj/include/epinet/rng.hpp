#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace epinet {

// splitmix64; used to derive independent sub-streams from one seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x5851f42d4c957f2dULL));
}

// mt19937_64 wrapper with hand-rolled distributions so that outputs are
// identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform on [0,1) with 53 random bits
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // uniform on (0,1], safe as a log() argument
    double uniform_pos() { return 1.0 - uniform01(); }

    // uniform integer in [0, n)
    std::uint64_t uniform_below(std::uint64_t n) {
        // rejection sampling on the top bits; unbiased
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = eng_();
            if (r >= threshold) return r % n;
        }
    }

    bool bernoulli(double p) { return uniform01() < p; }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    double normal() {
        // Marsaglia polar method
        for (;;) {
            const double u = 2.0 * uniform01() - 1.0;
            const double v = 2.0 * uniform01() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    std::int64_t poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        if (lambda < 30.0) {
            // Knuth product method
            const double limit = std::exp(-lambda);
            double prod = 1.0;
            std::int64_t k = -1;
            do {
                ++k;
                prod *= uniform01();
            } while (prod > limit);
            return k;
        }
        return poisson_ptrs(lambda);
    }

    std::int64_t binomial(std::int64_t n, double p) {
        if (p <= 0.0 || n <= 0) return 0;
        if (p >= 1.0) return n;
        std::int64_t k = 0;
        for (std::int64_t i = 0; i < n; ++i) k += bernoulli(p) ? 1 : 0;
        return k;
    }

    double gamma(double shape, double rate) {
        // Marsaglia-Tsang; shape < 1 handled by the boosting identity
        double boost = 1.0;
        double a = shape;
        if (a < 1.0) {
            boost = std::pow(uniform_pos(), 1.0 / a);
            a += 1.0;
        }
        const double d = a - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return boost * d * v / rate;
        }
    }

private:
    // Hoermann's PTRS transformed-rejection sampler, valid for lambda >= 10.
    std::int64_t poisson_ptrs(double lambda) {
        const double slam = std::sqrt(lambda);
        const double loglam = std::log(lambda);
        const double b = 0.931 + 2.53 * slam;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double vr = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            const double u = uniform01() - 0.5;
            const double v = uniform01();
            const double us = 0.5 - std::abs(u);
            const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
            if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(k);
            if (k < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
                k * loglam - lambda - std::lgamma(k + 1.0)) {
                return static_cast<std::int64_t>(k);
            }
        }
    }

    std::mt19937_64 eng_;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace epinet
