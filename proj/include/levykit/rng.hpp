#ifndef LEVYKIT_RNG_HPP
#define LEVYKIT_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

#include "levykit/numerics.hpp"

namespace levykit {

/// Philox4x32-10 counter-based generator. A stream is keyed by
/// (seed, stream id); successive blocks come from incrementing the counter.
/// Streams are independent, so path i always sees the same variates no
/// matter how paths are scheduled across threads.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

    std::uint64_t next_u64() {
        if (have_half_) {
            have_half_ = false;
            return half_;
        }
        const auto block = next_block();
        half_ = (static_cast<std::uint64_t>(block[2]) << 32) | block[3];
        have_half_ = true;
        return (static_cast<std::uint64_t>(block[0]) << 32) | block[1];
    }

    /// uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    /// uniform in (0,1]
    double uniform_pos() { return 1.0 - uniform(); }

    double exponential() { return -std::log(uniform_pos()); }

    double gaussian() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    }

    /// Standard symmetric alpha-stable draw with characteristic function
    /// exp(-|lambda|^alpha), via the Chambers-Mallows-Stuck construction.
    double stable_standard(double alpha) {
        if (alpha == 2.0) return std::sqrt(2.0) * gaussian();  // exp(-lambda^2) = N(0,2)
        const double v = pi * (uniform() - 0.5);  // (-pi/2, pi/2)
        if (alpha == 1.0) return std::tan(v);
        const double w = exponential();
        const double s = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha);
        const double t = std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
        return s * t;
    }

    unsigned poisson(double mean) {
        // inversion by multiplication; fine for the small means used here
        const double limit = std::exp(-mean);
        double prod = 1.0;
        unsigned n = 0;
        while (true) {
            prod *= uniform_pos();
            if (prod <= limit) return n;
            ++n;
            if (n > 1000000u) return n;  // guard against mean misuse
        }
    }

private:
    static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
        const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(p >> 32);
        lo = static_cast<std::uint32_t>(p);
    }

    std::array<std::uint32_t, 4> next_block() {
        constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
        constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
        std::array<std::uint32_t, 4> c = ctr_;
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(M0, c[0], hi0, lo0);
            mulhilo(M1, c[2], hi1, lo1);
            c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
            k0 += W0;
            k1 += W1;
        }
        if (++ctr_[0] == 0) ++ctr_[1];
        return c;
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::uint64_t half_ = 0;
    bool have_half_ = false;
};

}  // namespace levykit

#endif
