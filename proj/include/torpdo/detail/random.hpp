#pragma once

// Seeded normal deviates. Only the raw mt19937_64 stream is used (its output is
// fixed by the standard), so regenerated probes are bit-identical on every
// conforming library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace torpdo::detail {

class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1).
    double uniform()
    {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; pairs are cached.
    double normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform(), u2 = uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        spare_ = rad * std::sin(ang);
        have_spare_ = true;
        return rad * std::cos(ang);
    }

    std::complex<double> complex_normal()
    {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

    /// e^{i theta} with theta uniform.
    std::complex<double> phase() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace torpdo::detail
