#pragma once

// Thin wrapper over FFTW's complex 1-D transforms. Plans are created once per
// (size, direction) under a mutex and executed through the new-array API,
// which FFTW documents as thread-safe.

#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include <fftw3.h>

namespace torpdo::detail {

using cplx = std::complex<double>;

enum class fft_direction { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

class fft_plan_cache {
public:
    static fft_plan_cache& instance()
    {
        static fft_plan_cache cache;
        return cache;
    }

    fftw_plan plan(int n, fft_direction dir)
    {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, static_cast<int>(dir));
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;
        std::vector<cplx> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
        fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                       reinterpret_cast<fftw_complex*>(out.data()),
                                       static_cast<int>(dir), FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

    fft_plan_cache(const fft_plan_cache&) = delete;
    fft_plan_cache& operator=(const fft_plan_cache&) = delete;

    ~fft_plan_cache()
    {
        for (auto& [key, p] : plans_)
            fftw_destroy_plan(p);
    }

private:
    fft_plan_cache() = default;

    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

/// Unnormalized DFT: out[k] = sum_j in[j] exp(sign * 2 pi i j k / n).
inline std::vector<cplx> dft(std::span<const cplx> in, fft_direction dir)
{
    const int n = static_cast<int>(in.size());
    std::vector<cplx> src(in.begin(), in.end());
    std::vector<cplx> out(in.size());
    fftw_plan p = fft_plan_cache::instance().plan(n, dir);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(src.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

} // namespace torpdo::detail
