#pragma once

// Lebesgue, Besov, Triebel-Lizorkin and Hoelder (quasi-)norms of grid functions.
//
// Integrals over T are node means (normalized measure). Exponents p, q range
// over (0, inf]; pass `infinity` for the sup variants. For p or q below 1 the
// functionals are quasi-norms and no triangle inequality is implied.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "torpdo/error.hpp"
#include "torpdo/spectral.hpp"

namespace torpdo {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct BesovParams {
    double r = 0.0;
    double p = 2.0;
    double q = 2.0;
};

/// A computed norm together with the resolution it was computed at.
struct NormValue {
    double value = 0.0;
    int max_block = -1;  ///< largest dyadic index used, -1 for non-dyadic norms
    int resolution = 0;
    bool subsampled = false;  ///< Hoelder scan used stratified shift subsampling

    operator double() const noexcept { return value; }
};

namespace detail {

inline void check_exponent(double e, const char* what)
{
    if (!(e > 0.0))
        throw domain_error(std::string(what) + " must lie in (0, inf], got " + std::to_string(e));
}

/// (sum a_i^e)^{1/e} for a_i >= 0, or max for e = inf; scaled by the maximum so
/// large exponents neither overflow nor underflow.
inline double lq_sum(std::span<const double> a, double e)
{
    double peak = 0.0;
    for (double v : a)
        peak = std::max(peak, v);
    if (peak == 0.0 || std::isinf(e))
        return peak;
    double acc = 0.0;
    for (double v : a)
        acc += std::pow(v / peak, e);
    return peak * std::pow(acc, 1.0 / e);
}

/// (mean a_i^e)^{1/e}, or max for e = inf.
inline double lq_mean(std::span<const double> a, double e)
{
    if (std::isinf(e) || a.empty())
        return lq_sum(a, e);
    return lq_sum(a, e) * std::pow(static_cast<double>(a.size()), -1.0 / e);
}

inline std::vector<double> moduli(std::span<const cplx> v)
{
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](cplx z) { return std::abs(z); });
    return out;
}

inline int require_blocks(const TorusGrid& g)
{
    const int m_max = max_usable_block(g.size());
    if (m_max + 1 < 3)
        throw resolution_error("insufficient resolution: N = " + std::to_string(g.size())
                               + " yields fewer than 3 usable dyadic blocks");
    return m_max;
}

/// Shift indices k (1 <= k <= N/2) scanned by the Hoelder seminorm.
inline std::vector<int> holder_shifts(int n, bool& subsampled)
{
    constexpr int full_scan_limit = 1024;
    constexpr int dense_shifts = 256;
    std::vector<int> shifts;
    subsampled = n > full_scan_limit;
    if (!subsampled) {
        for (int k = 1; k <= n / 2; ++k)
            shifts.push_back(k);
        return shifts;
    }
    // Small shifts dominate for smooth data: keep all of them, then one shift
    // per stratum of width n / full_scan_limit.
    const int stride = n / full_scan_limit;
    for (int k = 1; k <= dense_shifts; ++k)
        shifts.push_back(k);
    for (int k = dense_shifts + stride; k <= n / 2; k += stride)
        shifts.push_back(k);
    return shifts;
}

} // namespace detail

inline NormValue lebesgue_norm(const GridFunction& f, double p)
{
    detail::check_exponent(p, "lebesgue_norm: p");
    const auto a = detail::moduli(f.values());
    return {detail::lq_mean(a, p), -1, f.size(), false};
}

/// Counting-measure norm of the coefficient sequence over the band.
inline NormValue sequence_norm(const SpectrumFunction& spec, double p)
{
    detail::check_exponent(p, "sequence_norm: p");
    const auto a = detail::moduli(spec.coefficients());
    return {detail::lq_sum(a, p), -1, spec.grid().size(), false};
}

/// Weighted block norms 2^{mr} ||block_m f||_{L^p}, m = 0..max_usable_block.
inline std::vector<double> besov_block_norms(const GridFunction& f, double r, double p)
{
    detail::check_exponent(p, "besov: p");
    const int m_max = detail::require_blocks(f.grid());
    const auto blocks = dyadic_blocks(f, m_max);
    std::vector<double> w(blocks.size());
    for (std::size_t m = 0; m < blocks.size(); ++m)
        w[m] = std::exp2(static_cast<double>(m) * r) * lebesgue_norm(blocks[m], p).value;
    return w;
}

inline NormValue besov_norm(const GridFunction& f, const BesovParams& bp)
{
    detail::check_exponent(bp.q, "besov_norm: q");
    const auto w = besov_block_norms(f, bp.r, bp.p);
    return {detail::lq_sum(w, bp.q), static_cast<int>(w.size()) - 1, f.size(), false};
}

inline NormValue triebel_norm(const GridFunction& f, const BesovParams& bp)
{
    detail::check_exponent(bp.p, "triebel_norm: p");
    detail::check_exponent(bp.q, "triebel_norm: q");
    const int m_max = detail::require_blocks(f.grid());
    const auto blocks = dyadic_blocks(f, m_max);
    const int n = f.size();
    std::vector<double> pointwise(static_cast<std::size_t>(n));
    std::vector<double> column(blocks.size());
    for (int j = 0; j < n; ++j) {
        for (std::size_t m = 0; m < blocks.size(); ++m)
            column[m] = std::exp2(static_cast<double>(m) * bp.r) * std::abs(blocks[m][j]);
        pointwise[static_cast<std::size_t>(j)] = detail::lq_sum(column, bp.q);
    }
    return {detail::lq_mean(pointwise, bp.p), m_max, n, false};
}

/// Periodic distance from 0 of the shift y in [0, 2pi).
inline double periodic_distance(double y) noexcept
{
    double t = std::fmod(y, two_pi);
    if (t < 0)
        t += two_pi;
    return std::min(t, two_pi - t);
}

/// sup over grid points x_j and grid shifts y_k != 0 of |f(x_j - y_k) - f(x_j)| / d(y_k)^s.
///
/// Shifts k and N - k visit the same unordered pairs, so only k <= N/2 is
/// scanned. Above N = 1024 the shifts are subsampled (flagged in the result).
inline NormValue holder_seminorm(const GridFunction& f, double s)
{
    if (!(s > 0.0 && s < 1.0))
        throw domain_error("holder_seminorm: s must lie in (0, 1), got " + std::to_string(s));
    const int n = f.size();
    bool subsampled = false;
    const auto shifts = detail::holder_shifts(n, subsampled);
    const auto v = f.values();
    double best = 0.0;
    for (int k : shifts) {
        const double d = two_pi * std::min(k, n - k) / n;
        const double weight = std::pow(d, -s);
        double worst = 0.0;
        for (int j = 0; j < n; ++j) {
            const int shifted = j >= k ? j - k : j - k + n;
            worst = std::max(worst, std::abs(v[static_cast<std::size_t>(shifted)]
                                             - v[static_cast<std::size_t>(j)]));
        }
        best = std::max(best, worst * weight);
    }
    return {best, -1, n, subsampled};
}

inline NormValue holder_norm(const GridFunction& f, double s)
{
    auto semi = holder_seminorm(f, s);
    semi.value += lebesgue_norm(f, infinity).value;
    return semi;
}

/// |f|_{Lambda^s} + ||f||_{L^p}: the Hoelder space re-normed with an L^p part.
inline NormValue mixed_holder_norm(const GridFunction& f, double s, double p)
{
    if (!(p > 1.0 && p < infinity))
        throw domain_error("mixed_holder_norm: p must lie in (1, inf), got " + std::to_string(p));
    auto semi = holder_seminorm(f, s);
    semi.value += lebesgue_norm(f, p).value;
    return semi;
}

} // namespace torpdo
