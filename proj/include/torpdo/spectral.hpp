#pragma once

// Discrete Fourier analysis on the circle T = [0, 2pi) sampled at N nodes.
//
// Conventions:
//   * nodes x_j = 2 pi j / N, j = 0..N-1, N even and >= 8;
//   * frequency band xi in {-N/2, ..., N/2 - 1};
//   * integrals over T use normalized Haar measure, so
//       fhat(xi) = (1/N) sum_j f(x_j) e^{-i xi x_j},   f(x_j) = sum_xi fhat(xi) e^{i xi x_j}
//     are exact inverses of each other;
//   * dyadic block m collects 2^m <= |xi| < 2^{m+1}; the DC coefficient is
//     adjoined to block 0.

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "torpdo/detail/fft.hpp"
#include "torpdo/error.hpp"

namespace torpdo {

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

class TorusGrid {
public:
    explicit TorusGrid(int n_points) : n_(n_points)
    {
        if (n_points < 8 || n_points % 2 != 0)
            throw domain_error("TorusGrid: number of points must be even and >= 8, got "
                               + std::to_string(n_points));
    }

    int size() const noexcept { return n_; }
    double node(int j) const noexcept { return two_pi * j / n_; }
    int min_frequency() const noexcept { return -n_ / 2; }
    int max_frequency() const noexcept { return n_ / 2 - 1; }
    bool contains_frequency(int xi) const noexcept { return xi >= -n_ / 2 && xi < n_ / 2; }

    /// Index of xi in a band-ordered coefficient vector.
    std::size_t band_index(int xi) const noexcept { return static_cast<std::size_t>(xi + n_ / 2); }

    /// Reduces an arbitrary integer into the residue class 0..N-1.
    int wrap(long long k) const noexcept
    {
        long long r = k % n_;
        return static_cast<int>(r < 0 ? r + n_ : r);
    }

    /// e^{i 2 pi k / N}, with k reduced first so the angle is always in [0, 2pi).
    cplx unit_root(long long k) const { return std::polar(1.0, two_pi * wrap(k) / n_); }

    friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

private:
    int n_;
};

class GridFunction {
public:
    GridFunction(TorusGrid grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values))
    {
        if (values_.size() != static_cast<std::size_t>(grid_.size()))
            throw domain_error("GridFunction: expected " + std::to_string(grid_.size())
                               + " samples, got " + std::to_string(values_.size()));
    }

    static GridFunction zeros(TorusGrid grid)
    {
        return {grid, std::vector<cplx>(static_cast<std::size_t>(grid.size()))};
    }

    template <class F>
    static GridFunction sample(TorusGrid grid, F&& fn)
    {
        std::vector<cplx> v(static_cast<std::size_t>(grid.size()));
        for (int j = 0; j < grid.size(); ++j)
            v[static_cast<std::size_t>(j)] = cplx(fn(grid.node(j)));
        return {grid, std::move(v)};
    }

    /// e^{i xi x} sampled on the grid.
    static GridFunction mode(TorusGrid grid, int xi)
    {
        std::vector<cplx> v(static_cast<std::size_t>(grid.size()));
        for (int j = 0; j < grid.size(); ++j)
            v[static_cast<std::size_t>(j)] = grid.unit_root(static_cast<long long>(xi) * j);
        return {grid, std::move(v)};
    }

    const TorusGrid& grid() const noexcept { return grid_; }
    int size() const noexcept { return grid_.size(); }
    std::span<const cplx> values() const noexcept { return values_; }
    cplx operator[](int j) const { return values_[static_cast<std::size_t>(j)]; }

    GridFunction& operator+=(const GridFunction& o)
    {
        check_same(o);
        for (std::size_t i = 0; i < values_.size(); ++i)
            values_[i] += o.values_[i];
        return *this;
    }
    GridFunction& operator-=(const GridFunction& o)
    {
        check_same(o);
        for (std::size_t i = 0; i < values_.size(); ++i)
            values_[i] -= o.values_[i];
        return *this;
    }
    GridFunction& operator*=(cplx c)
    {
        for (auto& v : values_)
            v *= c;
        return *this;
    }

    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(cplx c, GridFunction a) { return a *= c; }
    friend GridFunction operator*(GridFunction a, cplx c) { return a *= c; }

    /// Pointwise product.
    friend GridFunction pointwise(const GridFunction& a, const GridFunction& b)
    {
        a.check_same(b);
        std::vector<cplx> v(a.values_.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = a.values_[i] * b.values_[i];
        return {a.grid_, std::move(v)};
    }

private:
    void check_same(const GridFunction& o) const
    {
        if (!(grid_ == o.grid_))
            throw domain_error("GridFunction: grids differ ("
                               + std::to_string(grid_.size()) + " vs "
                               + std::to_string(o.grid_.size()) + " points)");
    }

    TorusGrid grid_;
    std::vector<cplx> values_;
};

/// Fourier coefficients over the band {-N/2, ..., N/2-1}, stored in ascending xi.
class SpectrumFunction {
public:
    SpectrumFunction(TorusGrid grid, std::vector<cplx> coeffs) : grid_(grid), coeffs_(std::move(coeffs))
    {
        if (coeffs_.size() != static_cast<std::size_t>(grid_.size()))
            throw domain_error("SpectrumFunction: expected " + std::to_string(grid_.size())
                               + " coefficients, got " + std::to_string(coeffs_.size()));
    }

    static SpectrumFunction zeros(TorusGrid grid)
    {
        return {grid, std::vector<cplx>(static_cast<std::size_t>(grid.size()))};
    }

    /// Fills coefficient xi with fn(xi) across the band.
    template <class F>
    static SpectrumFunction from_coefficients(TorusGrid grid, F&& fn)
    {
        std::vector<cplx> c(static_cast<std::size_t>(grid.size()));
        for (int xi = grid.min_frequency(); xi <= grid.max_frequency(); ++xi)
            c[grid.band_index(xi)] = cplx(fn(xi));
        return {grid, std::move(c)};
    }

    const TorusGrid& grid() const noexcept { return grid_; }
    std::span<const cplx> coefficients() const noexcept { return coeffs_; }

    cplx operator()(int xi) const
    {
        if (!grid_.contains_frequency(xi))
            return {};
        return coeffs_[grid_.band_index(xi)];
    }

    cplx& at(int xi) { return coeffs_.at(grid_.band_index(xi)); }

private:
    TorusGrid grid_;
    std::vector<cplx> coeffs_;
};

inline SpectrumFunction forward_transform(const GridFunction& f)
{
    const TorusGrid& g = f.grid();
    const int n = g.size();
    auto raw = detail::dft(f.values(), detail::fft_direction::forward);
    std::vector<cplx> c(static_cast<std::size_t>(n));
    const double scale = 1.0 / n;
    for (int xi = g.min_frequency(); xi <= g.max_frequency(); ++xi)
        c[g.band_index(xi)] = raw[static_cast<std::size_t>(g.wrap(xi))] * scale;
    return {g, std::move(c)};
}

inline GridFunction inverse_transform(const SpectrumFunction& spec)
{
    const TorusGrid& g = spec.grid();
    const int n = g.size();
    std::vector<cplx> raw(static_cast<std::size_t>(n));
    for (int xi = g.min_frequency(); xi <= g.max_frequency(); ++xi)
        raw[static_cast<std::size_t>(g.wrap(xi))] = spec(xi);
    return {g, detail::dft(raw, detail::fft_direction::backward)};
}

// ---------------------------------------------------------------------------
// Dyadic (Littlewood-Paley) blocks

/// Whether xi belongs to block m (block 0 also owns xi = 0).
constexpr bool in_dyadic_block(int xi, int m) noexcept
{
    const long long a = xi < 0 ? -static_cast<long long>(xi) : xi;
    if (m == 0)
        return a < 2;
    return a >= (1LL << m) && a < (1LL << (m + 1));
}

/// Dyadic index of a frequency (0 for xi in {-1, 0, 1}).
constexpr int dyadic_index(int xi) noexcept
{
    const unsigned a = static_cast<unsigned>(xi < 0 ? -xi : xi);
    return a < 2 ? 0 : static_cast<int>(std::bit_width(a)) - 1;
}

/// Largest m with 2^m < N/2; norms use blocks 0..max_usable_block only.
constexpr int max_usable_block(int n_points) noexcept
{
    int m = 0;
    while ((2LL << m) < n_points / 2)
        ++m;
    return m;
}

/// Largest m whose block still meets the band (it may hold only xi = -N/2).
constexpr int top_block(int n_points) noexcept
{
    int m = 0;
    while ((2LL << m) <= n_points / 2)
        ++m;
    return m;
}

inline SpectrumFunction restrict_to_block(const SpectrumFunction& spec, int m)
{
    const TorusGrid& g = spec.grid();
    if (m < 0 || m > top_block(g.size()))
        throw resolution_error("block exceeds resolution: dyadic block " + std::to_string(m)
                               + " lies outside the band of N = " + std::to_string(g.size()));
    return SpectrumFunction::from_coefficients(
        g, [&](int xi) { return in_dyadic_block(xi, m) ? spec(xi) : cplx{}; });
}

inline GridFunction dyadic_block(const SpectrumFunction& spec, int m)
{
    return inverse_transform(restrict_to_block(spec, m));
}

inline GridFunction dyadic_block(const GridFunction& f, int m)
{
    return dyadic_block(forward_transform(f), m);
}

/// Blocks 0..m_max of f, sharing one forward transform.
inline std::vector<GridFunction> dyadic_blocks(const GridFunction& f, int m_max)
{
    const auto spec = forward_transform(f);
    std::vector<GridFunction> out;
    out.reserve(static_cast<std::size_t>(m_max + 1));
    for (int m = 0; m <= m_max; ++m)
        out.push_back(dyadic_block(spec, m));
    return out;
}

/// Normalized L^2 inner product <f, g> = (1/N) sum conj(f_j) g_j.
inline cplx inner_product(const GridFunction& f, const GridFunction& g)
{
    if (!(f.grid() == g.grid()))
        throw domain_error("inner_product: grids differ");
    cplx acc{};
    for (int j = 0; j < f.size(); ++j)
        acc += std::conj(f[j]) * g[j];
    return acc / static_cast<double>(f.size());
}

} // namespace torpdo
