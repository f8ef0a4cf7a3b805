#pragma once

// Quantization of multiplier and full symbols:
//   Op(sigma) f(x_j) = sum_{xi in band} e^{i xi x_j} sigma(x_j, xi) fhat(xi).
//
// apply_full_symbol is the O(N^2) reference: each row sums over xi in
// ascending order, so results are bit-reproducible. The x-spectral fast path
// must agree with it to 1e-10 and is only used behind LinearOperator.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "torpdo/error.hpp"
#include "torpdo/spectral.hpp"
#include "torpdo/symbols.hpp"

namespace torpdo {

namespace detail {

inline void check_grid(const TorusGrid& symbol_grid, const TorusGrid& f_grid, const char* what)
{
    if (!(symbol_grid == f_grid))
        throw band_error(std::string(what) + ": band mismatch (symbol sampled for N = "
                         + std::to_string(symbol_grid.size()) + ", function has N = "
                         + std::to_string(f_grid.size()) + ")");
}

inline std::vector<cplx> unit_roots(const TorusGrid& g)
{
    std::vector<cplx> tw(static_cast<std::size_t>(g.size()));
    for (int k = 0; k < g.size(); ++k)
        tw[static_cast<std::size_t>(k)] = g.unit_root(k);
    return tw;
}

} // namespace detail

inline GridFunction apply_multiplier(const MultiplierSymbol& sigma, const GridFunction& f)
{
    detail::check_grid(sigma.grid(), f.grid(), "apply_multiplier");
    const auto fh = forward_transform(f);
    return inverse_transform(
        SpectrumFunction::from_coefficients(f.grid(), [&](int xi) { return sigma(xi) * fh(xi); }));
}

/// Direct O(N^2) evaluation of Op(sigma) f.
inline GridFunction apply_full_symbol(const FullSymbol& sigma, const GridFunction& f)
{
    detail::check_grid(sigma.grid(), f.grid(), "apply_full_symbol");
    const TorusGrid g = f.grid();
    const int n = g.size();
    const auto fh = forward_transform(f);
    const auto tw = detail::unit_roots(g);
    std::vector<cplx> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        cplx acc{};
        for (int xi = g.min_frequency(); xi <= g.max_frequency(); ++xi)
            acc += tw[static_cast<std::size_t>(g.wrap(static_cast<long long>(j) * xi))] * sigma(j, xi) * fh(xi);
        out[static_cast<std::size_t>(j)] = acc;
    }
    return {g, std::move(out)};
}

/// Expansion sigma(x_j, xi) = sum_eta c(eta, xi) e^{i eta x_j} over the grid band,
/// keeping the x-frequencies eta whose coefficients are not negligible.
class XSpectralForm {
public:
    explicit XSpectralForm(const FullSymbol& sigma, double drop_tolerance = 1e-14) : grid_(sigma.grid())
    {
        const TorusGrid g = grid_;
        const int n = g.size();
        std::vector<std::vector<cplx>> by_eta(static_cast<std::size_t>(n),
                                              std::vector<cplx>(static_cast<std::size_t>(n)));
        std::vector<cplx> col(static_cast<std::size_t>(n));
        double peak = 0.0;
        for (int xi = g.min_frequency(); xi <= g.max_frequency(); ++xi) {
            for (int j = 0; j < n; ++j)
                col[static_cast<std::size_t>(j)] = sigma(j, xi);
            const auto spec = detail::dft(col, detail::fft_direction::forward);
            for (int k = 0; k < n; ++k) {
                const cplx c = spec[static_cast<std::size_t>(k)] / static_cast<double>(n);
                by_eta[static_cast<std::size_t>(k)][g.band_index(xi)] = c;
                peak = std::max(peak, std::abs(c));
            }
        }
        for (int k = 0; k < n; ++k) {
            const auto& row = by_eta[static_cast<std::size_t>(k)];
            double m = 0.0;
            for (const cplx& c : row)
                m = std::max(m, std::abs(c));
            if (m > drop_tolerance * peak) {
                etas_.push_back(k);
                coeffs_.push_back(row);
            }
        }
    }

    const TorusGrid& grid() const noexcept { return grid_; }
    std::size_t active_modes() const noexcept { return etas_.size(); }

    GridFunction apply(const GridFunction& f) const
    {
        detail::check_grid(grid_, f.grid(), "XSpectralForm::apply");
        const TorusGrid g = grid_;
        const auto fh = forward_transform(f);
        auto out = GridFunction::zeros(g);
        for (std::size_t e = 0; e < etas_.size(); ++e) {
            const auto& c = coeffs_[e];
            auto part = inverse_transform(SpectrumFunction::from_coefficients(
                g, [&](int xi) { return c[g.band_index(xi)] * fh(xi); }));
            out += pointwise(GridFunction::mode(g, etas_[e]), part);
        }
        return out;
    }

private:
    TorusGrid grid_;
    std::vector<int> etas_;
    std::vector<std::vector<cplx>> coeffs_;
};

inline GridFunction apply_full_symbol_fast(const FullSymbol& sigma, const GridFunction& f)
{
    return XSpectralForm(sigma).apply(f);
}

// ---------------------------------------------------------------------------
// Frozen-coefficient operators

/// Index of the grid node equal to z (within 1e-12), or throws.
inline int node_index(const TorusGrid& g, double z)
{
    const double t = z / two_pi * g.size();
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-9 || r < 0 || r >= g.size())
        throw domain_error("point z = " + std::to_string(z) + " is not a grid node");
    return static_cast<int>(r);
}

/// The multiplier xi -> sigma(x_j, xi) at a fixed node.
inline MultiplierSymbol freeze_at(const FullSymbol& sigma, int node)
{
    if (node < 0 || node >= sigma.grid().size())
        throw domain_error("freeze: node index " + std::to_string(node) + " out of range");
    std::vector<cplx> v(static_cast<std::size_t>(sigma.band_size()));
    for (int xi = sigma.first_xi(); xi <= sigma.last_xi(); ++xi)
        v[static_cast<std::size_t>(xi - sigma.first_xi())] = sigma(node, xi);
    return {sigma.grid(), sigma.first_xi(), std::move(v)};
}

inline MultiplierSymbol freeze(const FullSymbol& sigma, double z)
{
    return freeze_at(sigma, node_index(sigma.grid(), z));
}

/// y -> sum_{xi in band} e^{i y xi} sigma(z, xi), sampled at the grid nodes y_k.
inline GridFunction schwartz_kernel(const FullSymbol& sigma, int node)
{
    const auto frozen = freeze_at(sigma, node);
    return inverse_transform(
        SpectrumFunction::from_coefficients(sigma.grid(), [&](int xi) { return frozen(xi); }));
}

/// Normalized circular convolution (k * f)(x_j) = (1/N) sum_k k(y_k) f(x_j - y_k), computed directly.
inline GridFunction circular_convolve(const GridFunction& kernel, const GridFunction& f)
{
    if (!(kernel.grid() == f.grid()))
        throw domain_error("circular_convolve: grids differ");
    const int n = f.size();
    std::vector<cplx> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        cplx acc{};
        for (int k = 0; k < n; ++k)
            acc += kernel[k] * f[j >= k ? j - k : j - k + n];
        out[static_cast<std::size_t>(j)] = acc / static_cast<double>(n);
    }
    return {f.grid(), std::move(out)};
}

// ---------------------------------------------------------------------------
// Operator handle

/// A linear operator on grid functions at a fixed resolution.
class LinearOperator {
public:
    enum class Kind { multiplier, full_symbol, composed, external_matrix };

    static LinearOperator multiplier(MultiplierSymbol sigma)
    {
        auto s = std::make_shared<const MultiplierSymbol>(std::move(sigma));
        return {Kind::multiplier, s->grid(), [s](const GridFunction& f) { return apply_multiplier(*s, f); }};
    }

    /// Uses the x-spectral path when the symbol has few active x-modes, the direct sum otherwise.
    static LinearOperator full_symbol(FullSymbol sigma)
    {
        const TorusGrid g = sigma.grid();
        auto form = std::make_shared<const XSpectralForm>(sigma);
        if (form->active_modes() <= static_cast<std::size_t>(std::max(1, g.size() / 8)))
            return {Kind::full_symbol, g, [form](const GridFunction& f) { return form->apply(f); }};
        return full_symbol_direct(std::move(sigma));
    }

    /// Always the direct O(N^2) sum.
    static LinearOperator full_symbol_direct(FullSymbol sigma)
    {
        auto s = std::make_shared<const FullSymbol>(std::move(sigma));
        return {Kind::full_symbol, s->grid(), [s](const GridFunction& f) { return apply_full_symbol(*s, f); }};
    }

    /// Dense N x N matrix acting on sample vectors, row-major.
    static LinearOperator matrix(TorusGrid grid, std::vector<cplx> entries)
    {
        const auto n = static_cast<std::size_t>(grid.size());
        if (entries.size() != n * n)
            throw domain_error("LinearOperator::matrix: expected N*N entries");
        auto m = std::make_shared<const std::vector<cplx>>(std::move(entries));
        return {Kind::external_matrix, grid, [m, grid, n](const GridFunction& f) {
                    std::vector<cplx> out(n);
                    for (std::size_t i = 0; i < n; ++i) {
                        cplx acc{};
                        for (std::size_t k = 0; k < n; ++k)
                            acc += (*m)[i * n + k] * f[static_cast<int>(k)];
                        out[i] = acc;
                    }
                    return GridFunction(grid, std::move(out));
                }};
    }

    /// outer o inner
    static LinearOperator compose(LinearOperator outer, LinearOperator inner)
    {
        if (!(outer.grid_ == inner.grid_))
            throw domain_error("LinearOperator::compose: resolutions differ");
        return {Kind::composed, outer.grid_,
                [o = std::move(outer), i = std::move(inner)](const GridFunction& f) { return o(i(f)); }};
    }

    static LinearOperator identity(TorusGrid grid)
    {
        return multiplier(MultiplierSymbol::sample(grid, [](int) { return cplx(1.0); }));
    }

    static LinearOperator zero(TorusGrid grid)
    {
        return multiplier(MultiplierSymbol::sample(grid, [](int) { return cplx{}; }));
    }

    GridFunction operator()(const GridFunction& f) const
    {
        if (!(f.grid() == grid_))
            throw band_error("LinearOperator: function resolution " + std::to_string(f.size())
                             + " differs from operator resolution " + std::to_string(grid_.size()));
        return apply_(f);
    }

    Kind kind() const noexcept { return kind_; }
    const TorusGrid& grid() const noexcept { return grid_; }
    int resolution() const noexcept { return grid_.size(); }

private:
    LinearOperator(Kind k, TorusGrid g, std::function<GridFunction(const GridFunction&)> fn)
        : kind_(k), grid_(g), apply_(std::move(fn))
    {
    }

    Kind kind_;
    TorusGrid grid_;
    std::function<GridFunction(const GridFunction&)> apply_;
};

} // namespace torpdo
