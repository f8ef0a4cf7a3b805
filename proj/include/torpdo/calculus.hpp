#pragma once

// Operator calculus: the exact discrete symbol of an operator, the asymptotic
// composition formula, the parametrix of an elliptic symbol, and the elliptic
// solve built on it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torpdo/detail/random.hpp"
#include "torpdo/error.hpp"
#include "torpdo/quantization.hpp"
#include "torpdo/spaces.hpp"
#include "torpdo/spectral.hpp"
#include "torpdo/symbols.hpp"

namespace torpdo {

/// sigma_T(x_j, xi) = e^{-i xi x_j} (T e_xi)(x_j) over the grid band (margin 0).
inline FullSymbol symbol_of_operator(const LinearOperator& t)
{
    const TorusGrid g = t.grid();
    const int n = g.size();
    std::vector<cplx> v(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int xi = g.min_frequency(); xi <= g.max_frequency(); ++xi) {
        const auto image = t(GridFunction::mode(g, xi));
        const auto col = static_cast<std::size_t>(g.band_index(xi));
        for (int j = 0; j < n; ++j)
            v[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + col]
                = image[j] * g.unit_root(-static_cast<long long>(xi) * j);
    }
    return {g, g.min_frequency(), n, std::move(v)};
}

namespace detail {

inline void check_same_grid(const FullSymbol& a, const FullSymbol& b, const char* what)
{
    if (!(a.grid() == b.grid()))
        throw band_error(std::string(what) + ": symbols live on different grids");
}

} // namespace detail

/// Symbol of Op(tau) o Op(sigma), computed from the operators themselves.
inline FullSymbol exact_compose(const FullSymbol& tau, const FullSymbol& sigma)
{
    detail::check_same_grid(tau, sigma, "exact_compose");
    return symbol_of_operator(
        LinearOperator::compose(LinearOperator::full_symbol_direct(tau), LinearOperator::full_symbol_direct(sigma)));
}

// ---------------------------------------------------------------------------
// Asymptotic composition

struct AsymptoticExpansion {
    /// terms[gamma] = (1/gamma!) Delta^gamma tau * D_x^{(gamma)} sigma
    std::vector<FullSymbol> terms;
    int order = 0;
    XMultiplier kind = XMultiplier::falling_factorial;

    /// Sum of terms 0..k, restricted to the grid band.
    FullSymbol partial_sum(int k) const
    {
        if (k < 0 || k > order)
            throw domain_error("partial_sum: order " + std::to_string(k) + " outside 0.."
                               + std::to_string(order));
        const TorusGrid g = terms.front().grid();
        FullSymbol s = terms.front().restrict_band(g.min_frequency(), g.max_frequency());
        for (int i = 1; i <= k; ++i)
            s += terms[static_cast<std::size_t>(i)];
        return s;
    }
};

inline AsymptoticExpansion compose_asymptotic(const FullSymbol& tau, const FullSymbol& sigma, int order,
                                              XMultiplier kind = XMultiplier::falling_factorial)
{
    detail::check_same_grid(tau, sigma, "compose_asymptotic");
    if (order < 0)
        throw domain_error("compose_asymptotic: order must be non-negative");
    detail::check_margin(order, tau.right_margin());
    AsymptoticExpansion out;
    out.order = order;
    out.kind = kind;
    double factorial = 1.0;
    for (int gamma = 0; gamma <= order; ++gamma) {
        if (gamma > 0)
            factorial *= gamma;
        FullSymbol term = difference(tau, gamma) * x_difference_derivative(sigma, gamma, kind);
        term *= cplx(1.0 / factorial);
        out.terms.push_back(std::move(term));
    }
    return out;
}

/// Frequencies lo <= |xi| <= hi on which partial sums are compared with the exact symbol.
struct FrequencyWindow {
    int lo = 0;
    int hi = 0;

    /// N/4 <= |xi| <= 3N/8.
    static FrequencyWindow composition_default(const TorusGrid& g) { return {g.size() / 4, 3 * g.size() / 8}; }
};

/// sup over nodes and the window of |partial_sum(k) - exact|.
inline double composition_residual(const AsymptoticExpansion& e, const FullSymbol& exact, int k,
                                   FrequencyWindow w)
{
    const auto s = e.partial_sum(k);
    const TorusGrid g = exact.grid();
    double worst = 0.0;
    for (int xi = g.min_frequency(); xi <= g.max_frequency(); ++xi) {
        const int a = std::abs(xi);
        if (a < w.lo || a > w.hi)
            continue;
        for (int j = 0; j < g.size(); ++j)
            worst = std::max(worst, std::abs(s(j, xi) - exact(j, xi)));
    }
    return worst;
}

inline double composition_residual(const AsymptoticExpansion& e, const FullSymbol& exact, int k)
{
    return composition_residual(e, exact, k, FrequencyWindow::composition_default(exact.grid()));
}

// ---------------------------------------------------------------------------
// Parametrix

/// Random probes with Gaussian coefficients on lo <= |xi| <= hi (DC excluded when lo > 0).
inline std::vector<GridFunction> band_limited_probes(const TorusGrid& g, int lo, int hi, int count,
                                                     std::uint64_t seed)
{
    if (lo < 0 || hi < lo || hi > g.max_frequency())
        throw band_error("band_limited_probes: support " + std::to_string(lo) + " <= |xi| <= "
                         + std::to_string(hi) + " does not fit the band of N = " + std::to_string(g.size()));
    detail::NormalStream rng(seed);
    std::vector<GridFunction> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) {
        auto spec = SpectrumFunction::zeros(g);
        for (int xi = -hi; xi <= hi; ++xi)
            if (std::abs(xi) >= lo)
                spec.at(xi) = rng.complex_normal();
        out.push_back(inverse_transform(spec));
    }
    return out;
}

struct ParametrixOptions {
    int order = 2;
    /// Ellipticity is required on |xi| >= min_abs_xi.
    int min_abs_xi = 1;
    /// Probe support probe_min <= |xi| <= probe_max; -1 selects N/16 and N/8.
    int probe_min = -1;
    int probe_max = -1;
    int probe_count = 20;
    std::uint64_t seed = 1;
    XMultiplier kind = XMultiplier::falling_factorial;
};

struct ParametrixResult {
    FullSymbol q;
    int order = 0;
    double ellipticity = 0.0;
    /// ||Op(q) Op(sigma) f - f||_2 / ||f||_2 per probe
    std::vector<double> residuals;

    double max_residual() const
    {
        return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
    }
};

namespace detail {

inline double relative_l2(const GridFunction& approx, const GridFunction& exact)
{
    const double denom = lebesgue_norm(exact, 2.0).value;
    const double num = lebesgue_norm(approx - exact, 2.0).value;
    return denom == 0.0 ? num : num / denom;
}

inline void resolve_probe_band(const TorusGrid& g, ParametrixOptions& o)
{
    if (o.probe_min < 0)
        o.probe_min = std::max(1, g.size() / 16);
    if (o.probe_max < 0)
        o.probe_max = g.size() / 8;
}

inline double require_elliptic(const FullSymbol& sigma, double m, int min_abs_xi)
{
    const double margin = ellipticity_margin(sigma, m, min_abs_xi);
    if (!is_elliptic(margin))
        throw not_elliptic_error("symbol not elliptic at this resolution: margin "
                                 + std::to_string(margin) + " below threshold "
                                 + std::to_string(ellipticity_threshold) + " (m = " + std::to_string(m)
                                 + ", |xi| >= " + std::to_string(min_abs_xi) + ")");
    return margin;
}

} // namespace detail

/// Left parametrix q = q_0 + ... + q_K of an elliptic symbol of order m:
///   q_0 = 1/sigma,  q_k = -q_0 sum_{gamma=1..k} (1/gamma!) Delta^gamma q_{k-gamma} D_x^{(gamma)} sigma.
/// q_0 is set to 0 where sigma vanishes exactly.
inline ParametrixResult parametrix(const FullSymbol& sigma, double m, ParametrixOptions opts = {})
{
    if (opts.order < 0)
        throw domain_error("parametrix: order K must be non-negative");
    const TorusGrid g = sigma.grid();
    const double margin = detail::require_elliptic(sigma, m, opts.min_abs_xi);
    detail::check_margin(opts.order, sigma.right_margin());
    detail::resolve_probe_band(g, opts);

    FullSymbol q0 = sigma;
    for (int j = 0; j < g.size(); ++j)
        for (int xi = sigma.first_xi(); xi <= sigma.last_xi(); ++xi) {
            cplx& v = q0.at(j, xi);
            v = v == cplx{} ? cplx{} : 1.0 / v;
        }

    std::vector<FullSymbol> dsigma;
    for (int gamma = 0; gamma <= opts.order; ++gamma)
        dsigma.push_back(x_difference_derivative(sigma, gamma, opts.kind));

    std::vector<FullSymbol> qk{q0};
    for (int k = 1; k <= opts.order; ++k) {
        std::optional<FullSymbol> acc;
        double factorial = 1.0;
        for (int gamma = 1; gamma <= k; ++gamma) {
            factorial *= gamma;
            FullSymbol t = difference(qk[static_cast<std::size_t>(k - gamma)], gamma)
                           * dsigma[static_cast<std::size_t>(gamma)];
            t *= cplx(1.0 / factorial);
            if (acc)
                *acc += t;
            else
                acc = std::move(t);
        }
        FullSymbol next = q0 * *acc;
        next *= cplx(-1.0);
        qk.push_back(std::move(next));
    }
    FullSymbol q = qk.front();
    for (std::size_t k = 1; k < qk.size(); ++k)
        q += qk[k];

    ParametrixResult out{q, opts.order, margin, {}};
    const auto probes = band_limited_probes(g, opts.probe_min, opts.probe_max, opts.probe_count, opts.seed);
    const auto op_sigma = LinearOperator::full_symbol(sigma);
    const auto op_q = LinearOperator::full_symbol(q);
    for (const auto& f : probes)
        out.residuals.push_back(detail::relative_l2(op_q(op_sigma(f)), f));
    return out;
}

struct EllipticOptions {
    ParametrixOptions parametrix{};
    double s = 0.5;  ///< smoothness of the data f
    double p = 2.0;  ///< L^p part of the mixed Hoelder norm
};

struct EllipticSolution {
    GridFunction u;
    ParametrixResult parametrix;
    double residual = 0.0;  ///< ||Op(sigma) u - f||_2 / ||f||_2
    double r = 0.0;         ///< min(s + m - 1/2, 0.95)
    double s = 0.0;
    double p = 0.0;
    NormValue u_norm;  ///< mixed Hoelder norm B^r_{inf,inf,p} of u
    NormValue f_norm;  ///< mixed Hoelder norm B^s_{inf,inf,p} of f
    double ratio = 0.0;
};

/// u = Op(q) f with q the parametrix of sigma, plus the a priori regularity report.
inline EllipticSolution elliptic_solve(const FullSymbol& sigma, double m, const GridFunction& f,
                                       EllipticOptions opts = {})
{
    auto pr = parametrix(sigma, m, opts.parametrix);
    const double r = std::min(opts.s + m - 0.5, 0.95);
    if (!(r > 0.0))
        throw domain_error("elliptic_solve: target smoothness r = s + m - 1/2 must be positive, got "
                           + std::to_string(r));
    auto u = LinearOperator::full_symbol(pr.q)(f);
    const auto back = LinearOperator::full_symbol(sigma)(u);
    EllipticSolution out{u, std::move(pr), detail::relative_l2(back, f), r, opts.s, opts.p, {}, {}, 0.0};
    out.u_norm = mixed_holder_norm(u, r, opts.p);
    out.f_norm = mixed_holder_norm(f, opts.s, opts.p);
    out.ratio = out.f_norm.value == 0.0 ? 0.0 : out.u_norm.value / out.f_norm.value;
    return out;
}

} // namespace torpdo
