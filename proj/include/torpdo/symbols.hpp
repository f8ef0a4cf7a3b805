#pragma once

// Discrete symbols on T x Z and the difference / derivative calculus on them.
//
// A symbol is sampled on an extended band {-N/2 - A, ..., N/2 - 1 + A} so that
// forward differences of order <= A evaluated on the grid band never leave the
// samples. Differences shrink the band on the right; x-derivatives act
// column-wise through the x-spectrum.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "torpdo/error.hpp"
#include "torpdo/spectral.hpp"

namespace torpdo {

inline constexpr int default_band_margin = 4;

/// Japanese bracket <xi> = (1 + xi^2)^{1/2}.
inline double japanese_bracket(double xi) noexcept { return std::sqrt(1.0 + xi * xi); }

/// Translation-invariant symbol xi -> sigma(xi).
class MultiplierSymbol {
public:
    MultiplierSymbol(TorusGrid grid, int first_xi, std::vector<cplx> values)
        : grid_(grid), first_(first_xi), values_(std::move(values))
    {
        if (first_ > grid_.min_frequency() || last_xi() < grid_.max_frequency())
            throw band_error("MultiplierSymbol: band [" + std::to_string(first_) + ", "
                             + std::to_string(last_xi()) + "] does not cover the grid band");
    }

    /// Samples fn(xi) on the grid band extended by `margin` on both sides.
    template <class F>
    static MultiplierSymbol sample(TorusGrid grid, F&& fn, int margin = default_band_margin)
    {
        const int first = grid.min_frequency() - margin;
        const int count = grid.size() + 2 * margin;
        std::vector<cplx> v(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
            v[static_cast<std::size_t>(i)] = cplx(fn(first + i));
        return {grid, first, std::move(v)};
    }

    const TorusGrid& grid() const noexcept { return grid_; }
    int first_xi() const noexcept { return first_; }
    int last_xi() const noexcept { return first_ + static_cast<int>(values_.size()) - 1; }
    int left_margin() const noexcept { return grid_.min_frequency() - first_; }
    int right_margin() const noexcept { return last_xi() - grid_.max_frequency(); }
    bool contains(int xi) const noexcept { return xi >= first_ && xi <= last_xi(); }

    cplx operator()(int xi) const
    {
        if (!contains(xi))
            throw band_error("MultiplierSymbol: xi = " + std::to_string(xi) + " outside band");
        return values_[static_cast<std::size_t>(xi - first_)];
    }

    std::span<const cplx> values() const noexcept { return values_; }

private:
    TorusGrid grid_;
    int first_;
    std::vector<cplx> values_;
};

/// Symbol (x_j, xi) -> sigma(x_j, xi), stored row-major: one row per grid node.
class FullSymbol {
public:
    FullSymbol(TorusGrid grid, int first_xi, int band_size, std::vector<cplx> values)
        : grid_(grid), first_(first_xi), count_(band_size), values_(std::move(values))
    {
        if (values_.size() != static_cast<std::size_t>(grid_.size()) * static_cast<std::size_t>(count_))
            throw domain_error("FullSymbol: value count does not match grid x band");
        if (first_ > grid_.min_frequency() || last_xi() < grid_.max_frequency())
            throw band_error("FullSymbol: band [" + std::to_string(first_) + ", "
                             + std::to_string(last_xi()) + "] does not cover the grid band");
    }

    /// Samples fn(x, xi) on grid nodes x the extended band.
    template <class F>
    static FullSymbol sample(TorusGrid grid, F&& fn, int margin = default_band_margin)
    {
        const int first = grid.min_frequency() - margin;
        const int count = grid.size() + 2 * margin;
        std::vector<cplx> v(static_cast<std::size_t>(grid.size()) * static_cast<std::size_t>(count));
        for (int j = 0; j < grid.size(); ++j) {
            const double x = grid.node(j);
            for (int i = 0; i < count; ++i)
                v[static_cast<std::size_t>(j) * static_cast<std::size_t>(count) + static_cast<std::size_t>(i)]
                    = cplx(fn(x, first + i));
        }
        return {grid, first, count, std::move(v)};
    }

    /// The x-independent full symbol of a multiplier.
    static FullSymbol from_multiplier(const MultiplierSymbol& m)
    {
        const int count = m.last_xi() - m.first_xi() + 1;
        const auto g = m.grid();
        std::vector<cplx> v;
        v.reserve(static_cast<std::size_t>(g.size()) * static_cast<std::size_t>(count));
        for (int j = 0; j < g.size(); ++j)
            v.insert(v.end(), m.values().begin(), m.values().end());
        return {g, m.first_xi(), count, std::move(v)};
    }

    const TorusGrid& grid() const noexcept { return grid_; }
    int first_xi() const noexcept { return first_; }
    int last_xi() const noexcept { return first_ + count_ - 1; }
    int band_size() const noexcept { return count_; }
    int left_margin() const noexcept { return grid_.min_frequency() - first_; }
    int right_margin() const noexcept { return last_xi() - grid_.max_frequency(); }
    bool contains(int xi) const noexcept { return xi >= first_ && xi <= last_xi(); }

    cplx operator()(int j, int xi) const
    {
        if (!contains(xi))
            throw band_error("FullSymbol: xi = " + std::to_string(xi) + " outside band");
        return values_[index(j, xi)];
    }

    cplx& at(int j, int xi) { return values_.at(index(j, xi)); }

    /// Column xi as a function of x.
    std::vector<cplx> column(int xi) const
    {
        std::vector<cplx> c(static_cast<std::size_t>(grid_.size()));
        for (int j = 0; j < grid_.size(); ++j)
            c[static_cast<std::size_t>(j)] = (*this)(j, xi);
        return c;
    }

    /// Whether every column is constant in x (bitwise).
    bool x_independent() const
    {
        const std::size_t stride = static_cast<std::size_t>(count_);
        for (std::size_t j = 1; j < static_cast<std::size_t>(grid_.size()); ++j)
            for (std::size_t i = 0; i < stride; ++i)
                if (values_[j * stride + i] != values_[i])
                    return false;
        return true;
    }

    /// Copy restricted to the band [lo, hi].
    FullSymbol restrict_band(int lo, int hi) const
    {
        if (lo < first_ || hi > last_xi())
            throw band_error("FullSymbol::restrict_band: requested band exceeds available band");
        const int count = hi - lo + 1;
        std::vector<cplx> v(static_cast<std::size_t>(grid_.size()) * static_cast<std::size_t>(count));
        for (int j = 0; j < grid_.size(); ++j)
            for (int xi = lo; xi <= hi; ++xi)
                v[static_cast<std::size_t>(j) * static_cast<std::size_t>(count)
                  + static_cast<std::size_t>(xi - lo)] = values_[index(j, xi)];
        return {grid_, lo, count, std::move(v)};
    }

    std::span<const cplx> values() const noexcept { return values_; }

    FullSymbol& operator+=(const FullSymbol& o) { return combine(o, [](cplx& a, cplx b) { a += b; }); }
    FullSymbol& operator-=(const FullSymbol& o) { return combine(o, [](cplx& a, cplx b) { a -= b; }); }
    FullSymbol& operator*=(cplx c)
    {
        for (auto& v : values_)
            v *= c;
        return *this;
    }
    friend FullSymbol operator+(FullSymbol a, const FullSymbol& b) { return a += b; }
    friend FullSymbol operator-(FullSymbol a, const FullSymbol& b) { return a -= b; }
    friend FullSymbol operator*(cplx c, FullSymbol a) { return a *= c; }

    /// Pointwise product on the common band.
    friend FullSymbol operator*(const FullSymbol& a, const FullSymbol& b)
    {
        if (!(a.grid_ == b.grid_))
            throw domain_error("FullSymbol: grids differ");
        const int lo = std::max(a.first_, b.first_), hi = std::min(a.last_xi(), b.last_xi());
        auto out = a.restrict_band(lo, hi);
        for (int j = 0; j < a.grid_.size(); ++j)
            for (int xi = lo; xi <= hi; ++xi)
                out.values_[out.index(j, xi)] *= b.values_[b.index(j, xi)];
        return out;
    }

private:
    std::size_t index(int j, int xi) const noexcept
    {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(count_)
               + static_cast<std::size_t>(xi - first_);
    }

    template <class Op>
    FullSymbol& combine(const FullSymbol& o, Op op)
    {
        if (!(grid_ == o.grid_))
            throw domain_error("FullSymbol: grids differ");
        const int lo = std::max(first_, o.first_), hi = std::min(last_xi(), o.last_xi());
        if (lo != first_ || hi != last_xi())
            *this = restrict_band(lo, hi);
        for (int j = 0; j < grid_.size(); ++j)
            for (int xi = lo; xi <= hi; ++xi)
                op(values_[index(j, xi)], o.values_[o.index(j, xi)]);
        return *this;
    }

    TorusGrid grid_;
    int first_;
    int count_;
    std::vector<cplx> values_;
};

// ---------------------------------------------------------------------------
// Difference calculus in xi

namespace detail {

/// alpha-fold forward difference of a sequence; the result is alpha shorter.
inline std::vector<cplx> forward_difference(std::span<const cplx> v, int alpha)
{
    std::vector<cplx> out(v.begin(), v.end());
    for (int a = 0; a < alpha; ++a) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i)
            out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

inline void check_margin(int alpha, int right_margin)
{
    if (alpha < 0)
        throw domain_error("difference order must be non-negative");
    if (alpha > right_margin)
        throw band_error("insufficient band margin: difference of order " + std::to_string(alpha)
                         + " needs margin " + std::to_string(alpha) + ", have "
                         + std::to_string(right_margin));
}

} // namespace detail

/// (Delta^alpha sigma)(xi) with Delta sigma(xi) = sigma(xi + 1) - sigma(xi).
inline MultiplierSymbol difference(const MultiplierSymbol& sigma, int alpha)
{
    detail::check_margin(alpha, sigma.right_margin());
    return {sigma.grid(), sigma.first_xi(), detail::forward_difference(sigma.values(), alpha)};
}

inline FullSymbol difference(const FullSymbol& sigma, int alpha)
{
    detail::check_margin(alpha, sigma.right_margin());
    const int n = sigma.grid().size();
    const int count = sigma.band_size() - alpha;
    std::vector<cplx> v;
    v.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(count));
    const auto all = sigma.values();
    for (int j = 0; j < n; ++j) {
        auto row = all.subspan(static_cast<std::size_t>(j) * static_cast<std::size_t>(sigma.band_size()),
                               static_cast<std::size_t>(sigma.band_size()));
        auto d = detail::forward_difference(row, alpha);
        v.insert(v.end(), d.begin(), d.end());
    }
    return {sigma.grid(), sigma.first_xi(), count, std::move(v)};
}

// ---------------------------------------------------------------------------
// Spectral calculus in x

/// Which polynomial in the x-frequency eta a derivative-type operator multiplies by.
enum class XMultiplier {
    derivative,        ///< (i eta)^beta: the plain beta-th derivative d/dx
    falling_factorial  ///< eta (eta - 1) ... (eta - gamma + 1): toroidal D_x^{(gamma)}
};

namespace detail {

inline constexpr double x_tail_tolerance = 1e-8;

/// Applies eta-polynomial `weight` to the x-spectrum of every column.
template <class Weight>
FullSymbol x_spectral_map(const FullSymbol& sigma, Weight weight)
{
    const TorusGrid g = sigma.grid();
    const int n = g.size();
    const int count = sigma.band_size();
    std::vector<cplx> out(sigma.values().size());
    std::vector<cplx> col(static_cast<std::size_t>(n));
    for (int i = 0; i < count; ++i) {
        const int xi = sigma.first_xi() + i;
        bool constant = true;
        for (int j = 0; j < n; ++j) {
            col[static_cast<std::size_t>(j)] = sigma(j, xi);
            constant = constant && col[static_cast<std::size_t>(j)] == col[0];
        }
        std::vector<cplx> mapped(static_cast<std::size_t>(n));
        if (constant) {
            // Exact for x-independent columns: only eta = 0 is present.
            const cplx w0 = weight(0);
            for (auto& m : mapped)
                m = w0 * col[0];
        } else {
            auto spec = dft(col, fft_direction::forward);
            double total = 0.0, tail = 0.0;
            for (int k = 0; k < n; ++k) {
                const int eta = k < n / 2 ? k : k - n;
                const double e = std::norm(spec[static_cast<std::size_t>(k)]);
                total += e;
                if (std::abs(eta) >= n / 4)
                    tail += e;
                spec[static_cast<std::size_t>(k)] *= (eta == -n / 2) ? cplx{} : weight(eta);
            }
            if (total > 0.0 && tail > x_tail_tolerance * total)
                throw resolution_error("x-resolution insufficient: column xi = " + std::to_string(xi)
                                       + " carries relative x-spectral energy "
                                       + std::to_string(tail / total) + " in |eta| >= N/4");
            mapped = dft(spec, fft_direction::backward);
            for (auto& m : mapped)
                m /= static_cast<double>(n);
        }
        for (int j = 0; j < n; ++j)
            out[static_cast<std::size_t>(j) * static_cast<std::size_t>(count) + static_cast<std::size_t>(i)]
                = mapped[static_cast<std::size_t>(j)];
    }
    return {g, sigma.first_xi(), count, std::move(out)};
}

} // namespace detail

/// beta-fold spectral x-derivative: multiplies the x-spectrum of each column by (i eta)^beta.
/// Throws resolution_error when a column has x-spectral energy above 1e-8 (relative) in |eta| >= N/4.
inline FullSymbol x_derivative(const FullSymbol& sigma, int beta)
{
    if (beta < 0)
        throw domain_error("x_derivative: order must be non-negative");
    if (beta == 0)
        return sigma;
    return detail::x_spectral_map(sigma, [beta](int eta) {
        return std::pow(cplx(0.0, static_cast<double>(eta)), beta);
    });
}

/// D_x^{(gamma)} in either the plain (-i d/dx)^gamma or the falling-factorial form.
inline FullSymbol x_difference_derivative(const FullSymbol& sigma, int gamma, XMultiplier kind)
{
    if (gamma < 0)
        throw domain_error("x_difference_derivative: order must be non-negative");
    if (gamma == 0)
        return sigma;
    if (kind == XMultiplier::derivative)
        return detail::x_spectral_map(sigma, [gamma](int eta) {
            return cplx(std::pow(static_cast<double>(eta), gamma), 0.0);
        });
    return detail::x_spectral_map(sigma, [gamma](int eta) {
        double w = 1.0;
        for (int k = 0; k < gamma; ++k)
            w *= static_cast<double>(eta - k);
        return cplx(w, 0.0);
    });
}

// ---------------------------------------------------------------------------
// Symbol-class constants

enum class WeightMode {
    bracket,     ///< <xi>^{order}
    homogeneous  ///< |xi|^{order}, xi = 0 excluded
};

/// Parameters of a symbol-class estimate |Delta^a d_x^b sigma| <= C w(xi)^{m - rho a + delta b}.
struct ClassSpec {
    double m = 0.0;
    double rho = 1.0;
    double delta = 0.0;
    int alpha_max = 0;
    int beta_max = 0;
    WeightMode weight = WeightMode::bracket;

    /// |sigma(xi)| <= C |xi|^{-rho} for xi != 0.
    static ClassSpec rho_condition(double rho)
    {
        return {-rho, 0.0, 0.0, 0, 0, WeightMode::homogeneous};
    }
    /// |d_x^b Delta^a sigma| <= C |xi|^{-rho - a}, a <= alpha_max, b <= beta_max.
    static ClassSpec mixed_condition(double rho, int alpha_max, int beta_max)
    {
        return {-rho, 1.0, 0.0, alpha_max, beta_max, WeightMode::homogeneous};
    }
    /// Discrete Hoermander class S^m_{rho,delta}.
    static ClassSpec hormander(double m, double rho, double delta, int alpha_max, int beta_max)
    {
        return {m, rho, delta, alpha_max, beta_max, WeightMode::bracket};
    }

    double exponent(int alpha, int beta) const noexcept { return m - rho * alpha + delta * beta; }
};

struct ClassWitness {
    int alpha = 0;
    int beta = 0;
    int x_index = 0;
    int xi = 0;
    double value = 0.0;
};

struct ClassReport {
    ClassSpec spec;
    /// constants[alpha][beta]
    std::vector<std::vector<double>> constants;
    /// witnesses[alpha][beta] attains constants[alpha][beta]
    std::vector<std::vector<ClassWitness>> witnesses;
    ClassWitness worst;

    double constant(int alpha, int beta) const
    {
        return constants.at(static_cast<std::size_t>(alpha)).at(static_cast<std::size_t>(beta));
    }
    double max_constant() const { return worst.value; }
};

namespace detail {

inline double class_weight(const ClassSpec& spec, int xi, int alpha, int beta)
{
    const double e = spec.exponent(alpha, beta);
    const double base = spec.weight == WeightMode::bracket ? japanese_bracket(xi) : std::abs(xi);
    return std::pow(base, e);
}

} // namespace detail

/// C_{alpha,beta} = sup over grid nodes and the grid band of |Delta^alpha d_x^beta sigma| / weight(xi).
inline ClassReport class_constant(const FullSymbol& sigma, const ClassSpec& spec)
{
    if (spec.alpha_max < 0 || spec.beta_max < 0)
        throw domain_error("class_constant: derivative orders must be non-negative");
    detail::check_margin(spec.alpha_max, sigma.right_margin());
    const TorusGrid g = sigma.grid();
    bool any = false;
    for (int xi = g.min_frequency(); xi <= g.max_frequency(); ++xi)
        any = any || spec.weight == WeightMode::bracket || xi != 0;
    if (!any)
        throw domain_error("class_constant: homogeneous weight needs a frequency xi != 0 in the band");

    ClassReport rep;
    rep.spec = spec;
    rep.constants.assign(static_cast<std::size_t>(spec.alpha_max + 1),
                         std::vector<double>(static_cast<std::size_t>(spec.beta_max + 1), 0.0));
    rep.witnesses.assign(static_cast<std::size_t>(spec.alpha_max + 1),
                         std::vector<ClassWitness>(static_cast<std::size_t>(spec.beta_max + 1)));
    rep.worst = {};
    bool have_worst = false;
    for (int b = 0; b <= spec.beta_max; ++b) {
        const FullSymbol db = x_derivative(sigma, b);
        for (int a = 0; a <= spec.alpha_max; ++a) {
            const FullSymbol d = difference(db, a);
            ClassWitness w{a, b, 0, g.min_frequency(), 0.0};
            bool have = false;
            for (int xi = g.min_frequency(); xi <= g.max_frequency(); ++xi) {
                if (spec.weight == WeightMode::homogeneous && xi == 0)
                    continue;
                const double weight = detail::class_weight(spec, xi, a, b);
                for (int j = 0; j < g.size(); ++j) {
                    const double v = std::abs(d(j, xi)) / weight;
                    if (!have || v > w.value) {
                        w = {a, b, j, xi, v};
                        have = true;
                    }
                }
            }
            rep.constants[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = w.value;
            rep.witnesses[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = w;
            if (!have_worst || w.value > rep.worst.value) {
                rep.worst = w;
                have_worst = true;
            }
        }
    }
    return rep;
}

inline ClassReport class_constant(const MultiplierSymbol& sigma, const ClassSpec& spec)
{
    return class_constant(FullSymbol::from_multiplier(sigma), spec);
}

/// Re-evaluates |Delta^alpha d_x^beta sigma| / weight at a witness point.
inline double evaluate_witness(const FullSymbol& sigma, const ClassSpec& spec, const ClassWitness& w)
{
    const FullSymbol d = difference(x_derivative(sigma, w.beta), w.alpha);
    return std::abs(d(w.x_index, w.xi)) / detail::class_weight(spec, w.xi, w.alpha, w.beta);
}

// ---------------------------------------------------------------------------
// Marcinkiewicz variation and ellipticity

struct MarcinkiewiczProfile {
    double sup_norm = 0.0;
    std::vector<double> block_variation;  ///< sum over 2^j <= |xi| <= 2^{j+1} of |Delta sigma|
    double constant = 0.0;
};

/// ||sigma||_inf over the grid band plus max_j of the dyadic-block total variation.
/// Blocks j are used while both ends of {2^j <= |xi| <= 2^{j+1}} (and xi + 1) lie in the band.
inline MarcinkiewiczProfile marcinkiewicz_profile(const MultiplierSymbol& sigma)
{
    const TorusGrid g = sigma.grid();
    MarcinkiewiczProfile out;
    for (int xi = g.min_frequency(); xi <= g.max_frequency(); ++xi)
        out.sup_norm = std::max(out.sup_norm, std::abs(sigma(xi)));
    for (int j = 0;; ++j) {
        const long long hi = 2LL << j;
        if (hi + 1 > sigma.last_xi() || -hi < sigma.first_xi())
            break;
        double var = 0.0;
        const int h = static_cast<int>(hi), lo = 1 << j;
        for (int xi = lo; xi <= h; ++xi)
            var += std::abs(sigma(xi + 1) - sigma(xi));
        for (int xi = -h; xi <= -lo; ++xi)
            var += std::abs(sigma(xi + 1) - sigma(xi));
        out.block_variation.push_back(var);
    }
    if (out.block_variation.size() < 4)
        throw band_error("marcinkiewicz_constant: band must cover dyadic blocks j = 0..3");
    out.constant = out.sup_norm + *std::max_element(out.block_variation.begin(), out.block_variation.end());
    return out;
}

inline double marcinkiewicz_constant(const MultiplierSymbol& sigma)
{
    return marcinkiewicz_profile(sigma).constant;
}

inline constexpr double ellipticity_threshold = 1e-6;

/// inf over nodes and |xi| >= M of |sigma(x, xi)| <xi>^{-m}; zero means not elliptic at this resolution.
inline double ellipticity_margin(const FullSymbol& sigma, double m, int min_abs_xi)
{
    if (min_abs_xi < 0)
        throw domain_error("ellipticity_margin: M must be non-negative");
    const TorusGrid g = sigma.grid();
    double inf = std::numeric_limits<double>::infinity();
    for (int xi = g.min_frequency(); xi <= g.max_frequency(); ++xi) {
        if (std::abs(xi) < min_abs_xi)
            continue;
        const double w = std::pow(japanese_bracket(xi), -m);
        for (int j = 0; j < g.size(); ++j)
            inf = std::min(inf, std::abs(sigma(j, xi)) * w);
    }
    if (std::isinf(inf))
        throw domain_error("ellipticity_margin: M exceeds the band");
    return inf;
}

inline double ellipticity_margin(const MultiplierSymbol& sigma, double m, int min_abs_xi)
{
    return ellipticity_margin(FullSymbol::from_multiplier(sigma), m, min_abs_xi);
}

inline bool is_elliptic(double margin) noexcept { return margin >= ellipticity_threshold; }

} // namespace torpdo
