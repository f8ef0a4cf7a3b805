#pragma once

// A closed expression language for symbols sigma(x, xi) and functions f(x).
//
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := '-' unary | primary
//   primary := number | 'i' | 'pi' | name '(' [expr (',' expr)*] ')' | '(' expr ')'
//
// Frequency forms (xi in Z):
//   bracket_pow(a)      <xi>^a
//   abs_pow(a)          |xi|^a, with value 0 at xi = 0
//   resolvent(c[, ci])  (i xi + c + i ci)^{-1}
//   riesz()             i xi / <xi>
//   riesz_sign()        i xi / |xi|, with value 0 at xi = 0
//   xi_pow(k)           xi^k, k a non-negative integer
// Position forms (x in [0, 2pi)):
//   cos(k), sin(k)      cos(k x), sin(k x)
//   exp(k)              e^{i k x}
//   lacunary(s, M)      sum_{m=0}^{M} 2^{-m s} e^{i 2^m x}
//   cusp(s)             |2 sin(x/2)|^s
//
// Arguments of forms must be constant expressions. No user code is executed.

#include <cctype>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "torpdo/error.hpp"
#include "torpdo/spectral.hpp"
#include "torpdo/symbols.hpp"

namespace torpdo {

class parse_error : public error {
public:
    using error::error;
};

class SymbolExpr {
public:
    static SymbolExpr parse(std::string_view text)
    {
        Parser p{text, 0};
        auto node = p.expression();
        p.skip_space();
        if (p.pos != text.size())
            p.fail("unexpected trailing input");
        return SymbolExpr(std::string(text), std::move(node));
    }

    cplx operator()(double x, int xi) const { return node_->eval(x, xi); }

    bool depends_on_x() const noexcept { return node_->uses_x; }
    bool depends_on_xi() const noexcept { return node_->uses_xi; }
    const std::string& text() const noexcept { return text_; }

    MultiplierSymbol multiplier(TorusGrid grid, int margin = default_band_margin) const
    {
        if (depends_on_x())
            throw domain_error("symbol '" + text_ + "' depends on x; a Fourier multiplier was required");
        return MultiplierSymbol::sample(grid, [this](int xi) { return (*this)(0.0, xi); }, margin);
    }

    FullSymbol full(TorusGrid grid, int margin = default_band_margin) const
    {
        return FullSymbol::sample(grid, [this](double x, int xi) { return (*this)(x, xi); }, margin);
    }

    GridFunction function(TorusGrid grid) const
    {
        if (depends_on_xi())
            throw domain_error("expression '" + text_ + "' depends on xi; a function of x was required");
        return GridFunction::sample(grid, [this](double x) { return (*this)(x, 0); });
    }

private:
    struct Node {
        std::function<cplx(double, int)> eval;
        bool uses_x = false;
        bool uses_xi = false;
    };
    using NodePtr = std::shared_ptr<const Node>;

    SymbolExpr(std::string text, NodePtr node) : text_(std::move(text)), node_(std::move(node)) {}

    static NodePtr make(std::function<cplx(double, int)> f, bool ux, bool uxi)
    {
        return std::make_shared<const Node>(Node{std::move(f), ux, uxi});
    }

    struct Parser {
        std::string_view src;
        std::size_t pos;

        [[noreturn]] void fail(const std::string& msg) const
        {
            throw parse_error("symbol expression: " + msg + " at offset " + std::to_string(pos)
                              + " in '" + std::string(src) + "'");
        }

        void skip_space()
        {
            while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
                ++pos;
        }

        bool accept(char c)
        {
            skip_space();
            if (pos < src.size() && src[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        void expect(char c)
        {
            if (!accept(c))
                fail(std::string("expected '") + c + "'");
        }

        NodePtr expression()
        {
            auto lhs = term();
            for (;;) {
                if (accept('+')) {
                    auto rhs = term();
                    lhs = make([lhs, rhs](double x, int xi) { return lhs->eval(x, xi) + rhs->eval(x, xi); },
                               lhs->uses_x || rhs->uses_x, lhs->uses_xi || rhs->uses_xi);
                } else if (accept('-')) {
                    auto rhs = term();
                    lhs = make([lhs, rhs](double x, int xi) { return lhs->eval(x, xi) - rhs->eval(x, xi); },
                               lhs->uses_x || rhs->uses_x, lhs->uses_xi || rhs->uses_xi);
                } else {
                    return lhs;
                }
            }
        }

        NodePtr term()
        {
            auto lhs = unary();
            while (accept('*')) {
                auto rhs = unary();
                lhs = make([lhs, rhs](double x, int xi) { return lhs->eval(x, xi) * rhs->eval(x, xi); },
                           lhs->uses_x || rhs->uses_x, lhs->uses_xi || rhs->uses_xi);
            }
            return lhs;
        }

        NodePtr unary()
        {
            if (accept('-')) {
                auto inner = unary();
                return make([inner](double x, int xi) { return -inner->eval(x, xi); }, inner->uses_x,
                            inner->uses_xi);
            }
            return primary();
        }

        NodePtr primary()
        {
            skip_space();
            if (pos >= src.size())
                fail("unexpected end of input");
            const char c = src[pos];
            if (c == '(') {
                ++pos;
                auto e = expression();
                expect(')');
                return e;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
                return constant(number());
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
                return named(identifier());
            fail(std::string("unexpected character '") + c + "'");
        }

        double number()
        {
            const std::string rest(src.substr(pos));
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(rest, &used);
            } catch (const std::exception&) {
                fail("malformed number");
            }
            pos += used;
            return v;
        }

        std::string identifier()
        {
            const std::size_t start = pos;
            while (pos < src.size()
                   && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
                ++pos;
            return std::string(src.substr(start, pos - start));
        }

        static NodePtr constant(cplx v)
        {
            return make([v](double, int) { return v; }, false, false);
        }

        double real_arg(const NodePtr& a, const std::string& name)
        {
            if (a->uses_x || a->uses_xi)
                fail("argument of " + name + " must be constant");
            const cplx v = a->eval(0.0, 0);
            if (v.imag() != 0.0)
                fail("argument of " + name + " must be real");
            return v.real();
        }

        int integer_arg(const NodePtr& a, const std::string& name)
        {
            const double v = real_arg(a, name);
            if (v != std::round(v) || std::abs(v) > 1e6)
                fail("argument of " + name + " must be an integer");
            return static_cast<int>(v);
        }

        NodePtr named(const std::string& name)
        {
            if (name == "i")
                return constant(cplx(0.0, 1.0));
            if (name == "pi")
                return constant(cplx(std::numbers::pi, 0.0));
            expect('(');
            std::vector<NodePtr> args;
            if (!accept(')')) {
                do
                    args.push_back(expression());
                while (accept(','));
                expect(')');
            }
            auto arity = [&](std::size_t lo, std::size_t hi) {
                if (args.size() < lo || args.size() > hi)
                    fail(name + " takes " + std::to_string(lo)
                         + (lo == hi ? "" : "-" + std::to_string(hi)) + " argument(s)");
            };

            if (name == "bracket_pow") {
                arity(1, 1);
                const double a = real_arg(args[0], name);
                return make([a](double, int xi) { return cplx(std::pow(japanese_bracket(xi), a)); }, false,
                            true);
            }
            if (name == "abs_pow") {
                arity(1, 1);
                const double a = real_arg(args[0], name);
                return make(
                    [a](double, int xi) { return xi == 0 ? cplx{} : cplx(std::pow(std::abs(xi), a)); },
                    false, true);
            }
            if (name == "resolvent") {
                arity(1, 2);
                const double c = real_arg(args[0], name);
                const double ci = args.size() > 1 ? real_arg(args[1], name) : 0.0;
                const cplx shift(c, ci);
                if (c == 0.0 && ci == std::round(ci))
                    fail("resolvent is singular: i xi + c vanishes at an integer xi");
                return make([shift](double, int xi) { return 1.0 / (cplx(0.0, xi) + shift); }, false, true);
            }
            if (name == "riesz") {
                arity(0, 0);
                return make([](double, int xi) { return cplx(0.0, xi / japanese_bracket(xi)); }, false,
                            true);
            }
            if (name == "riesz_sign") {
                arity(0, 0);
                return make([](double, int xi) { return xi == 0 ? cplx{} : cplx(0.0, xi > 0 ? 1.0 : -1.0); },
                            false, true);
            }
            if (name == "xi_pow") {
                arity(1, 1);
                const int k = integer_arg(args[0], name);
                if (k < 0)
                    fail("xi_pow needs a non-negative exponent");
                return make([k](double, int xi) { return cplx(std::pow(static_cast<double>(xi), k)); }, false,
                            true);
            }
            if (name == "cos" || name == "sin" || name == "exp") {
                arity(1, 1);
                const int k = integer_arg(args[0], name);
                if (name == "cos")
                    return make([k](double x, int) { return cplx(std::cos(k * x)); }, true, false);
                if (name == "sin")
                    return make([k](double x, int) { return cplx(std::sin(k * x)); }, true, false);
                return make([k](double x, int) { return std::polar(1.0, k * x); }, true, false);
            }
            if (name == "lacunary") {
                arity(2, 2);
                const double s = real_arg(args[0], name);
                const int top = integer_arg(args[1], name);
                if (top < 0 || top > 30)
                    fail("lacunary block count must lie in 0..30");
                return make(
                    [s, top](double x, int) {
                        cplx acc{};
                        for (int m = 0; m <= top; ++m)
                            acc += std::exp2(-m * s) * std::polar(1.0, std::ldexp(x, m));
                        return acc;
                    },
                    true, false);
            }
            if (name == "cusp") {
                arity(1, 1);
                const double s = real_arg(args[0], name);
                return make([s](double x, int) { return cplx(std::pow(std::abs(2.0 * std::sin(x / 2)), s)); },
                            true, false);
            }
            fail("unknown form '" + name + "'");
        }
    };

    std::string text_;
    NodePtr node_;
};

} // namespace torpdo
