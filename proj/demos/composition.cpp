// Composition of two order -1 symbols: how fast the asymptotic sum closes in
// on the exact symbol.

#include <cstdio>

#include "torpdo/torpdo.hpp"

int main()
{
    using namespace torpdo;
    const TorusGrid g(64);
    const auto tau = SymbolExpr::parse("bracket_pow(-1)").full(g);
    const auto sigma = SymbolExpr::parse("(2 + cos(1)) * bracket_pow(-1)").full(g);
    const auto exact = exact_compose(tau, sigma);
    const auto expansion = compose_asymptotic(tau, sigma, 3);
    for (int k = 0; k <= 3; ++k)
        std::printf("order %d: residual %.3e\n", k, composition_residual(expansion, exact, k));

    const auto p = parametrix(SymbolExpr::parse("(2 + cos(1)) * bracket_pow(2)").full(g), 2.0);
    std::printf("parametrix K = 2: max residual %.3e\n", p.max_residual());
}
