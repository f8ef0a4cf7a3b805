// Norms of a few trigonometric polynomials on the grid N = 256.

#include <cstdio>

#include "torpdo/torpdo.hpp"

int main()
{
    using namespace torpdo;
    const TorusGrid g(256);
    const char* fns[] = {"exp(1)", "exp(1) + exp(8)", "lacunary(0.5, 6)"};
    for (const char* text : fns) {
        const auto f = SymbolExpr::parse(text).function(g);
        std::printf("%s\n", text);
        std::printf("  L^2           %.6f\n", lebesgue_norm(f, 2.0).value);
        std::printf("  B^0.5_{2,2}   %.6f\n", besov_norm(f, {0.5, 2.0, 2.0}).value);
        std::printf("  F^0.5_{2,2}   %.6f\n", triebel_norm(f, {0.5, 2.0, 2.0}).value);
        std::printf("  C^0.5         %.6f\n", holder_norm(f, 0.5).value);
    }
}
