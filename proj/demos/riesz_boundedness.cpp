// The regularized Riesz multiplier on Hoelder to Besov, four resolutions.

#include <cstdio>

#include "torpdo/torpdo.hpp"

int main()
{
    using namespace torpdo;
    TheoremParams t;
    t.rho = 0.0;
    TheoremOptions o;
    o.lacunary_count = 20;
    o.random_count = 20;
    const auto rep = theorem_check(TheoremId::main, t, SymbolExpr::parse("riesz()"), {64, 128, 256, 512}, o);
    std::fputs(render_text(rep).c_str(), stdout);
}
