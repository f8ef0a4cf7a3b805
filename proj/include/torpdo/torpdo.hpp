#pragma once

#include "torpdo/error.hpp"
#include "torpdo/spectral.hpp"
#include "torpdo/spaces.hpp"
#include "torpdo/symbols.hpp"
#include "torpdo/symbol_expr.hpp"
#include "torpdo/quantization.hpp"
#include "torpdo/calculus.hpp"
#include "torpdo/harness.hpp"
#include "torpdo/report.hpp"
