#pragma once

#include "enlarge/linalg.hpp"

#include <vector>

namespace enlarge {

/// maximize c^T x  subject to  A x = b,  x_j >= 0 unless free[j].
struct LinearProgram {
    Matrix a;
    Vec b;
    Vec c;
    std::vector<bool> free;  // empty means every variable is nonnegative
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Vec x;
    Rational objective;
};

/// Exact two-phase tableau simplex with Bland's rule, so it terminates without cycling.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace enlarge
