#pragma once

#include <vector>

#include "mpcorr/nonlinearity.hpp"

namespace mpcorr {

/// Operand vector and normalization constraint of one MP constraint equation
///     sum_i h(o_i - z) = gamma.
struct MpProblem {
    std::vector<double> operands;
    double gamma = 1.0;
};

struct MpSolution {
    double z = 0.0;         // threshold satisfying the constraint
    double residual = 0.0;  // |sum_i h(o_i - z) - gamma| at the returned z
    int iterations = 0;     // function-evaluation count of the root finder
};

/// Default residual tolerance for mp_solve.
inline constexpr double kMpDefaultTol = 1e-10;

/// Solves sum_i h(o_i - z) = gamma for the unique threshold z.
///
/// Bisection-first: z is bracketed in [min(o) - gamma - 1, max(o)] (the upper
/// end is expanded when h(0) > 0 leaves residual mass there, as for softplus),
/// bisected down to 1e-12 width, then polished -- Newton for smooth h,
/// bracketed false position otherwise. Throws InputDomainError for non-finite
/// or empty input and ConvergenceError if the residual tolerance cannot be
/// met.
MpSolution mp_solve(const MpProblem& problem, const Nonlinearity& nl, double tol = kMpDefaultTol);

/// Same solver started from a caller-supplied bracket (primarily for
/// uniqueness checks). The bracket is expanded if it does not straddle the
/// root.
MpSolution mp_solve_bracketed(const MpProblem& problem, const Nonlinearity& nl, double tol,
                              double lo, double hi);

/// Gradient of the symmetric MP output with respect to the underlying values.
///
/// The problem's operands are interpreted as the n underlying values o_j whose
/// symmetric extension [o, -o] was solved to threshold z. Component j is
///     (h'(o_j - z) - h'(-o_j - z)) / sum_i (h'(o_i - z) + h'(-o_i - z)),
/// each bounded by 1 in magnitude. Throws DegenerateGradientError when the
/// denominator falls below 1e-15.
std::vector<double> mp_gradient(const MpProblem& problem, const Nonlinearity& nl, double z);

/// [v_1..v_n, -v_1..-v_n]: the rectangular-symmetry operand extension.
std::vector<double> symmetric_operands(const std::vector<double>& values);

}  // namespace mpcorr
