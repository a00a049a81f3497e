#include "mpcorr/mp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "mpcorr/errors.hpp"
#include "mpcorr/relu_profile.hpp"

namespace mpcorr {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

// Constraint left-hand side with an O(log N) fast path for relu.
class ConstraintLhs {
  public:
    ConstraintLhs(const std::vector<double>& operands, const Nonlinearity& nl) : nl_(nl) {
        if (nl.kind() == Nonlinearity::Kind::relu)
            profile_ = ReluProfile(operands);
        else
            operands_ = &operands;
        relu_ = nl.kind() == Nonlinearity::Kind::relu;
    }

    double operator()(double z) const {
        if (relu_) return profile_.total(z);
        double s = 0.0;
        for (double o : *operands_) s += nl_(o - z);
        return s;
    }

    // d/dz of the LHS (always <= 0).
    double slope(double z) const {
        if (relu_) return -profile_.active_weight(z);
        double s = 0.0;
        for (double o : *operands_) s += nl_.derivative(o - z);
        return -s;
    }

  private:
    const Nonlinearity& nl_;
    ReluProfile profile_;
    const std::vector<double>* operands_ = nullptr;
    bool relu_ = false;
};

void validate(const MpProblem& problem, double tol) {
    if (problem.operands.empty()) throw InputDomainError("mp_solve: empty operand vector");
    for (double o : problem.operands)
        if (!std::isfinite(o)) throw InputDomainError("mp_solve: non-finite operand");
    if (!std::isfinite(problem.gamma) || !(problem.gamma > 0.0))
        throw InputDomainError("mp_solve: gamma must be finite and positive");
    if (!(tol > 0.0)) throw InputDomainError("mp_solve: tolerance must be positive");
}

MpSolution solve_in_bracket(const MpProblem& problem, const Nonlinearity& nl, double tol,
                            double lo, double hi) {
    const double gamma = problem.gamma;
    ConstraintLhs lhs(problem.operands, nl);
    int evals = 0;
    auto f = [&](double z) {
        ++evals;
        return lhs(z) - gamma;
    };

    double flo = f(lo);
    double fhi = f(hi);

    // Expand until the bracket straddles the root. The LHS is non-increasing
    // in z, so grow hi when f(hi) > 0 and lower lo when f(lo) < 0.
    double span = std::max(1.0, hi - lo);
    for (int k = 0; fhi > 0.0 && k < 200; ++k) {
        lo = hi;
        flo = fhi;
        hi += span;
        span *= 2.0;
        fhi = f(hi);
    }
    for (int k = 0; flo < 0.0 && k < 200; ++k) {
        hi = lo;
        fhi = flo;
        lo -= span;
        span *= 2.0;
        flo = f(lo);
    }
    if (fhi > 0.0 || flo < 0.0)
        throw ConvergenceError("mp_solve: failed to bracket the constraint root", lo, hi);

    // Bisection to 1e-12 bracket width.
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // hit double resolution
        double fmid = f(mid);
        if (fmid >= 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }

    // Polish. Newton for smooth h; bracketed false position otherwise (exact
    // for the piecewise-linear relu LHS once the bracket is kink-free).
    double z = 0.5 * (lo + hi);
    double fz = f(z);
    if (nl.smooth()) {
        for (int k = 0; k < 12 && std::abs(fz) > 0.0; ++k) {
            double slope = lhs.slope(z);
            if (!(slope < 0.0)) break;
            double step = fz / (-slope);
            double znew = z + step;
            if (!(znew > lo && znew < hi)) break;
            double fnew = f(znew);
            if (std::abs(fnew) >= std::abs(fz)) break;
            z = znew;
            fz = fnew;
        }
    } else {
        for (int k = 0; k < 30 && std::abs(fz) > 0.0; ++k) {
            if (fz >= 0.0)
                lo = z, flo = fz;
            else
                hi = z, fhi = fz;
            double denom = flo - fhi;
            if (!(denom > 0.0)) break;
            double znew = lo + (hi - lo) * (flo / denom);
            if (!(znew >= lo && znew <= hi)) break;
            double fnew = f(znew);
            if (std::abs(fnew) >= std::abs(fz)) break;
            z = znew;
            fz = fnew;
        }
    }

    double residual = std::abs(fz);
    if (residual > tol)
        throw ConvergenceError(
            "mp_solve: residual " + sci(residual) + " exceeds tolerance " + sci(tol), lo, hi);
    return MpSolution{z, residual, evals};
}

}  // namespace

MpSolution mp_solve(const MpProblem& problem, const Nonlinearity& nl, double tol) {
    validate(problem, tol);
    auto [mn, mx] = std::minmax_element(problem.operands.begin(), problem.operands.end());
    return solve_in_bracket(problem, nl, tol, *mn - problem.gamma - 1.0, *mx);
}

MpSolution mp_solve_bracketed(const MpProblem& problem, const Nonlinearity& nl, double tol,
                              double lo, double hi) {
    validate(problem, tol);
    if (!(lo < hi)) throw InputDomainError("mp_solve_bracketed: lo must be below hi");
    return solve_in_bracket(problem, nl, tol, lo, hi);
}

std::vector<double> mp_gradient(const MpProblem& problem, const Nonlinearity& nl, double z) {
    if (problem.operands.empty()) throw InputDomainError("mp_gradient: empty operand vector");
    double denom = 0.0;
    std::vector<double> numer(problem.operands.size());
    for (std::size_t j = 0; j < problem.operands.size(); ++j) {
        double o = problem.operands[j];
        double dp = nl.derivative(o - z);
        double dm = nl.derivative(-o - z);
        numer[j] = dp - dm;
        denom += dp + dm;
    }
    if (denom < 1e-15)
        throw DegenerateGradientError("mp_gradient: all derivatives vanished at z = " +
                                      std::to_string(z));
    for (double& v : numer) v /= denom;
    return numer;
}

std::vector<double> symmetric_operands(const std::vector<double>& values) {
    std::vector<double> out;
    out.reserve(2 * values.size());
    out.insert(out.end(), values.begin(), values.end());
    for (double v : values) out.push_back(-v);
    return out;
}

}  // namespace mpcorr
