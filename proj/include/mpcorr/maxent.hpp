#pragma once

#include <utility>
#include <vector>

#include "mpcorr/mp_solver.hpp"
#include "mpcorr/nonlinearity.hpp"

namespace mpcorr {

/// Which operand family an ensemble is built from: s_i = x_i + y_i (plus) or
/// s_i = x_i - y_i (minus).
enum class EnsembleSign { plus, minus };

/// Ensemble energies relative to the reference level e0. Targets enter the
/// constraint as u - e0.
struct EnergyTarget {
    double u_plus = 0.0;
    double u_minus = 0.0;
    double e0 = 0.0;
};

/// The four occupancy families with their Lagrange multipliers.
struct MesostateEnsemble {
    std::vector<double> p_plus, q_plus;
    std::vector<double> p_minus, q_minus;
    double alpha_plus = 0.0, beta_plus = 0.0;
    double alpha_minus = 0.0, beta_minus = 0.0;
    double eta = 2.0;
};

/// Tsallis entropy (1 - sum p^eta) / (eta - 1); Shannon entropy at eta = 1
/// with the 0 log 0 := 0 convention. Probabilities must be nonnegative and
/// sum to at most 1 + 1e-8.
double tsallis_entropy(const std::vector<double>& probabilities, double eta);

/// Closed-form stationary distribution for multipliers (alpha, beta):
///   p_i = [ (eta-1)(alpha + beta*s_i) / eta ]_+^(1/(eta-1)),
///   q_i = [ (eta-1)(alpha - beta*s_i) / eta ]_+^(1/(eta-1)).
/// No normalization is applied.
std::pair<std::vector<double>, std::vector<double>> maxent_distribution(
    const std::vector<double>& x, const std::vector<double>& y, double eta, double alpha,
    double beta, EnsembleSign sign);

/// Finds (alpha, beta) so the stationary distribution satisfies both the
/// normalization sum(p) + sum(q) = 1 and the energy constraint
/// sum_i s_i (p_i - q_i) = u - e0, each within 1e-8.
///
/// Works through the MP equivalence: for a trial |beta| the implied gamma is
/// ((eta-1)|beta|/eta)^(1/(1-eta)) and -alpha/beta is the MP threshold of the
/// symmetric operands [s, -s], so the search reduces to a 1-D bracketed
/// bisection on log gamma against the energy. Throws InfeasibleError when
/// |u - e0| is not achievable (it is bounded by max_i |s_i|).
std::pair<double, double> solve_multipliers(const std::vector<double>& x,
                                            const std::vector<double>& y, double eta,
                                            const EnergyTarget& target, EnsembleSign sign);

/// Equivalent MP parameters of a multiplier pair:
///   gamma = ((eta-1)|beta|/eta)^(1/(1-eta)),  z = -alpha/beta.
/// eta = 1 (the Shannon / log-sum-exp case) is rejected.
std::pair<double, double> maxent_to_mp_params(double alpha, double beta, double eta);

/// Solves both sign families and assembles the full ensemble.
MesostateEnsemble solve_ensemble(const std::vector<double>& x, const std::vector<double>& y,
                                 double eta, const EnergyTarget& target);

}  // namespace mpcorr
