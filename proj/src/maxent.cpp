#include "mpcorr/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "mpcorr/errors.hpp"

namespace mpcorr {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

std::vector<double> operand_family(const std::vector<double>& x, const std::vector<double>& y,
                                   EnsembleSign sign) {
    if (x.size() != y.size() || x.empty())
        throw InputDomainError("ensemble inputs must be non-empty and of equal length");
    std::vector<double> s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        s[i] = sign == EnsembleSign::plus ? x[i] + y[i] : x[i] - y[i];
        if (!std::isfinite(s[i])) throw InputDomainError("non-finite ensemble input");
    }
    return s;
}

double check_eta(double eta) {
    if (!(eta > 1.0) || !(eta <= 2.0))
        throw UnsupportedIndexError("entropy index eta must lie in (1, 2], got " +
                                    std::to_string(eta));
    return eta;
}

// [u]_+^(1/(eta-1))
double pospow(double u, double inv_exp) {
    if (u <= 0.0) return 0.0;
    return std::pow(u, inv_exp);
}

struct FamilySolution {
    double alpha;
    double beta;
};

// Normalization plus energy residuals at the solved threshold for a given
// gamma; beta > 0 orientation (energy >= 0).
struct EnergyEval {
    double zeta;    // MP threshold of [s, -s] at this gamma
    double energy;  // sum_i s_i (p_i - q_i)
};

EnergyEval eval_energy(const std::vector<double>& s, const Nonlinearity& h, double gamma) {
    MpProblem prob{symmetric_operands(s), gamma};
    double tol = 1e-12 * std::max(1.0, gamma);
    double zeta = mp_solve(prob, h, tol).z;
    double e = 0.0;
    for (double si : s) e += si * (h(si - zeta) - h(-si - zeta));
    return {zeta, e / gamma};
}

FamilySolution solve_family(const std::vector<double>& s, double eta, double target) {
    const double inv_exp = 1.0 / (eta - 1.0);
    const Nonlinearity h = (eta == 2.0) ? Nonlinearity::relu() : Nonlinearity::power(eta);

    double e_max = 0.0;
    for (double si : s) e_max = std::max(e_max, std::abs(si));

    // beta recovered from gamma via |beta| = eta/(eta-1) * gamma^(1-eta).
    auto beta_mag = [&](double gamma) { return eta * inv_exp * std::pow(gamma, 1.0 - eta); };

    if (e_max == 0.0) {
        // All wells flat: energy is zero for any multipliers, so only the
        // normalization matters. Pin gamma = 1 as the canonical choice.
        if (target != 0.0)
            throw InfeasibleError("energy target " + sci(target) +
                                  " unreachable for an all-zero ensemble");
        double gamma = 1.0;
        double zeta = mp_solve({symmetric_operands(s), gamma}, h, 1e-12).z;
        double beta = beta_mag(gamma);
        return {-zeta * beta, beta};
    }

    // Feasibility pre-check: the extreme distribution puts all mass on the
    // deepest well, achieving |energy| -> max_i |s_i| only in the limit.
    if (std::abs(target) >= e_max * (1.0 - 1e-12))
        throw InfeasibleError("energy target " + sci(target) +
                              " exceeds the achievable range (max |s| = " + sci(e_max) + ")");

    const double sign = target >= 0.0 ? 1.0 : -1.0;
    const double t = std::abs(target);

    // E(gamma) decays from e_max (gamma -> 0) to 0 (gamma -> inf); bracket the
    // target on log gamma, then bisect.
    double ulo = 0.0, uhi = 0.0;  // u = ln gamma; energy(ulo) >= t >= energy(uhi)
    double elo = eval_energy(s, h, 1.0).energy;
    double ehi = elo;
    double step = 1.0;
    for (int k = 0; elo < t && k < 120; ++k) {
        uhi = ulo;
        ehi = elo;
        ulo -= step;
        step *= 2.0;
        elo = eval_energy(s, h, std::exp(ulo)).energy;
    }
    step = 1.0;
    for (int k = 0; ehi > t && k < 120; ++k) {
        ulo = uhi;
        elo = ehi;
        uhi += step;
        step *= 2.0;
        ehi = eval_energy(s, h, std::exp(uhi)).energy;
    }
    if (elo < t || ehi > t)
        throw InfeasibleError("failed to bracket the energy target " + sci(target));

    double u = 0.5 * (ulo + uhi);
    EnergyEval ev = eval_energy(s, h, std::exp(u));
    for (int k = 0; k < 200; ++k) {
        if (std::abs(ev.energy - t) <= 1e-10) break;
        if (ev.energy >= t)
            ulo = u;
        else
            uhi = u;
        double unew = 0.5 * (ulo + uhi);
        if (unew == ulo || unew == uhi) break;  // hit double resolution
        u = unew;
        ev = eval_energy(s, h, std::exp(u));
    }

    double gamma = std::exp(u);
    double beta = sign * beta_mag(gamma);
    // For beta < 0 the stationary distribution mirrors: -alpha/beta = -zeta.
    double z = sign * ev.zeta;
    return {-z * beta, beta};
}

}  // namespace

double tsallis_entropy(const std::vector<double>& probabilities, double eta) {
    if (!(eta >= 1.0)) throw InputDomainError("tsallis_entropy: eta must be >= 1");
    double sum = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0)) throw InputDomainError("tsallis_entropy: negative probability");
        sum += p;
    }
    if (sum > 1.0 + 1e-8) throw InputDomainError("tsallis_entropy: probabilities sum above 1");
    if (eta == 1.0) {
        double sh = 0.0;
        for (double p : probabilities)
            if (p > 0.0) sh -= p * std::log(p);
        return sh;
    }
    double powsum = 0.0;
    for (double p : probabilities) powsum += std::pow(p, eta);
    return (1.0 - powsum) / (eta - 1.0);
}

std::pair<std::vector<double>, std::vector<double>> maxent_distribution(
    const std::vector<double>& x, const std::vector<double>& y, double eta, double alpha,
    double beta, EnsembleSign sign) {
    check_eta(eta);
    if (beta == 0.0) throw InputDomainError("maxent_distribution: beta must be nonzero");
    auto s = operand_family(x, y, sign);
    const double inv_exp = 1.0 / (eta - 1.0);
    const double scale = (eta - 1.0) / eta;
    std::vector<double> p(s.size()), q(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        p[i] = pospow(scale * (alpha + beta * s[i]), inv_exp);
        q[i] = pospow(scale * (alpha - beta * s[i]), inv_exp);
    }
    return {std::move(p), std::move(q)};
}

std::pair<double, double> solve_multipliers(const std::vector<double>& x,
                                            const std::vector<double>& y, double eta,
                                            const EnergyTarget& target, EnsembleSign sign) {
    check_eta(eta);
    auto s = operand_family(x, y, sign);
    double t = (sign == EnsembleSign::plus ? target.u_plus : target.u_minus) - target.e0;
    if (!std::isfinite(t)) throw InputDomainError("solve_multipliers: non-finite energy target");
    auto sol = solve_family(s, eta, t);
    return {sol.alpha, sol.beta};
}

std::pair<double, double> maxent_to_mp_params(double alpha, double beta, double eta) {
    if (eta == 1.0)
        throw UnsupportedIndexError(
            "eta = 1 maps to log-sum-exp, outside the MP parameterization");
    check_eta(eta);
    if (beta == 0.0 || !std::isfinite(beta) || !std::isfinite(alpha))
        throw InputDomainError("maxent_to_mp_params: multipliers must be finite, beta nonzero");
    double gamma = std::pow((eta - 1.0) * std::abs(beta) / eta, 1.0 / (1.0 - eta));
    return {-alpha / beta, gamma};
}

MesostateEnsemble solve_ensemble(const std::vector<double>& x, const std::vector<double>& y,
                                 double eta, const EnergyTarget& target) {
    MesostateEnsemble ens;
    ens.eta = eta;
    auto [ap, bp] = solve_multipliers(x, y, eta, target, EnsembleSign::plus);
    auto [am, bm] = solve_multipliers(x, y, eta, target, EnsembleSign::minus);
    ens.alpha_plus = ap;
    ens.beta_plus = bp;
    ens.alpha_minus = am;
    ens.beta_minus = bm;
    std::tie(ens.p_plus, ens.q_plus) = maxent_distribution(x, y, eta, ap, bp, EnsembleSign::plus);
    std::tie(ens.p_minus, ens.q_minus) =
        maxent_distribution(x, y, eta, am, bm, EnsembleSign::minus);
    return ens;
}

}  // namespace mpcorr
