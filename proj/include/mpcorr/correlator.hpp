#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mpcorr/mp_solver.hpp"
#include "mpcorr/nonlinearity.hpp"

namespace mpcorr {

enum class InputDistribution { gaussian, uniform, sinusoid };

/// A pair of equal-length sample vectors to be correlated.
struct InputPair {
    std::vector<double> x;
    std::vector<double> y;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    InputDistribution distribution = InputDistribution::gaussian;
    double phase_deg = 0.0;  // recorded for sinusoid pairs
};

enum class CorrelationMethod { mp_static, mp_transient, mac };

struct CorrelationEstimate {
    double raw_output = 0.0;            // uncalibrated correlator output
    std::optional<double> r_hat;        // in [-1, 1] once calibrated
    CorrelationMethod method = CorrelationMethod::mp_static;
};

/// The rectangular-symmetry operand families of Definition-style MP
/// correlation: o_plus = [x+y, -(x+y)], o_minus = [x-y, y-x].
struct OperandPair {
    std::vector<double> o_plus;
    std::vector<double> o_minus;
};

OperandPair build_operands(const std::vector<double>& x, const std::vector<double>& y);

/// Static MP correlator output z+ - z- for the given constraints.
CorrelationEstimate mp_correlate(const InputPair& pair, double gamma_plus, double gamma_minus,
                                 const Nonlinearity& nl, double tol = kMpDefaultTol);

/// Baseline multiply-accumulate estimate. Both vectors are standardized to
/// zero mean and unit variance first, so r_hat is the Pearson coefficient.
/// Throws NormalizationError on zero-variance input.
CorrelationEstimate mac_correlate(const InputPair& pair);

/// Draws X = S1, Y = r*S1 + sqrt(1-r^2)*S2 from the named unit-variance
/// distribution and standardizes each vector empirically. Deterministic per
/// seed.
InputPair gen_correlated(double r, std::size_t n, InputDistribution distribution,
                         std::uint64_t seed);

/// Unit-amplitude cosine pair x_i = cos(2 pi c i / n), y_i = cos(. - phase).
/// Integer cycle counts keep the finite-length error identically zero; the
/// Pearson correlation of the pair is cos(phase).
InputPair gen_sinusoid_pair(double phase_deg, std::size_t n, int cycles);

/// In-place standardization to zero mean, unit population variance.
void standardize(std::vector<double>& v);

double mean_of(const std::vector<double>& v);
double stddev_of(const std::vector<double>& v);

}  // namespace mpcorr
