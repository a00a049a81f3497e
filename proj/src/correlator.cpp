#include "mpcorr/correlator.hpp"

#include <cmath>

#include "mpcorr/errors.hpp"
#include "mpcorr/rng.hpp"

namespace mpcorr {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double mean_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    return m / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
    double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

void standardize(std::vector<double>& v) {
    double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    s = std::sqrt(s / static_cast<double>(v.size()));
    if (!(s > 0.0)) throw NormalizationError("cannot standardize a zero-variance vector");
    for (double& x : v) x = (x - m) / s;
}

OperandPair build_operands(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw InputDomainError("build_operands: length mismatch");
    const std::size_t n = x.size();
    OperandPair out;
    out.o_plus.resize(2 * n);
    out.o_minus.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        double sp = x[i] + y[i];
        double sm = x[i] - y[i];
        out.o_plus[i] = sp;
        out.o_plus[n + i] = -sp;
        out.o_minus[i] = sm;
        out.o_minus[n + i] = -sm;
    }
    return out;
}

CorrelationEstimate mp_correlate(const InputPair& pair, double gamma_plus, double gamma_minus,
                                 const Nonlinearity& nl, double tol) {
    if (!(gamma_plus > 0.0) || !(gamma_minus > 0.0))
        throw InputDomainError("mp_correlate: gamma must be positive");
    auto ops = build_operands(pair.x, pair.y);
    double zp = mp_solve({std::move(ops.o_plus), gamma_plus}, nl, tol).z;
    double zm = mp_solve({std::move(ops.o_minus), gamma_minus}, nl, tol).z;
    CorrelationEstimate est;
    est.raw_output = zp - zm;
    est.method = CorrelationMethod::mp_static;
    return est;
}

CorrelationEstimate mac_correlate(const InputPair& pair) {
    if (pair.x.size() != pair.y.size() || pair.x.empty())
        throw InputDomainError("mac_correlate: invalid pair");
    std::vector<double> x = pair.x;
    std::vector<double> y = pair.y;
    standardize(x);
    standardize(y);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    double r = acc / static_cast<double>(x.size());
    CorrelationEstimate est;
    est.raw_output = r;
    est.r_hat = r;
    est.method = CorrelationMethod::mac;
    return est;
}

InputPair gen_correlated(double r, std::size_t n, InputDistribution distribution,
                         std::uint64_t seed) {
    if (!(std::abs(r) <= 1.0)) throw InputDomainError("gen_correlated: |r| must be <= 1");
    if (n < 2) throw InputDomainError("gen_correlated: need at least two samples");
    if (distribution == InputDistribution::sinusoid)
        throw InputDomainError("gen_correlated: use gen_sinusoid_pair for periodic inputs");
    Rng rng(seed);
    InputPair pair;
    pair.n = n;
    pair.seed = seed;
    pair.distribution = distribution;
    pair.x.resize(n);
    pair.y.resize(n);
    const double mix = std::sqrt(1.0 - r * r);
    for (std::size_t i = 0; i < n; ++i) {
        double s1, s2;
        if (distribution == InputDistribution::gaussian) {
            s1 = rng.gaussian();
            s2 = rng.gaussian();
        } else {
            s1 = rng.uniform_unit_variance();
            s2 = rng.uniform_unit_variance();
        }
        pair.x[i] = s1;
        pair.y[i] = r * s1 + mix * s2;
    }
    standardize(pair.x);
    standardize(pair.y);
    return pair;
}

InputPair gen_sinusoid_pair(double phase_deg, std::size_t n, int cycles) {
    if (cycles < 1) throw InputDomainError("gen_sinusoid_pair: cycles must be a positive integer");
    if (!(phase_deg >= 0.0) || !(phase_deg <= 180.0))
        throw InputDomainError("gen_sinusoid_pair: phase must lie in [0, 180] degrees");
    if (n < 2 * static_cast<std::size_t>(cycles))
        throw InputDomainError("gen_sinusoid_pair: need at least two samples per cycle");
    InputPair pair;
    pair.n = n;
    pair.distribution = InputDistribution::sinusoid;
    pair.phase_deg = phase_deg;
    pair.x.resize(n);
    pair.y.resize(n);
    const double phase = phase_deg * kTwoPi / 360.0;
    const double w = kTwoPi * static_cast<double>(cycles) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double theta = w * static_cast<double>(i);
        pair.x[i] = std::cos(theta);
        pair.y[i] = std::cos(theta - phase);
    }
    return pair;
}

}  // namespace mpcorr
