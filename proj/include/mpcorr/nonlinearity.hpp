#pragma once

#include <cmath>
#include <string>

#include "mpcorr/errors.hpp"

namespace mpcorr {

/// The monotone convex nonlinearity h(.) that parameterizes the MP constraint.
///
/// Three kinds are supported:
///   relu      h(x) = max(0, x)
///   power     h(x) = max(0, x)^(1/(eta-1)),  eta in (1, 2]
///   softplus  h(x) = T * ln(1 + exp(x/T)),   T > 0
///
/// relu coincides with power at eta = 2. softplus is a smooth surrogate: it is
/// strictly positive everywhere, so the "zero occupancy above threshold"
/// property holds only approximately, at the scale of T.
class Nonlinearity {
  public:
    enum class Kind { relu, power, softplus };

    static Nonlinearity relu() { return Nonlinearity(Kind::relu, 2.0, 0.0); }

    static Nonlinearity power(double eta) {
        if (!(eta > 1.0) || !(eta <= 2.0) || !std::isfinite(eta))
            throw InputDomainError("power nonlinearity requires eta in (1, 2], got " +
                                   std::to_string(eta));
        return Nonlinearity(Kind::power, eta, 0.0);
    }

    static Nonlinearity softplus(double temperature) {
        if (!(temperature > 0.0) || !std::isfinite(temperature))
            throw InputDomainError("softplus temperature must be positive");
        return Nonlinearity(Kind::softplus, 0.0, temperature);
    }

    Kind kind() const { return kind_; }
    double eta() const { return eta_; }
    double temperature() const { return temperature_; }

    /// Power-kind exponent 1/(eta - 1); 1.0 for relu.
    double exponent() const { return kind_ == Kind::power ? 1.0 / (eta_ - 1.0) : 1.0; }

    /// True when h has a continuous derivative (safe for Newton polish).
    bool smooth() const {
        return kind_ == Kind::softplus || (kind_ == Kind::power && exponent() > 1.0);
    }

    double operator()(double x) const {
        switch (kind_) {
            case Kind::relu:
                return x > 0.0 ? x : 0.0;
            case Kind::power: {
                if (x <= 0.0) return 0.0;
                return std::pow(x, exponent());
            }
            case Kind::softplus:
            default: {
                double u = x / temperature_;
                if (u > 30.0) return x;  // log1p(exp(u)) == u to double precision
                return temperature_ * std::log1p(std::exp(u));
            }
        }
    }

    double derivative(double x) const {
        switch (kind_) {
            case Kind::relu:
                return x > 0.0 ? 1.0 : 0.0;
            case Kind::power: {
                if (x <= 0.0) return 0.0;
                double p = exponent();
                return p * std::pow(x, p - 1.0);
            }
            case Kind::softplus:
            default: {
                double u = x / temperature_;
                if (u > 30.0) return 1.0;
                if (u < -30.0) return std::exp(u);
                return 1.0 / (1.0 + std::exp(-u));
            }
        }
    }

    std::string name() const {
        switch (kind_) {
            case Kind::relu:
                return "relu";
            case Kind::power:
                return "power(eta=" + std::to_string(eta_) + ")";
            case Kind::softplus:
            default:
                return "softplus(T=" + std::to_string(temperature_) + ")";
        }
    }

  private:
    Nonlinearity(Kind kind, double eta, double temperature)
        : kind_(kind), eta_(eta), temperature_(temperature) {}

    Kind kind_;
    double eta_;
    double temperature_;
};

}  // namespace mpcorr
