#include "mpcorr/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mpcorr/errors.hpp"
#include "mpcorr/relu_profile.hpp"
#include "mpcorr/rng.hpp"

namespace mpcorr {

namespace {

// One differential branch: total current I(V) = i0 * sum_k w_k h(d_k - V)
// over the 2n drive terms, with an O(log n) relu fast path.
class Branch {
  public:
    Branch(std::vector<double> drives, std::vector<double> weights, const DeviceModel& model)
        : h_(model.h), i0_(model.i0), relu_(model.h.kind() == Nonlinearity::Kind::relu) {
        if (relu_) {
            profile_ = ReluProfile(std::move(drives), std::move(weights));
        } else {
            drives_ = std::move(drives);
            weights_ = std::move(weights);
        }
    }

    double current(double v) const {
        if (relu_) return i0_ * profile_.total(v);
        double s = 0.0;
        for (std::size_t k = 0; k < drives_.size(); ++k) s += weights_[k] * h_(drives_[k] - v);
        return i0_ * s;
    }

    // Largest drive; relu current vanishes for v >= cutoff.
    double cutoff() const {
        if (relu_) return profile_.threshold();
        return drives_.empty() ? 0.0 : *std::max_element(drives_.begin(), drives_.end());
    }

    // Solves current(v) = j for v (current is nonincreasing). For j <= 0
    // returns the relu cutoff / a far-off voltage for smooth h.
    double inverse_current(double j) const {
        if (relu_) return profile_.solve_total(j / i0_);
        double lo = cutoff(), hi = lo;
        double step = 1.0;
        while (current(hi) > j) {
            hi += step;
            step *= 2.0;
        }
        step = 1.0;
        while (current(lo) < j) {
            lo -= step;
            step *= 2.0;
        }
        for (int k = 0; k < 120 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++k) {
            double mid = 0.5 * (lo + hi);
            if (current(mid) >= j)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    // Fixed point of current(v) = v / r (exists and is unique for r > 0).
    double fixed_point(double r) const {
        double lo = 0.0;
        if (current(0.0) <= 0.0) return 0.0;
        double hi = 1.0;
        while (current(hi) * r > hi) hi *= 2.0;
        for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++k) {
            double mid = 0.5 * (lo + hi);
            if (current(mid) * r >= mid)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

  private:
    Nonlinearity h_;
    double i0_;
    bool relu_;
    ReluProfile profile_;
    std::vector<double> drives_;
    std::vector<double> weights_;
};

struct BranchPair {
    Branch plus;
    Branch minus;
};

// Drive terms of Eq.-4 form: the plus branch sees +-(kg x + kb y), the minus
// branch +-(kg x - kb y). The input offset cancels inside h by construction.
BranchPair make_branches(const InputPair& pair, const DeviceModel& model,
                         const MismatchSpec* mismatch) {
    if (pair.x.size() != pair.y.size() || pair.x.empty())
        throw InputDomainError("dynamics: invalid input pair");
    if (!(model.i0 > 0.0)) throw InputDomainError("dynamics: i0 must be positive");
    if (!(model.kappa_g > 0.0) || model.kappa_g > 1.0 || !(model.kappa_b > 0.0) ||
        model.kappa_b > 1.0)
        throw InputDomainError("dynamics: coupling factors must lie in (0, 1]");
    const std::size_t n = pair.x.size();
    std::vector<double> dp(2 * n), dm(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        double gp = model.kappa_g * pair.x[i] + model.kappa_b * pair.y[i];
        double gm = model.kappa_g * pair.x[i] - model.kappa_b * pair.y[i];
        dp[i] = gp;
        dp[n + i] = -gp;
        dm[i] = gm;
        dm[n + i] = -gm;
    }
    std::vector<double> wp, wm;
    if (mismatch && mismatch->sigma != 0.0) {
        if (!(mismatch->sigma > 0.0) || mismatch->sigma > 0.2)
            throw InputDomainError("dynamics: mismatch sigma must lie in (0, 0.2]");
        Rng rng(mismatch->seed);
        wp.resize(2 * n);
        wm.resize(2 * n);
        for (double& w : wp) w = std::max(0.05, 1.0 + mismatch->sigma * rng.gaussian());
        for (double& w : wm) w = std::max(0.05, 1.0 + mismatch->sigma * rng.gaussian());
    }
    return {Branch(std::move(dp), std::move(wp), model), Branch(std::move(dm), std::move(wm), model)};
}

std::size_t step_count(double t_end, double dt) {
    if (!(t_end > 0.0) || !(dt > 0.0))
        throw InputDomainError("dynamics: t_end and dt must be positive");
    return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
}

}  // namespace

double ids(const DeviceModel& model, double v_g, double v_b, double v_s) {
    if (!std::isfinite(v_g) || !std::isfinite(v_b) || !std::isfinite(v_s))
        throw InputDomainError("ids: non-finite voltage");
    double drive = model.kappa_g * (v_g - model.v_offset) + model.kappa_b * (v_b - model.v_offset);
    return model.i0 * model.h(drive - v_s);
}

Trajectory integrate_first_order(const InputPair& pair, const DeviceModel& model,
                                 const CircuitParams& params, double t_end, double dt,
                                 const MismatchSpec* mismatch) {
    if (!(params.r_sink > 0.0) || !(params.c_par > 0.0))
        throw InputDomainError("integrate_first_order: r_sink and c_par must be positive");
    const double tau = params.r_sink * params.c_par;
    if (dt > tau / 20.0 + 1e-15 * tau)
        throw StabilityError("integrate_first_order: dt must be <= tau/20 = " +
                             std::to_string(tau / 20.0));
    auto branches = make_branches(pair, model, mismatch);
    const std::size_t steps = step_count(t_end, dt);

    const double r = params.r_sink, c = params.c_par;
    auto deriv = [&](const Branch& b, double v) { return (b.current(v) - v / r) / c; };

    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.v_plus.reserve(steps + 1);
    traj.v_minus.reserve(steps + 1);
    traj.i_plus.reserve(steps + 1);
    traj.i_minus.reserve(steps + 1);

    double vp = 0.0, vm = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
        traj.times.push_back(static_cast<double>(k) * dt);
        traj.v_plus.push_back(vp);
        traj.v_minus.push_back(vm);
        traj.i_plus.push_back(branches.plus.current(vp));
        traj.i_minus.push_back(branches.minus.current(vm));
        if (k == steps) break;
        auto rk4 = [&](const Branch& b, double v) {
            double k1 = deriv(b, v);
            double k2 = deriv(b, v + 0.5 * dt * k1);
            double k3 = deriv(b, v + 0.5 * dt * k2);
            double k4 = deriv(b, v + dt * k3);
            return v + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        };
        vp = rk4(branches.plus, vp);
        vm = rk4(branches.minus, vm);
    }
    traj.steady_state =
        branches.plus.fixed_point(r) - branches.minus.fixed_point(r);
    return traj;
}

Trajectory integrate_relu_dynamics(const InputPair& pair, double r, double c, double dt,
                                   double t_end) {
    DeviceModel unit;  // relu, i0 = 1, full coupling, zero offset
    CircuitParams params;
    params.r_sink = r;
    params.c_par = c;
    params.n = static_cast<int>(pair.x.size());
    return integrate_first_order(pair, unit, params, t_end, dt);
}

Trajectory integrate_second_order(const InputPair& pair, const DeviceModel& model,
                                  const CircuitParams& params, double t_end, double dt,
                                  const MismatchSpec* mismatch) {
    if (!(params.r_sink > 0.0) || !(params.c_par > 0.0))
        throw InputDomainError("integrate_second_order: r_sink and c_par must be positive");
    if (!(params.l_par > 0.0))
        throw InputDomainError("integrate_second_order: l_par must be positive");
    const double dt_max = 0.05 * std::sqrt(params.l_par * params.c_par);
    if (dt > dt_max * (1.0 + 1e-12))
        throw StabilityError("integrate_second_order: dt must be <= 0.05 sqrt(L C) = " +
                             std::to_string(dt_max));
    auto branches = make_branches(pair, model, mismatch);
    const std::size_t steps = step_count(t_end, dt);
    const double r = params.r_sink, c = params.c_par, l = params.l_par;

    struct State {
        double vout, j;
    };
    auto deriv = [&](const Branch& b, State s) {
        State d;
        d.vout = (s.j - s.vout / r) / c;
        double vs = b.inverse_current(std::max(s.j, 0.0));
        d.j = (vs - s.vout) / l;
        // The devices cannot sink reverse current: hold J at zero while the
        // inductor voltage would drive it negative.
        if (s.j <= 0.0 && d.j < 0.0) d.j = 0.0;
        return d;
    };
    auto rk4 = [&](const Branch& b, State s) {
        auto add = [](State a, State d, double w) { return State{a.vout + w * d.vout, a.j + w * d.j}; };
        State k1 = deriv(b, s);
        State k2 = deriv(b, add(s, k1, 0.5 * dt));
        State k3 = deriv(b, add(s, k2, 0.5 * dt));
        State k4 = deriv(b, add(s, k3, dt));
        State out{s.vout + dt / 6.0 * (k1.vout + 2.0 * k2.vout + 2.0 * k3.vout + k4.vout),
                  s.j + dt / 6.0 * (k1.j + 2.0 * k2.j + 2.0 * k3.j + k4.j)};
        out.j = std::max(out.j, 0.0);
        return out;
    };

    Trajectory traj;
    traj.times.reserve(steps + 1);
    State sp{0.0, 0.0}, sm{0.0, 0.0};
    for (std::size_t k = 0; k <= steps; ++k) {
        traj.times.push_back(static_cast<double>(k) * dt);
        traj.v_plus.push_back(sp.vout);
        traj.v_minus.push_back(sm.vout);
        traj.i_plus.push_back(sp.j);
        traj.i_minus.push_back(sm.j);
        if (k == steps) break;
        sp = rk4(branches.plus, sp);
        sm = rk4(branches.minus, sm);
    }
    // The L dJ/dt = 0, C dV/dt = 0 stationary point coincides with the
    // first-order fixed point.
    traj.steady_state = branches.plus.fixed_point(r) - branches.minus.fixed_point(r);
    return traj;
}

double transient_readout(const Trajectory& traj, double t_read) {
    if (traj.times.empty()) throw InputDomainError("transient_readout: empty trajectory");
    const double t_max = traj.times.back();
    if (!(t_read >= 0.0) || t_read > t_max * (1.0 + 1e-12))
        throw InputDomainError("transient_readout: t_read outside [0, t_end]");
    t_read = std::min(t_read, t_max);
    auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t_read);
    std::size_t hi = static_cast<std::size_t>(it - traj.times.begin());
    if (hi == 0) return traj.v_out(0);
    std::size_t lo = hi - 1;
    if (hi >= traj.times.size()) return traj.v_out(traj.times.size() - 1);
    double t0 = traj.times[lo], t1 = traj.times[hi];
    double w = (t_read - t0) / (t1 - t0);
    return (1.0 - w) * traj.v_out(lo) + w * traj.v_out(hi);
}

void trajectory_to_csv(const Trajectory& traj, std::ostream& os) {
    os << "time,v_plus,v_minus,v_out,i_plus,i_minus\n";
    char buf[256];
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", traj.times[k],
                      traj.v_plus[k], traj.v_minus[k], traj.v_out(k), traj.i_plus[k],
                      traj.i_minus[k]);
        os << buf;
    }
}

ExponentialFit fit_first_order_response(const std::vector<double>& times,
                                        const std::vector<double>& values) {
    if (times.size() != values.size() || times.size() < 3)
        throw InputDomainError("fit_first_order_response: need at least three samples");
    const std::size_t n = times.size();

    double vmean = 0.0;
    for (double v : values) vmean += v;
    vmean /= static_cast<double>(n);
    double sstot = 0.0;
    for (double v : values) sstot += (v - vmean) * (v - vmean);

    auto sse_at = [&](double tau, double* amp) {
        double mm = 0.0, mv = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double m = 1.0 - std::exp(-times[k] / tau);
            mm += m * m;
            mv += m * values[k];
        }
        double a = mm > 0.0 ? mv / mm : 0.0;
        double sse = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double e = values[k] - a * (1.0 - std::exp(-times[k] / tau));
            sse += e * e;
        }
        if (amp) *amp = a;
        return sse;
    };

    // Golden-section search on log tau.
    const double phi = 0.6180339887498949;
    double lo = std::log(std::max(times[1], times.back() * 1e-4));
    double hi = std::log(times.back() * 10.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = sse_at(std::exp(x1), nullptr), f2 = sse_at(std::exp(x2), nullptr);
    for (int it = 0; it < 80; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = sse_at(std::exp(x1), nullptr);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = sse_at(std::exp(x2), nullptr);
        }
    }
    ExponentialFit fit;
    fit.tau = std::exp(0.5 * (lo + hi));
    double sse = sse_at(fit.tau, &fit.amplitude);
    fit.r_squared = sstot > 0.0 ? 1.0 - sse / sstot : 1.0;
    return fit;
}

}  // namespace mpcorr
