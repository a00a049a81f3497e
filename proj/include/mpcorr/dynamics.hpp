#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "mpcorr/correlator.hpp"
#include "mpcorr/nonlinearity.hpp"

namespace mpcorr {

/// Behavioral transistor model: the drain-source current is
///   ids = i0 * h(kappa_g (v_g - v_offset) + kappa_b (v_b - v_offset) - v_s),
/// nondecreasing in the gate and back-gate drives and nonincreasing in the
/// source voltage.
struct DeviceModel {
    Nonlinearity h = Nonlinearity::relu();
    double i0 = 1.0;
    double kappa_g = 1.0;
    double kappa_b = 1.0;
    double v_offset = 0.0;
};

struct CircuitParams {
    double r_sink = 1.0;  // ohms
    double c_par = 1.0;   // farads
    double l_par = 0.0;   // henries (second-order model only)
    int n = 0;            // ensemble length
};

/// Per-device relative gain mismatch: each branch term is scaled by
/// 1 + sigma * N(0,1), drawn deterministically from the seed.
struct MismatchSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> v_plus;
    std::vector<double> v_minus;
    std::vector<double> i_plus;   // total branch current
    std::vector<double> i_minus;
    std::optional<double> steady_state;  // differential fixed point v+ - v-

    double v_out(std::size_t k) const { return v_plus[k] - v_minus[k]; }
};

double ids(const DeviceModel& model, double v_g, double v_b, double v_s);

/// Integrates, per branch, C dV/dt = sum(ids) - V/R with RK4 from V(0) = 0.
/// Requires dt <= tau/20 with tau = r_sink * c_par (StabilityError otherwise).
/// The parasitic inductance field is ignored.
Trajectory integrate_first_order(const InputPair& pair, const DeviceModel& model,
                                 const CircuitParams& params, double t_end, double dt,
                                 const MismatchSpec* mismatch = nullptr);

/// Idealized relu dynamics: sum of [±s_i - z]_+ pairs = z/R + C dz/dt.
/// Equivalent to integrate_first_order with a unit relu device.
Trajectory integrate_relu_dynamics(const InputPair& pair, double r, double c, double dt,
                                   double t_end);

/// Second-order model with the parasitic inductance between the device
/// sources and the RC readout node. States per branch are the readout voltage
/// and the total branch current J:
///   C dV_out/dt = J - V_out/R,
///   L dJ/dt     = V_s - V_out,   with V_s solving sum(ids(V_s)) = J.
/// Requires l_par > 0 and dt <= 0.05 sqrt(l_par * c_par).
Trajectory integrate_second_order(const InputPair& pair, const DeviceModel& model,
                                  const CircuitParams& params, double t_end, double dt,
                                  const MismatchSpec* mismatch = nullptr);

/// Linear interpolation of v_plus - v_minus at t_read in [0, times.back()].
double transient_readout(const Trajectory& traj, double t_read);

/// CSV export: time, v_plus, v_minus, v_out, i_plus, i_minus at 12
/// significant digits.
void trajectory_to_csv(const Trajectory& traj, std::ostream& os);

struct ExponentialFit {
    double amplitude = 0.0;
    double tau = 0.0;
    double r_squared = 1.0;
};

/// Least-squares fit of v(t) = A (1 - exp(-t/tau)) by golden-section search
/// on tau with the amplitude solved in closed form.
ExponentialFit fit_first_order_response(const std::vector<double>& times,
                                        const std::vector<double>& values);

}  // namespace mpcorr
