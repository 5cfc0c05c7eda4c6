#pragma once

#include <stdexcept>
#include <string>

namespace acfleet {

/// Thermal and contract parameters of one air-conditioned home.
///
/// Indoor temperature obeys  dθ/dt = -alpha (θ - θ_a) - beta * p_thermal * σ
/// with σ the ON/OFF mode. Electrical draw while ON is p_thermal / eta.
struct AcParams {
    double alpha = 0.05;      ///< heating time constant, 1/h
    double beta = 0.1;        ///< thermal conductivity, °C/kWh
    double p_thermal = 14.0;  ///< thermal power when ON, kW
    double eta = 2.5;         ///< efficiency
    double delta = 1.0;       ///< comfort tolerance, °C
    double s0 = 20.0;         ///< initial (contract) setpoint, °C

    [[nodiscard]] double lower0() const noexcept { return s0 - delta; }
    [[nodiscard]] double upper0() const noexcept { return s0 + delta; }
    /// Equilibrium temperature of the ON dynamics relative to ambient.
    [[nodiscard]] double on_drop() const noexcept { return beta * p_thermal / alpha; }

    /// Throws std::invalid_argument if any invariant is broken.
    void validate() const;
};

struct AcState {
    double theta = 20.0;  ///< indoor temperature, °C
    double s = 20.0;      ///< current setpoint, °C
    int sigma = 0;        ///< 1 = ON, 0 = OFF
    double t = 0.0;       ///< simulation clock, h
};

/// Closed temperature interval the thermostat switches against.
struct Band {
    double lower;
    double upper;
};

/// Raised when a step would simulate outside the cooling-only regime.
class ThermalDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Electrical power drawn in mode `sigma`, kW.
[[nodiscard]] double electrical_power(const AcParams& params, int sigma) noexcept;

/// Temperature after `dt` hours in a fixed mode with constant ambient.
[[nodiscard]] double integrate_exact(double theta, const AcParams& params, int sigma, double theta_a,
                                     double dt) noexcept;

/// Same as integrate_exact with a precomputed exp(-alpha*dt).
[[nodiscard]] inline double integrate_with_decay(double theta, double theta_eq, double decay) noexcept {
    return theta_eq + (theta - theta_eq) * decay;
}

/// Hysteresis decision for the coming step given the end-of-step
/// temperatures of both modes.
///
/// The mode flips when running the current mode for the whole step would
/// carry the temperature across the band edge it is heading to: an OFF unit
/// that would end above `band.upper` turns ON, an ON unit that would end below
/// `band.lower` turns OFF. A choice that would leave the contract band is then
/// overridden by the other mode, so a pinned band never pushes the
/// temperature past the contract edges.
[[nodiscard]] inline int choose_mode(int sigma, double off_end, double on_end, Band band, Band contract) noexcept {
    int next = sigma;
    if (sigma == 0 && off_end > band.upper) next = 1;
    if (sigma == 1 && on_end < band.lower) next = 0;
    if (next == 0 && off_end > contract.upper) next = 1;
    if (next == 1 && on_end < contract.lower) next = 0;
    return next;
}

/// choose_mode for one home with the ambient held constant over `dt` hours.
[[nodiscard]] int resolve_mode(const AcState& state, const AcParams& params, double theta_a, double dt,
                               Band band) noexcept;

/// Exact one-step update: hysteresis against `band`, then the closed-form
/// exponential solution with θ_a held constant over the step.
///
/// Throws std::invalid_argument for dt <= 0 and ThermalDomainError when the
/// ambient is not above the band's upper edge.
[[nodiscard]] AcState step_exact(const AcState& state, const AcParams& params, double theta_a, double dt,
                                 Band band);

/// step_exact against the deadband [s - delta, s + delta] around the current setpoint.
[[nodiscard]] AcState step_exact(const AcState& state, const AcParams& params, double theta_a, double dt);

}  // namespace acfleet
