#pragma once

#include <cstddef>
#include <vector>

#include "acfleet/thermal.hpp"

namespace acfleet {

/// PID gains. Error in kW, time in seconds, output velocity in 1/h.
struct PidGains {
    double kp = 1e-4;
    double ki = 1e-6;
    double kd = 1e-4;

    void validate() const;
};

/// Bound on the integral contribution |ki * integral|, 1/h.
inline constexpr double kMaxIntegralVelocity = 10.0;

struct PidState {
    double integral = 0.0;    ///< kW·s
    double last_error = 0.0;  ///< kW
    bool initialized = false;
};

struct PidOutput {
    double v = 0.0;  ///< 1/h
    PidState state;
};

/// v = kp e + ki ∫e + kd de/dt for e = measured - reference. Positive error
/// (overconsumption) gives positive v, which raises setpoints. The derivative
/// is zero on the first call. Throws std::invalid_argument if dt <= 0.
PidOutput pid_velocity(const PidState& state, double error_kw, double dt_s, const PidGains& gains);

/// Setpoint and clamped comfort band of one home.
struct BandState {
    double s = 0.0;             ///< setpoint, °C (not clamped)
    double lower = 0.0;         ///< L_t
    double upper = 0.0;         ///< U_t
    double cumulative_v = 0.0;  ///< ∫ v dt, dimensionless

    [[nodiscard]] double width() const { return upper - lower; }
    [[nodiscard]] Band band() const { return Band{lower, upper}; }
};

/// Band at t = 0: s = s0, [L_t, U_t] = [s0 - Δ, s0 + Δ].
BandState initial_band(const AcParams& params);

/// s' = s + Δ v dt/3600, then L_t = U0 ∧ (L0 ∨ (s' - Δ)), U_t = L0 ∨ (U0 ∧ (s' + Δ)).
BandState apply_velocity(const BandState& band, const AcParams& params, double v_per_h, double dt_s);

/// Δ · max(0, 2 - |∫v|).
double effective_width_closed_form(double delta, double cumulative_v);

inline constexpr double kZeroWidthTol = 1e-9;

/// Fraction of [0, T] spent at zero effective width, from widths sampled
/// every dt_s seconds. Throws std::invalid_argument on an empty series.
double normalized_local_time(const std::vector<double>& widths, double dt_s, double horizon_h,
                             double zero_tol = kZeroWidthTol);

}  // namespace acfleet
