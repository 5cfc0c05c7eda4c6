#include "acfleet/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acfleet {

void PidGains::validate() const {
    if (!std::isfinite(kp) || !std::isfinite(ki) || !std::isfinite(kd)) {
        throw std::invalid_argument("PID gains must be finite");
    }
    if (kp < 0.0 || ki < 0.0 || kd < 0.0) throw std::invalid_argument("PID gains must be nonnegative");
}

PidOutput pid_velocity(const PidState& state, double error_kw, double dt_s, const PidGains& gains) {
    if (!(dt_s > 0.0)) throw std::invalid_argument("pid_velocity: dt must be positive");
    PidOutput out;
    out.state.integral = state.integral + error_kw * dt_s;
    if (gains.ki != 0.0) {
        const double cap = kMaxIntegralVelocity / std::abs(gains.ki);
        out.state.integral = std::clamp(out.state.integral, -cap, cap);
    }
    const double derivative = state.initialized ? (error_kw - state.last_error) / dt_s : 0.0;
    out.v = gains.kp * error_kw + gains.ki * out.state.integral + gains.kd * derivative;
    out.state.last_error = error_kw;
    out.state.initialized = true;
    return out;
}

BandState initial_band(const AcParams& params) {
    return BandState{params.s0, params.lower0(), params.upper0(), 0.0};
}

BandState apply_velocity(const BandState& band, const AcParams& params, double v_per_h, double dt_s) {
    const double l0 = params.lower0();
    const double u0 = params.upper0();
    BandState next;
    next.s = band.s + params.delta * v_per_h * (dt_s / 3600.0);
    next.cumulative_v = band.cumulative_v + v_per_h * (dt_s / 3600.0);
    next.lower = std::min(u0, std::max(l0, next.s - params.delta));
    next.upper = std::max(l0, std::min(u0, next.s + params.delta));
    return next;
}

double effective_width_closed_form(double delta, double cumulative_v) {
    return delta * std::max(0.0, 2.0 - std::abs(cumulative_v));
}

double normalized_local_time(const std::vector<double>& widths, double dt_s, double horizon_h, double zero_tol) {
    if (widths.empty()) throw std::invalid_argument("normalized_local_time: empty width series");
    if (!(dt_s > 0.0) || !(horizon_h > 0.0)) throw std::invalid_argument("normalized_local_time: bad time scale");
    const auto zeros = std::count_if(widths.begin(), widths.end(), [&](double w) { return w < zero_tol; });
    return std::clamp(static_cast<double>(zeros) * dt_s / (horizon_h * 3600.0), 0.0, 1.0);
}

}  // namespace acfleet
