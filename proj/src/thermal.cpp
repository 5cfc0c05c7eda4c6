#include "acfleet/thermal.hpp"

#include <cmath>
#include <sstream>

namespace acfleet {

void AcParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            std::ostringstream os;
            os << "AcParams." << name << " must be positive and finite (got " << v << ")";
            throw std::invalid_argument(os.str());
        }
    };
    positive(alpha, "alpha");
    positive(beta, "beta");
    positive(p_thermal, "p_thermal");
    positive(eta, "eta");
    positive(delta, "delta");
    if (!std::isfinite(s0)) throw std::invalid_argument("AcParams.s0 must be finite");
}

double electrical_power(const AcParams& params, int sigma) noexcept {
    return sigma != 0 ? params.p_thermal / params.eta : 0.0;
}

double integrate_exact(double theta, const AcParams& params, int sigma, double theta_a, double dt) noexcept {
    const double theta_eq = theta_a - (sigma != 0 ? params.on_drop() : 0.0);
    return integrate_with_decay(theta, theta_eq, std::exp(-params.alpha * dt));
}

int resolve_mode(const AcState& state, const AcParams& params, double theta_a, double dt, Band band) noexcept {
    const double decay = std::exp(-params.alpha * dt);
    const double off_end = integrate_with_decay(state.theta, theta_a, decay);
    const double on_end = integrate_with_decay(state.theta, theta_a - params.on_drop(), decay);
    return choose_mode(state.sigma, off_end, on_end, band, Band{params.lower0(), params.upper0()});
}

AcState step_exact(const AcState& state, const AcParams& params, double theta_a, double dt, Band band) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_exact: dt must be positive");
    if (!(theta_a > band.upper)) {
        std::ostringstream os;
        os << "step_exact: ambient " << theta_a << " °C is not above the band upper edge " << band.upper
           << " °C (cooling-only model)";
        throw ThermalDomainError(os.str());
    }
    AcState next = state;
    next.sigma = resolve_mode(state, params, theta_a, dt, band);
    next.theta = integrate_exact(state.theta, params, next.sigma, theta_a, dt);
    next.t = state.t + dt;
    return next;
}

AcState step_exact(const AcState& state, const AcParams& params, double theta_a, double dt) {
    return step_exact(state, params, theta_a, dt, Band{state.s - params.delta, state.s + params.delta});
}

}  // namespace acfleet
