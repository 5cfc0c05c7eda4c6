#include "acfleet/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace acfleet {

TrackingTrace track(const Population& population, const ReferencePlan& plan, const AmbientTrajectory& realized,
                    const TrackingOptions& options) {
    const std::size_t n = population.size();
    if (n == 0) throw std::invalid_argument("track: empty population");
    if (plan.homes != n) throw std::invalid_argument("track: plan was computed for a different population");
    const double dt_s = options.dt_ctrl_s;
    const double plan_dt_s = plan.dt_h * 3600.0;
    if (!(dt_s > 0.0) || dt_s > plan_dt_s + 1e-9) {
        throw std::invalid_argument("track: control step must be positive and no larger than the planning step");
    }
    options.gains.validate();
    const double horizon_s = plan.horizon_h() * 3600.0;
    const auto ticks = static_cast<std::size_t>(std::llround(horizon_s / dt_s));
    if (std::abs(static_cast<double>(ticks) * dt_s - horizon_s) > 1e-6 * dt_s) {
        throw std::invalid_argument("track: horizon is not a whole number of control steps");
    }
    if (!realized.covers(0.0, plan.horizon_h())) throw std::invalid_argument("track: realized ambient too short");

    // Integer tick-to-plan-step map when the steps nest, otherwise time lookup.
    const double ratio = plan_dt_s / dt_s;
    const bool nested = std::abs(ratio - std::round(ratio)) < 1e-9;
    const auto ticks_per_step = static_cast<std::size_t>(std::llround(ratio));
    const double dt_h = dt_s / 3600.0;

    Population homes = population;
    std::vector<BandState> bands(n);
    std::vector<double> decay(n);
    std::vector<double> power(n);
    std::vector<double> true_power(n);
    std::vector<int> mode(n);
    double max_upper = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        homes[i].params.validate();
        bands[i] = initial_band(homes[i].params);
        decay[i] = std::exp(-homes[i].params.alpha * dt_h);
        power[i] = electrical_power(homes[i].params, 1);
        max_upper = std::max(max_upper, homes[i].params.upper0());
    }

    std::optional<PrivateSensor> sensor;
    if (options.privacy) sensor.emplace(*options.privacy, n);

    TrackingTrace tr;
    tr.dt_s = dt_s;
    tr.homes = n;
    tr.time_s.resize(ticks);
    tr.p_ref_kw.resize(ticks);
    tr.p_true_kw.resize(ticks);
    tr.p_est_kw.resize(ticks);
    tr.v_per_h.resize(ticks);
    if (options.record_widths) tr.widths.resize(ticks * n);
    std::vector<std::size_t> zero_ticks(n, 0);

    PidState pid;
    for (std::size_t k = 0; k < ticks; ++k) {
        const double t_s = static_cast<double>(k) * dt_s;
        const double theta_a = realized.at(t_s / 3600.0);
        if (!(theta_a > max_upper)) {
            std::ostringstream os;
            os << "track: realized ambient " << theta_a << " °C at t = " << t_s
               << " s is not above every upper comfort edge (" << max_upper << " °C)";
            throw ThermalDomainError(os.str());
        }

        double p_true = 0.0;
        std::size_t zeros = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = homes[i].params;
            const double th = homes[i].state.theta;
            const double off_end = integrate_with_decay(th, theta_a, decay[i]);
            const double on_end = integrate_with_decay(th, theta_a - p.on_drop(), decay[i]);
            mode[i] = choose_mode(homes[i].state.sigma, off_end, on_end, bands[i].band(),
                                  Band{p.lower0(), p.upper0()});
            true_power[i] = mode[i] != 0 ? power[i] : 0.0;
            p_true += true_power[i];

            const double w = bands[i].width();
            if (options.record_widths) tr.widths[k * n + i] = w;
            if (w < kZeroWidthTol) {
                ++zero_ticks[i];
                ++zeros;
            }
        }
        if (zeros != 0 && zeros != n) tr.synchronized = false;

        double p_est = p_true;
        if (sensor) p_est = sensor->measure(true_power).estimate;

        const std::size_t step =
            nested ? std::min(k / ticks_per_step, plan.steps() - 1)
                   : std::min(static_cast<std::size_t>(std::floor(t_s / plan_dt_s + 1e-9)), plan.steps() - 1);
        const double p_ref = plan.p_total_ref[step];

        double v = 0.0;
        if (options.control_enabled) {
            const PidOutput out = pid_velocity(pid, p_est - p_ref, dt_s, options.gains);
            pid = out.state;
            v = out.v;
        }

        tr.time_s[k] = t_s;
        tr.p_ref_kw[k] = p_ref;
        tr.p_true_kw[k] = p_true;
        tr.p_est_kw[k] = p_est;
        tr.v_per_h[k] = v;
        tr.delivered_energy_kwh += p_true * dt_h;
        tr.planned_energy_kwh += p_ref * dt_h;

        for (std::size_t i = 0; i < n; ++i) {
            auto& h = homes[i];
            const double eq = theta_a - (mode[i] != 0 ? h.params.on_drop() : 0.0);
            h.state.theta = integrate_with_decay(h.state.theta, eq, decay[i]);
            h.state.sigma = mode[i];
            h.state.t += dt_h;
            const double viol = std::max({0.0, h.params.lower0() - h.state.theta, h.state.theta - h.params.upper0()});
            tr.max_comfort_violation_c = std::max(tr.max_comfort_violation_c, viol);
            bands[i] = apply_velocity(bands[i], h.params, v, dt_s);
            h.state.s = bands[i].s;
        }
    }
    if (sensor) tr.empty_report_ticks = sensor->empty_ticks();

    tr.local_time.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        tr.local_time[i] = std::clamp(static_cast<double>(zero_ticks[i]) * dt_s / horizon_s, 0.0, 1.0);
    }
    tr.final_population = std::move(homes);
    return tr;
}

}  // namespace acfleet
