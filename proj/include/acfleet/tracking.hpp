#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "acfleet/ambient.hpp"
#include "acfleet/control.hpp"
#include "acfleet/planning.hpp"
#include "acfleet/population.hpp"
#include "acfleet/privacy.hpp"

namespace acfleet {

struct TrackingOptions {
    PidGains gains;
    double dt_ctrl_s = 1.0;
    std::optional<PrivacyParams> privacy;  ///< feed back the private estimate instead of the true sum
    bool control_enabled = true;           ///< false: v = 0 (uncontrolled baseline)
    bool record_widths = false;            ///< keep the full per-home width matrix
};

/// Per-tick record of a tracking run. Tick k covers [k dt, (k+1) dt); the
/// powers are measured at its start and the width is that of the band used
/// during the tick.
struct TrackingTrace {
    double dt_s = 1.0;
    std::size_t homes = 0;
    std::vector<double> time_s;
    std::vector<double> p_ref_kw;
    std::vector<double> p_true_kw;
    std::vector<double> p_est_kw;
    std::vector<double> v_per_h;
    std::vector<double> widths;  ///< row-major [tick][home] when recorded

    double delivered_energy_kwh = 0.0;  ///< Σ P_true dt
    double planned_energy_kwh = 0.0;    ///< Σ P_ref dt
    double max_comfort_violation_c = 0.0;
    std::vector<double> local_time;  ///< ξ_T per home
    bool synchronized = true;        ///< zero-width ticks coincide across homes
    std::size_t empty_report_ticks = 0;
    Population final_population;

    [[nodiscard]] std::size_t ticks() const { return time_s.size(); }
    [[nodiscard]] double width(std::size_t tick, std::size_t home) const { return widths[tick * homes + home]; }
};

/// Closed-loop tracking of `plan` over its horizon at the control step.
/// Throws std::invalid_argument for a control step larger than the planning
/// step or a plan sized for a different population, and ThermalDomainError
/// when the realized ambient falls to a home's upper comfort edge.
TrackingTrace track(const Population& population, const ReferencePlan& plan, const AmbientTrajectory& realized,
                    const TrackingOptions& options);

}  // namespace acfleet
