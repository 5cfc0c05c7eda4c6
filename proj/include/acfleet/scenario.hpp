#pragma once

#include <cstdint>
#include <string>

#include "acfleet/ambient.hpp"
#include "acfleet/planning.hpp"

namespace acfleet {

/// A forecast/realization triple: price forecast, ambient forecast and the
/// ambient the fleet actually experiences.
struct Scenario {
    std::string id;
    HourlyPrice price;
    AmbientTrajectory forecast;
    AmbientTrajectory realized;

    /// Throws std::invalid_argument unless all three cover [0, horizon].
    void validate(double horizon_h) const;
};

enum class ScenarioKind { HotDay, MildDay, PriceRamp };

ScenarioKind parse_scenario_kind(const std::string& name);
std::string to_string(ScenarioKind kind);

struct SynthOptions {
    /// $/MWh added per °C of forecast ambient above its daily mean.
    double temp_price_coupling = 0.0;
    /// Mean offset of the realized ambient relative to the forecast, °C.
    double realized_bias_c = 0.0;
    /// Amplitude of the smooth forecast error, °C.
    double realized_noise_c = 0.3;
    /// Peak-to-peak amplitude of the i.i.d. hourly price jitter, $/MWh.
    double price_jitter = 4.0;
};

/// Synthetic day (24 h, ambient sampled every 5 minutes, hourly prices).
///
/// hot-day: forecast ambient in [32, 38] °C with an afternoon peak.
/// mild-day: forecast ambient in [27, 31] °C.
/// price-ramp: constant 32 °C forecast, strictly increasing prices.
/// Deterministic in `seed`.
Scenario synth_scenario(ScenarioKind kind, std::uint64_t seed, const SynthOptions& options = {});

}  // namespace acfleet
