#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "acfleet/control.hpp"
#include "acfleet/planning.hpp"
#include "acfleet/population.hpp"
#include "acfleet/privacy.hpp"
#include "acfleet/scenario.hpp"

namespace acfleet {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Where the scenario of a run comes from.
struct ScenarioSource {
    std::string kind = "hot-day";  ///< a synthetic kind or "files"
    std::filesystem::path price_csv;
    std::filesystem::path ambient_forecast_csv;
    std::filesystem::path ambient_realized_csv;  ///< defaults to the forecast
    SynthOptions synth;
    std::size_t count = 30;                 ///< scenario-set size
    std::vector<std::string> set_kinds{"hot-day"};  ///< cycled through by the scenario set
};

/// Flat `key = value` configuration; see configs/ for annotated examples.
struct RunConfig {
    std::uint64_t seed = 1;
    PopulationSpec population;

    double horizon_h = 24.0;
    double dt_min = 1.0;
    std::optional<double> tau_bar;
    std::optional<double> energy_kwh;
    /// Budget placed at τ̄_ℓ + x (τ̄_u - τ̄_ℓ) of each scenario's own bounds.
    std::optional<double> tau_bar_position;
    double planner_initial_noise_c = 0.0;  ///< planner sees perturbed θ0 when > 0
    unsigned threads = 0;

    PidGains gains;
    double dt_ctrl_s = 1.0;
    bool control_enabled = true;
    bool uncontrolled_baseline = true;
    bool record_widths = false;

    bool privacy_enabled = false;
    PrivacyParams privacy;
    std::size_t privacy_samples = 100000;
    bool privacy_tracking_check = true;

    ScenarioSource scenario;

    std::vector<std::size_t> contract_homes;  ///< empty: every home

    std::filesystem::path out_dir = "out";

    void validate() const;
};

/// Parses the flat format. Unknown keys, duplicates and malformed values are
/// ConfigErrors. Relative paths resolve against `base_dir`. Numbers may be
/// written as fractions, e.g. `planning.tau_bar = 1/3`.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Keys accepted by parse_config.
const std::vector<std::string>& config_keys();

}  // namespace acfleet
