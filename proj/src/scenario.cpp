#include "acfleet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace acfleet {

void Scenario::validate(double horizon_h) const {
    if (price.horizon() + 1e-9 < horizon_h) throw std::invalid_argument("scenario " + id + ": price too short");
    if (!forecast.covers(0.0, horizon_h)) throw std::invalid_argument("scenario " + id + ": forecast too short");
    if (!realized.covers(0.0, horizon_h)) throw std::invalid_argument("scenario " + id + ": realized too short");
}

ScenarioKind parse_scenario_kind(const std::string& name) {
    if (name == "hot-day") return ScenarioKind::HotDay;
    if (name == "mild-day") return ScenarioKind::MildDay;
    if (name == "price-ramp") return ScenarioKind::PriceRamp;
    throw std::invalid_argument("unknown scenario kind '" + name + "'");
}

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::HotDay: return "hot-day";
        case ScenarioKind::MildDay: return "mild-day";
        case ScenarioKind::PriceRamp: return "price-ramp";
    }
    return "hot-day";
}

Scenario synth_scenario(ScenarioKind kind, std::uint64_t seed, const SynthOptions& options) {
    constexpr double kHorizon = 24.0;
    constexpr int kSamplesPerHour = 12;
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double mean = 32.0;
    double amplitude = 0.0;
    switch (kind) {
        case ScenarioKind::HotDay:
            mean = 34.5 + unit(rng);
            amplitude = 2.0 + 0.5 * unit(rng);
            break;
        case ScenarioKind::MildDay:
            mean = 28.5 + unit(rng);
            amplitude = 1.0 + 0.5 * unit(rng);
            break;
        case ScenarioKind::PriceRamp:
            break;
    }
    const double peak_hour = 14.0 + 2.0 * unit(rng);
    auto forecast_at = [&](double t) { return mean + amplitude * std::cos(kTwoPi * (t - peak_hour) / kHorizon); };

    // Smooth forecast error: two low-frequency harmonics with random phases.
    const double ph1 = kTwoPi * unit(rng);
    const double ph2 = kTwoPi * unit(rng);
    auto error_at = [&](double t) {
        return options.realized_bias_c +
               options.realized_noise_c * (0.7 * std::sin(kTwoPi * t / 12.0 + ph1) + 0.3 * std::sin(kTwoPi * t / 5.0 + ph2));
    };

    std::vector<std::pair<double, double>> fc;
    std::vector<std::pair<double, double>> re;
    for (int j = 0; j <= static_cast<int>(kHorizon) * kSamplesPerHour; ++j) {
        const double t = static_cast<double>(j) / kSamplesPerHour;
        const double f = forecast_at(t);
        fc.emplace_back(t, f);
        re.emplace_back(t, f + error_at(t));
    }

    Scenario sc;
    sc.id = to_string(kind) + "-" + std::to_string(seed);
    sc.forecast = AmbientTrajectory(std::move(fc));
    sc.realized = AmbientTrajectory(std::move(re));
    sc.price.usd_per_mwh.resize(static_cast<std::size_t>(kHorizon));
    if (kind == ScenarioKind::PriceRamp) {
        for (std::size_t h = 0; h < sc.price.usd_per_mwh.size(); ++h) {
            sc.price.usd_per_mwh[h] = 20.0 + 3.0 * static_cast<double>(h) + unit(rng);
        }
    } else {
        const double day_mean = sc.forecast.mean(0.0, kHorizon);
        for (std::size_t h = 0; h < sc.price.usd_per_mwh.size(); ++h) {
            const double t = static_cast<double>(h) + 0.5;
            const double shape = std::max(0.0, std::sin(std::numbers::pi * (t - 6.0) / 16.0));
            const double coupled = options.temp_price_coupling * (forecast_at(t) - day_mean);
            sc.price.usd_per_mwh[h] = std::max(1.0, 25.0 + 20.0 * shape + coupled + options.price_jitter * (unit(rng) - 0.5));
        }
    }
    return sc;
}

}  // namespace acfleet
