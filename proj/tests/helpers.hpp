#pragma once

#include <random>
#include <vector>

#include "acfleet/planning.hpp"

namespace testutil {

inline acfleet::Home make_home(double theta0, double s0 = 20.0, double delta = 1.0, double alpha = 0.05,
                               double beta = 0.1, double p = 14.0, double eta = 2.5) {
    acfleet::Home h;
    h.params.alpha = alpha;
    h.params.beta = beta;
    h.params.p_thermal = p;
    h.params.eta = eta;
    h.params.delta = delta;
    h.params.s0 = s0;
    h.state.theta = theta0;
    h.state.s = s0;
    return h;
}

inline acfleet::PlanningProblem make_problem(acfleet::Population pop, std::vector<double> hourly_price,
                                             double ambient_c, double horizon_h, double dt_h) {
    acfleet::PlanningProblem pr;
    pr.population = std::move(pop);
    pr.price.usd_per_mwh = std::move(hourly_price);
    pr.ambient = acfleet::AmbientTrajectory::constant(ambient_c, horizon_h);
    pr.horizon_h = horizon_h;
    pr.dt_h = dt_h;
    return pr;
}

/// Random small instance: N homes, mu steps of dt hours, random prices.
inline acfleet::PlanningProblem random_problem(std::mt19937_64& rng, std::size_t n, std::size_t mu, double dt) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    acfleet::Population pop;
    for (std::size_t i = 0; i < n; ++i) {
        const double delta = 0.5 + 1.5 * u(rng);
        const double s0 = 19.0 + 3.0 * u(rng);
        const double theta0 = s0 - delta + 2.0 * delta * u(rng);
        pop.push_back(make_home(theta0, s0, delta, 0.04 + 0.02 * u(rng), 0.08 + 0.04 * u(rng)));
    }
    const double horizon = dt * static_cast<double>(mu);
    std::vector<double> price(static_cast<std::size_t>(std::ceil(horizon - 1e-9)));
    for (auto& p : price) p = 10.0 + 90.0 * u(rng);
    std::vector<std::pair<double, double>> amb;
    for (double t = 0.0; t <= horizon + 1e-9; t += 0.5) amb.emplace_back(t, 30.0 + 4.0 * u(rng));
    if (amb.back().first < horizon) amb.emplace_back(horizon, 32.0);
    acfleet::PlanningProblem pr;
    pr.population = std::move(pop);
    pr.price.usd_per_mwh = std::move(price);
    pr.ambient = acfleet::AmbientTrajectory(std::move(amb));
    pr.horizon_h = horizon;
    pr.dt_h = dt;
    return pr;
}

}  // namespace testutil
