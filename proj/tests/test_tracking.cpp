#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "acfleet/population.hpp"
#include "acfleet/scenario.hpp"
#include "acfleet/tracking.hpp"
#include "helpers.hpp"

using namespace acfleet;

namespace {

Population small_population(std::size_t n, std::uint64_t seed, DeltaShape shape = DeltaShape::Uniform) {
    PopulationSpec spec;
    spec.n = n;
    spec.seed = seed;
    spec.delta.shape = shape;
    return sample_population(spec);
}

ReferencePlan plan_from_powers(const std::vector<double>& p, double dt_h, std::size_t homes) {
    ReferencePlan plan;
    plan.dt_h = dt_h;
    plan.homes = homes;
    plan.p_total_ref = p;
    plan.per_home_u.assign(homes * p.size(), 0.0);
    return plan;
}

double max_band_excursion(const TrackingTrace& tr) {
    double worst = 0.0;
    for (const auto& h : tr.final_population) {
        worst = std::max({worst, h.state.theta - h.params.upper0(), h.params.lower0() - h.state.theta});
    }
    return worst;
}

void check_sync(const TrackingTrace& tr) {
    CHECK(tr.synchronized);
    for (double xi : tr.local_time) {
        CHECK(xi >= 0.0);
        CHECK(xi <= 1.0);
        CHECK(xi == tr.local_time.front());
    }
}

}  // namespace

TEST_CASE("tracking its own uncontrolled consumption needs no control") {
    const Population pop = small_population(20, 3);
    const auto ambient = AmbientTrajectory::constant(32.0, 2.0);
    TrackingOptions free_run;
    free_run.control_enabled = false;
    const ReferencePlan dummy = plan_from_powers(std::vector<double>(7200, 0.0), 1.0 / 3600.0, pop.size());
    const TrackingTrace base = track(pop, dummy, ambient, free_run);

    const ReferencePlan self = plan_from_powers(base.p_true_kw, 1.0 / 3600.0, pop.size());
    const TrackingTrace tr = track(pop, self, ambient, TrackingOptions{});
    REQUIRE(tr.ticks() == base.ticks());
    for (std::size_t k = 0; k < tr.ticks(); ++k) {
        REQUIRE(tr.p_true_kw[k] == base.p_true_kw[k]);
        REQUIRE(tr.v_per_h[k] == 0.0);
    }
    CHECK(tr.delivered_energy_kwh == doctest::Approx(tr.planned_energy_kwh));
    CHECK(tr.max_comfort_violation_c <= 1e-9);
    check_sync(tr);
    CHECK(tr.local_time.front() == 0.0);
}

TEST_CASE("planned tracking keeps comfort, synchronizes and matches the closed-form width") {
    const Population pop = small_population(30, 11);
    const Scenario sc = synth_scenario(ScenarioKind::HotDay, 4);
    PlanningProblem pr;
    pr.population = pop;
    pr.price = sc.price;
    pr.ambient = sc.forecast;
    pr.horizon_h = 24.0;
    pr.dt_h = 1.0 / 12.0;
    const FeasibilityBounds fb = feasibility_bounds(pr);
    pr.energy_budget_kwh = 0.5 * (fb.e_l + fb.e_u);
    const ReferencePlan plan = solve_lp(build_lp(pr));

    TrackingOptions opt;
    opt.dt_ctrl_s = 5.0;
    opt.record_widths = true;
    const TrackingTrace tr = track(pop, plan, sc.realized, opt);
    CHECK(tr.max_comfort_violation_c <= 1e-9);
    CHECK(max_band_excursion(tr) <= 1e-9);
    check_sync(tr);

    double cv = 0.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < tr.ticks(); ++k) {
        for (std::size_t i = 0; i < tr.homes; ++i) {
            worst = std::max(worst, std::abs(tr.width(k, i) - effective_width_closed_form(pop[i].params.delta, cv)));
            REQUIRE(tr.width(k, i) >= -1e-12);
        }
        cv += tr.v_per_h[k] * tr.dt_s / 3600.0;
    }
    CHECK(worst <= 1e-9);
    CHECK(tr.delivered_energy_kwh > 0.0);
    CHECK(tr.planned_energy_kwh == doctest::Approx(plan.energy_kwh).epsilon(1e-9));
}

TEST_CASE("pinned fleets stay inside the contract band") {
    // Reference far above what the fleet can draw drives every band to the lower edge.
    const Population pop = small_population(15, 8, DeltaShape::Constant);
    const auto ambient = AmbientTrajectory::constant(34.0, 3.0);
    const ReferencePlan high = plan_from_powers(std::vector<double>(36, 15 * 5.6), 1.0 / 12.0, pop.size());
    TrackingOptions opt;
    opt.gains.ki = 1e-4;  // fast integral so saturation sets in within the horizon
    const TrackingTrace tr = track(pop, high, ambient, opt);
    CHECK(tr.max_comfort_violation_c <= 1e-9);
    check_sync(tr);
    CHECK(tr.local_time.front() > 0.5);

    const ReferencePlan low = plan_from_powers(std::vector<double>(36, 0.0), 1.0 / 12.0, pop.size());
    const TrackingTrace tl = track(pop, low, ambient, opt);
    CHECK(tl.max_comfort_violation_c <= 1e-9);
    check_sync(tl);
    CHECK(tl.local_time.front() > 0.5);
}

TEST_CASE("private feedback keeps comfort") {
    const Population pop = small_population(50, 21);
    const auto ambient = AmbientTrajectory::constant(33.0, 2.0);
    const ReferencePlan plan = plan_from_powers(std::vector<double>(24, 90.0), 1.0 / 12.0, pop.size());
    TrackingOptions opt;
    PrivacyParams pp;
    pp.seed = 5;
    opt.privacy = pp;
    const TrackingTrace tr = track(pop, plan, ambient, opt);
    CHECK(tr.max_comfort_violation_c <= 1e-9);
    check_sync(tr);
    bool differs = false;
    for (std::size_t k = 0; k < tr.ticks(); ++k) differs = differs || tr.p_est_kw[k] != tr.p_true_kw[k];
    CHECK(differs);
    const TrackingTrace again = track(pop, plan, ambient, opt);
    CHECK(again.p_est_kw == tr.p_est_kw);
}

TEST_CASE("tracking argument checks") {
    const Population pop = small_population(5, 1);
    const auto ambient = AmbientTrajectory::constant(32.0, 1.0);
    const ReferencePlan plan = plan_from_powers(std::vector<double>(12, 10.0), 1.0 / 12.0, pop.size());
    TrackingOptions big;
    big.dt_ctrl_s = 600.0;
    CHECK_THROWS_AS(track(pop, plan, ambient, big), std::invalid_argument);
    const ReferencePlan wrong = plan_from_powers(std::vector<double>(12, 10.0), 1.0 / 12.0, 4);
    CHECK_THROWS_AS(track(pop, wrong, ambient, TrackingOptions{}), std::invalid_argument);
    CHECK_THROWS_AS(track(pop, plan, AmbientTrajectory::constant(20.5, 1.0), TrackingOptions{}), ThermalDomainError);
    CHECK_THROWS_AS(track(pop, plan, AmbientTrajectory::constant(32.0, 0.5), TrackingOptions{}),
                    std::invalid_argument);
}
