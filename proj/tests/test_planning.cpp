#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "acfleet/milp_oracle.hpp"
#include "acfleet/planning.hpp"
#include "helpers.hpp"

using namespace acfleet;
using testutil::make_home;
using testutil::make_problem;

TEST_CASE("feasibility bounds for a single home by direct substitution") {
    auto pr = make_problem({make_home(25.0, 25.0, 5.0)}, std::vector<double>(24, 30.0), 32.0, 24.0, 1.0 / 60.0);
    const auto b = feasibility_bounds(pr);
    CHECK(b.mean_ambient == doctest::Approx(32.0));
    CHECK(std::abs(b.tau_bar_l - 1.0 / 14.0) <= 1e-12);
    CHECK(std::abs(b.tau_bar_u - 6.0 / 14.0) <= 1e-12);
    CHECK(b.e_min == 0.0);
    CHECK(b.e_max == doctest::Approx(14.0 * 24.0 / 2.5));
    CHECK(b.warnings.empty());
}

TEST_CASE("E_max of 500 identical units is exact") {
    Population pop(500, make_home(20.0));
    auto pr = make_problem(pop, std::vector<double>(24, 30.0), 32.0, 24.0, 1.0 / 60.0);
    const auto b = feasibility_bounds(pr);
    CHECK(b.e_max == 67200.0);
    CHECK(b.energy_of(1.0 / 3.0) == 22400.0);
}

TEST_CASE("ambient at the upper edge gives a zero lower bound") {
    auto pr = make_problem({make_home(20.0)}, std::vector<double>(24, 30.0), 21.0 + 1e-12, 24.0, 1.0);
    const auto b = feasibility_bounds(pr);
    CHECK(std::abs(b.tau_bar_l) < 1e-12);
}

TEST_CASE("ambient not above the band is reported") {
    auto pr = make_problem({make_home(20.0)}, std::vector<double>(24, 30.0), 21.0, 24.0, 1.0);
    CHECK_THROWS_AS(feasibility_bounds(pr), InfeasibleError);
}

TEST_CASE("pointwise holding warning") {
    // α/β (θa - U) = 0.5 * 40 = 20 > P = 14 near the peak.
    std::vector<std::pair<double, double>> amb{{0.0, 30.0}, {12.0, 61.0}, {24.0, 30.0}};
    auto pr = make_problem({make_home(20.0)}, std::vector<double>(24, 30.0), 32.0, 24.0, 1.0);
    pr.ambient = AmbientTrajectory(amb);
    CHECK_FALSE(feasibility_bounds(pr).warnings.empty());
}

TEST_CASE("budget outside the closed-form bounds names the bound") {
    auto pr = make_problem({make_home(20.0)}, std::vector<double>(24, 30.0), 32.0, 24.0, 1.0 / 60.0);
    const auto b = feasibility_bounds(pr);
    pr.energy_budget_kwh = 0.5 * b.e_l;
    try {
        (void)build_lp(pr);
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        CHECK(e.bound() == "E_l");
    }
    pr.energy_budget_kwh = b.e_u * 1.01;
    try {
        (void)build_lp(pr);
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        CHECK(e.bound() == "E_u");
    }
}

TEST_CASE("LP dimensions") {
    auto pr = make_problem({make_home(20.0)}, std::vector<double>(24, 30.0), 32.0, 24.0, 1.0 / 60.0);
    const auto b = feasibility_bounds(pr);
    pr.energy_budget_kwh = b.energy_of(0.5 * (b.tau_bar_l + b.tau_bar_u));
    const auto lp = build_lp(pr);
    CHECK(lp.num_variables() == 2880);
    CHECK(lp.num_equality_rows() == 1441);
    const auto sp = lp.to_sparse();
    CHECK(sp.rows.size() == 1441);
    CHECK(sp.objective.size() == 2880);

    pr.energy_budget_kwh.reset();
    CHECK(build_lp(pr).num_equality_rows() == 1440);

    pr.dt_h = 1.0 / 120.0;
    pr.energy_budget_kwh = b.energy_of(0.5 * (b.tau_bar_l + b.tau_bar_u));
    const auto fine = build_lp(pr);
    CHECK(fine.num_variables() == 5760);
    CHECK(fine.num_equality_rows() == 2881);
}

TEST_CASE("degenerate comfort band and unstable step are rejected") {
    auto pr = make_problem({make_home(20.0, 20.0, 1e-7)}, std::vector<double>(24, 30.0), 32.0, 24.0, 1.0);
    CHECK_THROWS_AS(pr.validate(), PlanningError);
    auto pr2 = make_problem({make_home(20.0, 20.0, 1.0, 1.5)}, std::vector<double>(24, 30.0), 32.0, 24.0, 1.0);
    CHECK_THROWS_AS(pr2.validate(), PlanningError);
    auto pr3 = make_problem({make_home(20.0)}, std::vector<double>(24, 30.0), 32.0, 24.0, 0.7);
    CHECK_THROWS_AS(pr3.validate(), PlanningError);
}

TEST_CASE("to_sparse rows are satisfied by the Euler trajectory of a plan") {
    std::mt19937_64 rng(3);
    auto pr = testutil::random_problem(rng, 2, 8, 0.5);
    const auto lp = build_lp(pr);
    const auto plan = solve_lp(lp);
    const auto sp = lp.to_sparse();
    std::vector<double> x(lp.num_variables());
    for (std::size_t i = 0; i < lp.homes(); ++i) {
        std::vector<double> row(plan.per_home_u.begin() + i * lp.steps(), plan.per_home_u.begin() + (i + 1) * lp.steps());
        const auto theta = simulate_euler(lp, i, row);
        for (std::size_t k = 0; k < lp.steps(); ++k) {
            x[lp.theta_index(i, k)] = theta[k];
            x[lp.u_index(i, k)] = row[k];
        }
    }
    for (const auto& r : sp.rows) {
        double lhs = 0.0;
        for (const auto& [j, v] : r.coefs) lhs += v * x[j];
        CHECK(lhs == doctest::Approx(r.rhs).epsilon(1e-12));
    }
    double obj = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) obj += sp.objective[j] * x[j];
    CHECK(obj == doctest::Approx(plan.objective_cost).epsilon(1e-12));
}

TEST_CASE("decomposition agrees with the dense simplex on random small instances") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int compared = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const std::size_t mu = 4 + static_cast<std::size_t>(u(rng) * 9);
        auto pr = testutil::random_problem(rng, n, mu, 0.5);
        const auto b = feasibility_bounds(pr);
        if (trial % 4 != 0) pr.energy_budget_kwh = b.energy_of(b.tau_bar_l + u(rng) * (b.tau_bar_u - b.tau_bar_l));
        const auto lp = build_lp(pr);
        bool dense_ok = true;
        ReferencePlan dense;
        try {
            dense = solve_lp_dense(lp);
        } catch (const InfeasibleError&) {
            dense_ok = false;
        }
        if (!dense_ok) {
            CHECK_THROWS_AS(solve_lp(lp), InfeasibleError);
            continue;
        }
        const auto fast = solve_lp(lp);
        CAPTURE(trial);
        CHECK(fast.objective_cost == doctest::Approx(dense.objective_cost).epsilon(1e-6));
        CHECK(fast.primal_residual <= 1e-7);
        if (pr.energy_budget_kwh) {
            CHECK(std::abs(fast.energy_kwh - *pr.energy_budget_kwh) <= 1e-7 * *pr.energy_budget_kwh);
        }
        for (double v : fast.per_home_u) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        ++compared;
    }
    CHECK(compared >= 30);
}

TEST_CASE("without a budget the plan uses close to E_l") {
    auto pr = make_problem({make_home(21.0)}, std::vector<double>(24, 30.0), 32.0, 24.0, 1.0 / 60.0);
    const auto b = feasibility_bounds(pr);
    const auto plan = solve_lp(build_lp(pr));
    // Euler holding at U0 costs α(θa - U0)/(βP) per step, i.e. the closed form exactly.
    CHECK(plan.energy_kwh == doctest::Approx(b.e_l).epsilon(1e-9));
}

TEST_CASE("zero prices give zero objective") {
    auto pr = make_problem({make_home(20.0), make_home(20.5)}, std::vector<double>(24, 0.0), 32.0, 24.0, 0.25);
    const auto b = feasibility_bounds(pr);
    pr.energy_budget_kwh = b.energy_of(0.5 * (b.tau_bar_l + b.tau_bar_u));
    const auto plan = solve_lp(build_lp(pr));
    CHECK(plan.objective_cost == 0.0);
    CHECK(plan.energy_kwh == doctest::Approx(*pr.energy_budget_kwh).epsilon(1e-9));
}

TEST_CASE("constant price: objective equals budget times price") {
    auto pr = make_problem({make_home(20.0), make_home(20.5)}, std::vector<double>(24, 40.0), 32.0, 24.0, 0.25);
    const auto b = feasibility_bounds(pr);
    pr.energy_budget_kwh = b.energy_of(0.6 * b.tau_bar_l + 0.4 * b.tau_bar_u);
    const auto plan = solve_lp(build_lp(pr));
    CHECK(plan.objective_cost == doctest::Approx(*pr.energy_budget_kwh * 0.040).epsilon(1e-9));
}

TEST_CASE("doubling prices doubles the objective") {
    std::mt19937_64 rng(11);
    auto pr = testutil::random_problem(rng, 3, 48, 0.5);
    const auto b = feasibility_bounds(pr);
    pr.energy_budget_kwh = b.energy_of(b.tau_bar_l + 0.4 * (b.tau_bar_u - b.tau_bar_l));
    const auto base = solve_lp(build_lp(pr));
    for (auto& p : pr.price.usd_per_mwh) p *= 2.0;
    const auto doubled = solve_lp(build_lp(pr));
    CHECK(doubled.objective_cost == doctest::Approx(2.0 * base.objective_cost).epsilon(1e-7));
}

TEST_CASE("widening a band never raises the optimal cost") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto pr = testutil::random_problem(rng, 2, 10, 0.5);
        const auto b = feasibility_bounds(pr);
        pr.energy_budget_kwh = b.energy_of(b.tau_bar_l + 0.5 * (b.tau_bar_u - b.tau_bar_l));
        double narrow = 0.0;
        try {
            narrow = solve_lp(build_lp(pr)).objective_cost;
        } catch (const InfeasibleError&) {
            continue;
        }
        auto wide = pr;
        wide.population[0].params.delta += 0.5;
        wide.energy_budget_kwh = pr.energy_budget_kwh;
        const double widened = solve_lp(build_lp(wide)).objective_cost;
        CHECK(widened <= narrow * (1.0 + 1e-7) + 1e-12);
        CHECK(widened <= solve_lp_dense(build_lp(pr)).objective_cost * (1.0 + 1e-7) + 1e-12);
    }
}

TEST_CASE("LP optimum bounds the enumeration optimum") {
    std::mt19937_64 rng(8);
    int compared = 0;
    for (int trial = 0; trial < 20; ++trial) {
        auto pr = testutil::random_problem(rng, 2, 6, 0.5);
        const auto lp = build_lp(pr);
        ReferencePlan milp;
        try {
            milp = milp_oracle(lp);
        } catch (const InfeasibleError&) {
            continue;
        }
        const auto relaxed = solve_lp(lp);
        CHECK(relaxed.objective_cost <= milp.objective_cost + 1e-12);
        ++compared;
    }
    CHECK(compared > 0);
}

TEST_CASE("MILP oracle switches on in the earliest feasible steps under increasing prices") {
    // Unit drops 0.35 °C per ON step and warms about 0.3 °C per OFF step.
    std::vector<double> prices;
    for (int h = 0; h < 3; ++h) prices.push_back(20.0 + 10.0 * h);
    auto pr = make_problem({make_home(24.0, 20.0, 5.0)}, prices, 32.0, 2.5, 0.25);
    const auto lp0 = build_lp(pr);
    const double e = lp0.home_rows()[0].energy_per_unit;
    pr.energy_budget_kwh = 4.0 * e;
    const auto plan = milp_oracle(pr);
    for (std::size_t k = 0; k < 10; ++k) CHECK(plan.u(0, k) == (k < 4 ? 1.0 : 0.0));
    CHECK(plan.energy_kwh == doctest::Approx(4.0 * e));
}

TEST_CASE("MILP oracle dimension cap") {
    auto pr = make_problem({make_home(20.0), make_home(20.0)}, std::vector<double>(24, 30.0), 32.0, 6.0, 0.5);
    CHECK_THROWS_AS(milp_oracle(pr), OracleDimensionError);
}

TEST_CASE("reference power holds the step value") {
    ReferencePlan plan;
    plan.dt_h = 0.5;
    plan.homes = 1;
    plan.p_total_ref = {1.0, 2.0, 3.0};
    CHECK(reference_power(plan, 0.0) == 1.0);
    CHECK(reference_power(plan, 0.49) == 1.0);
    CHECK(reference_power(plan, 0.5) == 2.0);
    CHECK(reference_power(plan, 1.2) == 3.0);
    CHECK(reference_power(plan, 1.5) == 3.0);
    CHECK_THROWS_AS(reference_power(plan, 1.6), std::out_of_range);
    CHECK_THROWS_AS(reference_power(plan, -0.1), std::out_of_range);

    Population pop(500, make_home(20.0));
    auto pr = make_problem(pop, std::vector<double>(24, 30.0), 32.0, 1.0, 0.5);
    const auto lp = build_lp(pr);
    const std::vector<double> all_on(500 * 2, 1.0);
    ReferencePlan full;
    full.dt_h = 0.5;
    full.homes = 500;
    full.p_total_ref.assign(2, 0.0);
    for (std::size_t i = 0; i < 500; ++i) full.p_total_ref[0] += lp.home_rows()[i].energy_per_unit / 0.5;
    CHECK(full.p_total_ref[0] == doctest::Approx(2800.0));
}

TEST_CASE("price CSV round trip and strictness") {
    HourlyPrice p;
    for (int h = 0; h < 24; ++h) p.usd_per_mwh.push_back(10.0 + h * 0.25);
    std::ostringstream os;
    write_price_csv(os, p);
    std::istringstream is(os.str());
    CHECK(read_price_csv(is).usd_per_mwh == p.usd_per_mwh);

    std::istringstream bad_header("hour,price\n0,1\n");
    CHECK_THROWS_AS(read_price_csv(bad_header), std::invalid_argument);
    std::istringstream short_file("hour,price_usd_per_mwh\n0,1\n1,2\n");
    CHECK_THROWS_AS(read_price_csv(short_file), std::invalid_argument);
    std::istringstream negative("hour,price_usd_per_mwh\n0,-1\n");
    CHECK_THROWS_AS(read_price_csv(negative), std::invalid_argument);
}
