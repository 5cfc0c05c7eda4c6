#include <doctest.h>

#include <cmath>

#include "acfleet/milp_oracle.hpp"
#include "acfleet/pricing.hpp"
#include "helpers.hpp"

using namespace acfleet;
using testutil::make_home;
using testutil::make_problem;

namespace {

// Three homes over 1.5 h at 15 minute steps; budget of exactly two ON steps.
PlanningProblem toy_problem() {
    auto pr = make_problem({make_home(20.0, 20.0, 2.0), make_home(20.0, 20.0, 2.5), make_home(20.0, 20.0, 3.0)},
                           {30.0, 60.0}, 24.0, 1.5, 0.25);
    pr.energy_budget_kwh = 2.0 * 5.6 * 0.25;
    return pr;
}

PlanningProblem without(const PlanningProblem& pr, std::size_t i) {
    PlanningProblem r = pr;
    r.population.erase(r.population.begin() + static_cast<std::ptrdiff_t>(i));
    return r;
}

}  // namespace

TEST_CASE("identical homes receive identical quotes") {
    Population pop{make_home(20.3), make_home(20.3), make_home(19.8, 20.0, 0.5), make_home(21.0, 20.5, 1.5),
                   make_home(20.0, 19.5, 0.8)};
    auto pr = make_problem(pop, {40.0, 25.0, 18.0, 30.0, 75.0, 90.0, 60.0, 35.0}, 23.5, 8.0, 0.25);
    pr.energy_budget_kwh = 0.5 * (feasibility_bounds(pr).e_l + feasibility_bounds(without(pr, 0)).e_u);
    const auto q = marginal_values(pr, {0, 1});
    REQUIRE(q.size() == 2);
    REQUIRE(q[0].feasible);
    REQUIRE(q[1].feasible);
    CHECK(q[0].marginal_value == doctest::Approx(q[1].marginal_value).epsilon(1e-6));
}

TEST_CASE("quotes agree with the dense simplex and the enumeration oracle on a toy fleet") {
    const auto pr = toy_problem();
    const auto quotes = marginal_values(pr, {2, 0, 1, 1});
    REQUIRE(quotes.size() == 3);
    const double j_lp = solve_lp_dense(build_lp(pr)).objective_cost;
    const double j_milp = milp_oracle(pr).objective_cost;
    CHECK(j_lp <= j_milp + 1e-12);
    for (const auto& q : quotes) {
        REQUIRE(q.feasible);
        const auto reduced = without(pr, q.home_id);
        const double jr_lp = solve_lp_dense(build_lp(reduced)).objective_cost;
        const double jr_milp = milp_oracle(reduced).objective_cost;
        CHECK(q.marginal_value == doctest::Approx(jr_lp - j_lp).epsilon(1e-6));
        const double gaps = (j_milp - j_lp) + (jr_milp - jr_lp);
        CHECK(std::abs(q.marginal_value - (jr_milp - j_milp)) <= gaps + 1e-9);
        CHECK(q.delta == pr.population[q.home_id].params.delta);
    }
    CHECK(quotes[0].home_id == 0);
    CHECK(quotes[2].home_id == 2);
}

TEST_CASE("fixed-budget removal can lower the cost") {
    // The remaining homes absorb the budget at cheap hours while the removed
    // home's forced peak consumption disappears.
    Population pop{make_home(20.0, 20.0, 0.2)};
    for (int i = 0; i < 4; ++i) pop.push_back(make_home(20.0));
    auto pr = make_problem(pop, {10.0, 10.0, 10.0, 80.0, 80.0, 80.0}, 23.0, 6.0, 0.25);
    pr.energy_budget_kwh = 0.5 * (feasibility_bounds(pr).e_l + feasibility_bounds(without(pr, 0)).e_u);
    const auto q = marginal_values(pr, {0});
    REQUIRE(q[0].feasible);
    const double dense = solve_lp_dense(build_lp(without(pr, 0))).objective_cost -
                         solve_lp_dense(build_lp(pr)).objective_cost;
    CHECK(q[0].marginal_value == doctest::Approx(dense).epsilon(1e-6));
    CHECK(q[0].marginal_value < 0.0);
}

TEST_CASE("removals that break the budget are flagged") {
    auto pr = make_problem({make_home(20.0), make_home(20.0)}, std::vector<double>(24, 30.0), 32.0, 24.0, 0.5);
    const auto fb = feasibility_bounds(pr);
    pr.energy_budget_kwh = fb.e_u * 0.95;
    const auto q = marginal_values(pr, {0, 1});
    CHECK_FALSE(q[0].feasible);
    CHECK_FALSE(q[0].reason.empty());
    CHECK_THROWS_AS(fit_price_line(q), std::invalid_argument);
    CHECK_THROWS_AS(marginal_values(pr, {5}), std::out_of_range);
}

TEST_CASE("price line fit") {
    auto quote = [](double d, double v) {
        ContractQuote q;
        q.delta = d;
        q.marginal_value = v;
        return q;
    };
    const auto exact = fit_price_line({quote(0.2, 3.0), quote(0.6, 2.0), quote(1.0, 1.0)});
    CHECK(exact.slope == doctest::Approx(-2.5));
    CHECK(exact.intercept == doctest::Approx(3.5));
    CHECK(exact.residual_rms == doctest::Approx(0.0));

    const auto two = fit_price_line({quote(0.5, 1.0), quote(1.0, 4.0)});
    CHECK(two.slope == doctest::Approx(6.0));
    CHECK(two.intercept == doctest::Approx(-2.0));

    const auto flat = fit_price_line({quote(0.5, 1.0), quote(0.5, 3.0)});
    CHECK(flat.degenerate);
    CHECK(flat.slope == 0.0);
    CHECK(flat.intercept == doctest::Approx(2.0));

    auto skipped = quote(0.1, 100.0);
    skipped.feasible = false;
    const auto with_skip = fit_price_line({quote(0.2, 3.0), skipped, quote(1.0, 1.0)});
    CHECK(with_skip.points == 2);
    CHECK(with_skip.slope == doctest::Approx(-2.5));

    const auto a = fit_price_line({quote(0.3, 1.0), quote(0.9, 0.4), quote(0.5, 0.8)});
    const auto b = fit_price_line({quote(0.5, 0.8), quote(0.3, 1.0), quote(0.9, 0.4)});
    CHECK(a.slope == b.slope);
    CHECK(a.intercept == b.intercept);
}
