#include "acfleet/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acfleet {

std::vector<ContractQuote> marginal_values(const PlanningProblem& problem, std::vector<std::size_t> home_ids,
                                           const OptTolerances& tol) {
    std::sort(home_ids.begin(), home_ids.end());
    home_ids.erase(std::unique(home_ids.begin(), home_ids.end()), home_ids.end());
    for (std::size_t id : home_ids) {
        if (id >= problem.population.size()) throw std::out_of_range("marginal_values: unknown home id");
    }
    if (problem.population.size() < 2) throw std::invalid_argument("marginal_values: need at least two homes");

    const double base = solve_lp(build_lp(problem), tol).objective_cost;

    std::vector<ContractQuote> quotes;
    quotes.reserve(home_ids.size());
    for (std::size_t id : home_ids) {
        ContractQuote q;
        q.home_id = id;
        q.delta = problem.population[id].params.delta;
        PlanningProblem reduced = problem;
        reduced.population.erase(reduced.population.begin() + static_cast<std::ptrdiff_t>(id));
        try {
            q.marginal_value = solve_lp(build_lp(reduced), tol).objective_cost - base;
        } catch (const InfeasibleError& e) {
            q.feasible = false;
            q.reason = e.what();
        }
        quotes.push_back(std::move(q));
    }
    return quotes;
}

PriceLine fit_price_line(const std::vector<ContractQuote>& quotes) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& q : quotes) {
        if (q.feasible) pts.emplace_back(q.delta, q.marginal_value);
    }
    if (pts.size() < 2) throw std::invalid_argument("fit_price_line: need at least two feasible quotes");
    // Order-independent sums.
    std::sort(pts.begin(), pts.end());
    const double n = static_cast<double>(pts.size());
    double mx = 0.0;
    double my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    PriceLine line;
    line.points = pts.size();
    if (sxx <= 1e-24 * std::max(1.0, mx * mx)) {
        line.degenerate = true;
        line.slope = 0.0;
        line.intercept = my;
    } else {
        line.slope = sxy / sxx;
        line.intercept = my - line.slope * mx;
    }
    double ss = 0.0;
    for (const auto& [x, y] : pts) {
        const double r = y - (line.intercept + line.slope * x);
        ss += r * r;
    }
    line.residual_rms = std::sqrt(ss / n);
    return line;
}

}  // namespace acfleet
