#include "acfleet/milp_oracle.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace acfleet {

namespace {

class Enumerator {
public:
    explicit Enumerator(const LpInstance& lp)
        : lp_(lp),
          n_(lp.homes()),
          mu_(lp.steps()),
          theta_(n_ * (mu_ + 1)),
          u_(n_ * mu_, 0.0),
          best_u_(n_ * mu_, 0.0) {
        for (std::size_t i = 0; i < n_; ++i) theta_[i * (mu_ + 1)] = lp.home_rows()[i].theta0;
        max_step_energy_ = 0.0;
        for (const auto& h : lp.home_rows()) max_step_energy_ += h.energy_per_unit;
        if (lp.budget_kwh()) budget_tol_ = 1e-9 * std::max(1.0, *lp.budget_kwh());
    }

    bool run() {
        visit(0, 0.0, 0.0);
        return found_;
    }

    [[nodiscard]] const std::vector<double>& best() const { return best_u_; }

private:
    // Variables are ordered step-major so each decision completes one Euler update.
    void visit(std::size_t pos, double cost, double energy) {
        const auto& budget = lp_.budget_kwh();
        if (pos == n_ * mu_) {
            if (budget && std::abs(energy - *budget) > budget_tol_) return;
            if (!found_ || cost < best_cost_) {
                found_ = true;
                best_cost_ = cost;
                best_u_ = u_;
            }
            return;
        }
        if (found_ && cost >= best_cost_) return;
        const std::size_t k = pos / n_;
        const std::size_t i = pos % n_;
        if (budget) {
            if (energy > *budget + budget_tol_) return;
            const double steps_left = static_cast<double>(mu_ - k);
            if (energy + steps_left * max_step_energy_ < *budget - budget_tol_) return;
        }
        const auto& h = lp_.home_rows()[i];
        const double z = h.a * theta_[i * (mu_ + 1) + k] + lp_.forcing(i, k);
        for (int on = 1; on >= 0; --on) {
            const double th = z - h.g * on;
            if (th < h.lower - 1e-12 || th > h.upper + 1e-12) continue;
            theta_[i * (mu_ + 1) + k + 1] = th;
            u_[i * mu_ + k] = on;
            const double e = on * h.energy_per_unit;
            visit(pos + 1, cost + e * lp_.price_usd_per_kwh()[k], energy + e);
            u_[i * mu_ + k] = 0.0;
        }
    }

    const LpInstance& lp_;
    std::size_t n_;
    std::size_t mu_;
    std::vector<double> theta_;
    std::vector<double> u_;
    std::vector<double> best_u_;
    double max_step_energy_ = 0.0;
    double budget_tol_ = 0.0;
    bool found_ = false;
    double best_cost_ = std::numeric_limits<double>::infinity();
};

}  // namespace

ReferencePlan milp_oracle(const LpInstance& lp, std::size_t max_dim) {
    const std::size_t dim = lp.homes() * lp.steps();
    if (dim > max_dim) {
        throw OracleDimensionError("MILP oracle: N*mu = " + std::to_string(dim) + " exceeds cap " +
                                   std::to_string(max_dim));
    }
    Enumerator en(lp);
    if (!en.run()) throw InfeasibleError("MILP oracle: no feasible binary control sequence", "milp", 0.0, 0.0);

    const std::size_t n = lp.homes();
    const std::size_t mu = lp.steps();
    ReferencePlan plan;
    plan.dt_h = lp.dt_h();
    plan.homes = n;
    plan.per_home_u = en.best();
    plan.p_total_ref.assign(mu, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double pe = lp.home_rows()[i].energy_per_unit / lp.dt_h();
        double on_steps = 0.0;
        for (std::size_t k = 0; k < mu; ++k) {
            plan.p_total_ref[k] += pe * plan.per_home_u[i * mu + k];
            on_steps += plan.per_home_u[i * mu + k];
        }
        plan.energy_kwh += on_steps * lp.home_rows()[i].energy_per_unit;
    }
    plan.objective_cost = plan_cost(lp, plan.per_home_u);
    return plan;
}

ReferencePlan milp_oracle(const PlanningProblem& problem, std::size_t max_dim) {
    if (problem.population.size() * problem.steps() > max_dim) {
        throw OracleDimensionError("MILP oracle: problem exceeds dimension cap");
    }
    return milp_oracle(build_lp(problem), max_dim);
}

}  // namespace acfleet
