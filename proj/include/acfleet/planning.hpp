#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "acfleet/ambient.hpp"
#include "acfleet/population.hpp"

namespace acfleet {

/// Day-ahead price forecast, piecewise constant per hour, $/MWh.
struct HourlyPrice {
    std::vector<double> usd_per_mwh;

    /// Price in force at time t (hour index floor(t)); the final instant maps
    /// to the last hour. Throws std::out_of_range outside [0, size()].
    [[nodiscard]] double at(double t_h) const;
    [[nodiscard]] double horizon() const { return static_cast<double>(usd_per_mwh.size()); }
};

/// `hour,price_usd_per_mwh` with hours 0..n-1 in order.
HourlyPrice read_price_csv(std::istream& in);
HourlyPrice read_price_csv_file(const std::string& path);
void write_price_csv(std::ostream& out, const HourlyPrice& price);

inline constexpr double kUsdPerKwhPerUsdPerMwh = 0.001;
inline constexpr double kMinDelta = 1e-6;

struct PlanningProblem {
    Population population;
    HourlyPrice price;
    AmbientTrajectory ambient;  ///< forecast θ̂_a
    double horizon_h = 24.0;
    double dt_h = 1.0 / 60.0;
    std::optional<double> energy_budget_kwh;  ///< absent: budget row inactive

    [[nodiscard]] std::size_t steps() const;
    /// Structural checks only (grid, prices, degenerate homes, coverage).
    void validate() const;
};

/// Closed-form feasibility bounds on the normalized budget τ̄ = ηE/(NPT).
struct FeasibilityBounds {
    double tau_bar_l = 0.0;
    double tau_bar_u = 0.0;
    double e_min = 0.0;
    double e_l = 0.0;
    double e_u = 0.0;
    double e_max = 0.0;
    double mean_ambient = 0.0;
    /// Steps where holding some home at its upper edge needs more than full power.
    std::vector<std::string> warnings;

    [[nodiscard]] double tau_bar_of(double energy_kwh) const { return energy_kwh / e_max; }
    [[nodiscard]] double energy_of(double tau_bar) const { return tau_bar * e_max; }
};

/// Raised when a budget or plan cannot be met. `bound` names the violated
/// limit (e.g. "E_l", "E_u", "lp_min_energy") and `limit` is its value.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(const std::string& what, std::string bound, double value, double limit)
        : std::runtime_error(what), bound_(std::move(bound)), value_(value), limit_(limit) {}
    [[nodiscard]] const std::string& bound() const { return bound_; }
    [[nodiscard]] double value() const { return value_; }
    [[nodiscard]] double limit() const { return limit_; }

private:
    std::string bound_;
    double value_;
    double limit_;
};

/// Throws InfeasibleError if the forecast ambient is not above every home's
/// upper comfort edge.
FeasibilityBounds feasibility_bounds(const PlanningProblem& problem);

/// Verifies E_l <= E <= E_u; throws InfeasibleError naming the violated bound.
void check_budget(double energy_kwh, const FeasibilityBounds& bounds);

struct SparseRow {
    std::vector<std::pair<std::size_t, double>> coefs;
    double rhs = 0.0;
};

/// Explicit form: minimize c·x subject to rows (equalities) and box bounds.
struct SparseLp {
    std::vector<double> objective;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<SparseRow> rows;
};

/// Euler-discretized per-home data of the planning LP.
struct HomeRows {
    double a = 1.0;       ///< 1 - alpha*dt
    double g = 0.0;       ///< beta*P*dt, °C per unit control
    double lower = 0.0;   ///< L_i0
    double upper = 0.0;   ///< U_i0
    double theta0 = 0.0;
    double alpha_dt = 0.0;
    double energy_per_unit = 0.0;  ///< (P/η)*dt, kWh per unit control per step
};

/// Discretized planning LP. Decision vector is interleaved as
/// {θ_1(1), u_1(1), ..., θ_N(1), u_N(1), θ_1(2), ...}; θ_i(k) is the
/// temperature at t = k*dt and u_i(k) the control over ((k-1)dt, k dt].
class LpInstance {
public:
    LpInstance(std::vector<HomeRows> homes, std::vector<double> ambient_at_step,
               std::vector<double> price_usd_per_kwh, double dt_h, std::optional<double> budget_kwh);

    [[nodiscard]] std::size_t homes() const { return homes_.size(); }
    [[nodiscard]] std::size_t steps() const { return price_.size(); }
    [[nodiscard]] double dt_h() const { return dt_; }
    [[nodiscard]] const std::optional<double>& budget_kwh() const { return budget_; }
    [[nodiscard]] const std::vector<HomeRows>& home_rows() const { return homes_; }
    [[nodiscard]] const std::vector<double>& ambient() const { return ambient_; }
    [[nodiscard]] const std::vector<double>& price_usd_per_kwh() const { return price_; }

    [[nodiscard]] std::size_t num_variables() const { return 2 * homes() * steps(); }
    [[nodiscard]] std::size_t num_equality_rows() const { return homes() * steps() + (budget_ ? 1 : 0); }
    [[nodiscard]] std::size_t theta_index(std::size_t home, std::size_t step) const {
        return 2 * (step * homes() + home);
    }
    [[nodiscard]] std::size_t u_index(std::size_t home, std::size_t step) const {
        return theta_index(home, step) + 1;
    }
    /// Euler forcing α_i dt θ̂_a at step k.
    [[nodiscard]] double forcing(std::size_t home, std::size_t step) const {
        return homes_[home].alpha_dt * ambient_[step];
    }

    /// Materializes the equality rows, bounds and objective.
    [[nodiscard]] SparseLp to_sparse() const;

private:
    std::vector<HomeRows> homes_;
    std::vector<double> ambient_;
    std::vector<double> price_;
    double dt_;
    std::optional<double> budget_;
};

/// Raised by build_lp / solvers for malformed input.
class PlanningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builds the Euler-discretized LP relaxation. Checks the budget against the
/// closed-form bounds when one is given.
LpInstance build_lp(const PlanningProblem& problem);

struct OptTolerances {
    double feas = 1e-7;  ///< relative primal residual
    double gap = 1e-7;   ///< relative duality gap
    int max_iterations = 400;
    unsigned threads = 0;  ///< 0 = hardware concurrency
};

struct ReferencePlan {
    double dt_h = 0.0;
    std::size_t homes = 0;
    std::vector<double> p_total_ref;  ///< kW per step k = 1..μ
    std::vector<double> per_home_u;   ///< row-major [home][step]
    double objective_cost = 0.0;      ///< $
    double energy_kwh = 0.0;
    double lambda_usd_per_kwh = 0.0;  ///< budget multiplier (0 when inactive)
    double duality_gap = 0.0;         ///< absolute, $
    double primal_residual = 0.0;     ///< max relative violation
    int iterations = 0;

    [[nodiscard]] std::size_t steps() const { return p_total_ref.size(); }
    [[nodiscard]] double horizon_h() const { return dt_h * static_cast<double>(steps()); }
    [[nodiscard]] double u(std::size_t home, std::size_t step) const { return per_home_u[home * steps() + step]; }
};

/// Solves by dual decomposition on the budget row: bisection on the energy
/// price λ with each home's LP solved exactly by a backward pass over its
/// piecewise-linear value function. Throws InfeasibleError or PlanningError.
ReferencePlan solve_lp(const LpInstance& lp, const OptTolerances& tol = {});

/// Dense two-phase simplex (Bland's rule) on the materialized LP. Intended
/// for small reference instances.
ReferencePlan solve_lp_dense(const LpInstance& lp);

/// Zero-order hold of the plan; throws std::out_of_range outside [0, T].
double reference_power(const ReferencePlan& plan, double t_h);

/// Objective of a control trajectory under the instance's prices.
double plan_cost(const LpInstance& lp, const std::vector<double>& per_home_u);

/// Temperatures θ_i(k), k = 1..μ, produced by the Euler dynamics of `lp`.
std::vector<double> simulate_euler(const LpInstance& lp, std::size_t home, const std::vector<double>& u_row);

}  // namespace acfleet
