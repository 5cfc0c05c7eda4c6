#include "acfleet/planning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "acfleet/home_lp.hpp"
#include "acfleet/io.hpp"
#include "acfleet/parallel.hpp"
#include "acfleet/simplex.hpp"

namespace acfleet {

// ---------------------------------------------------------------------------
// Prices

double HourlyPrice::at(double t_h) const {
    if (usd_per_mwh.empty()) throw std::out_of_range("price forecast is empty");
    if (t_h < -1e-9 || t_h > horizon() + 1e-9) {
        throw std::out_of_range("price: time " + io::format_double(t_h) + " h outside forecast");
    }
    const auto hour = static_cast<std::size_t>(std::max(0.0, std::floor(t_h)));
    return usd_per_mwh[std::min(hour, usd_per_mwh.size() - 1)];
}

HourlyPrice read_price_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("price CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "hour,price_usd_per_mwh") {
        throw std::invalid_argument("price CSV: expected header 'hour,price_usd_per_mwh'");
    }
    HourlyPrice price;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = io::split_csv_line(line);
        const std::string ctx = "price CSV row " + std::to_string(row);
        if (fields.size() != 2) throw std::invalid_argument(ctx + ": expected 2 columns");
        const auto hour = io::parse_int(fields[0], ctx);
        if (hour != static_cast<long long>(price.usd_per_mwh.size())) {
            throw std::invalid_argument(ctx + ": hours must be 0, 1, 2, ... in order");
        }
        const double p = io::parse_double(fields[1], ctx);
        if (p < 0.0) throw std::invalid_argument(ctx + ": negative price");
        price.usd_per_mwh.push_back(p);
    }
    if (price.usd_per_mwh.size() != 24) {
        throw std::invalid_argument("price CSV: expected 24 hourly rows, got " +
                                    std::to_string(price.usd_per_mwh.size()));
    }
    return price;
}

HourlyPrice read_price_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open price CSV " + path);
    return read_price_csv(in);
}

void write_price_csv(std::ostream& out, const HourlyPrice& price) {
    out << "hour,price_usd_per_mwh\n";
    for (std::size_t h = 0; h < price.usd_per_mwh.size(); ++h) {
        out << h << ',' << io::format_double(price.usd_per_mwh[h]) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Problem

std::size_t PlanningProblem::steps() const {
    const double ratio = horizon_h / dt_h;
    return static_cast<std::size_t>(std::llround(ratio));
}

void PlanningProblem::validate() const {
    if (population.empty()) throw PlanningError("planning: empty population");
    if (!(dt_h > 0.0) || !(horizon_h > 0.0)) throw PlanningError("planning: horizon and dt must be positive");
    const double ratio = horizon_h / dt_h;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
        throw PlanningError("planning: horizon is not an integral number of steps");
    }
    if (price.horizon() + 1e-9 < horizon_h) throw PlanningError("planning: price forecast shorter than horizon");
    for (double p : price.usd_per_mwh) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw PlanningError("planning: prices must be finite and >= 0");
    }
    if (!ambient.covers(0.0, horizon_h)) throw PlanningError("planning: ambient forecast does not cover horizon");
    for (std::size_t i = 0; i < population.size(); ++i) {
        const auto& h = population[i];
        h.params.validate();
        if (h.params.delta < kMinDelta) {
            throw PlanningError("planning: home " + std::to_string(i) + " has a degenerate comfort band");
        }
        if (!(h.params.alpha * dt_h < 1.0)) {
            throw PlanningError("planning: alpha*dt >= 1 makes the Euler step unstable (home " +
                                std::to_string(i) + ")");
        }
        if (h.state.theta < h.params.lower0() - 1e-12 || h.state.theta > h.params.upper0() + 1e-12) {
            throw PlanningError("planning: home " + std::to_string(i) + " starts outside its comfort band");
        }
    }
    if (energy_budget_kwh && !(*energy_budget_kwh >= 0.0)) throw PlanningError("planning: negative energy budget");
}

FeasibilityBounds feasibility_bounds(const PlanningProblem& problem) {
    problem.validate();
    const double horizon = problem.horizon_h;
    double max_upper = -std::numeric_limits<double>::infinity();
    for (const auto& h : problem.population) max_upper = std::max(max_upper, h.params.upper0());
    const double min_ambient = problem.ambient.min_value();
    if (!(min_ambient > max_upper)) {
        std::ostringstream os;
        os << "ambient forecast minimum " << min_ambient << " °C is not above the highest comfort edge "
           << max_upper << " °C";
        throw InfeasibleError(os.str(), "ambient", min_ambient, max_upper);
    }

    FeasibilityBounds fb;
    fb.mean_ambient = problem.ambient.mean(0.0, horizon);

    const auto& first = problem.population.front().params;
    const bool uniform_power = std::all_of(problem.population.begin(), problem.population.end(), [&](const Home& h) {
        return h.params.p_thermal == first.p_thermal && h.params.eta == first.eta;
    });
    const double n = static_cast<double>(problem.population.size());

    double ratio_low = 0.0;
    double ratio_high = 0.0;
    for (const auto& h : problem.population) {
        const double k = h.params.alpha / h.params.beta;
        ratio_low += k * (fb.mean_ambient - h.params.upper0()) / h.params.eta;
        ratio_high += k * (fb.mean_ambient - h.params.lower0()) / h.params.eta;
    }
    if (uniform_power) {
        fb.e_max = n * first.p_thermal * horizon / first.eta;
        double sum_l = 0.0;
        double sum_u = 0.0;
        for (const auto& h : problem.population) {
            const double k = h.params.alpha / h.params.beta;
            sum_l += k * (fb.mean_ambient - h.params.upper0());
            sum_u += k * (fb.mean_ambient - h.params.lower0());
        }
        fb.tau_bar_l = sum_l / (n * first.p_thermal);
        fb.tau_bar_u = sum_u / (n * first.p_thermal);
        fb.e_l = fb.tau_bar_l * fb.e_max;
        fb.e_u = fb.tau_bar_u * fb.e_max;
    } else {
        double e_max = 0.0;
        for (const auto& h : problem.population) e_max += h.params.p_thermal / h.params.eta;
        fb.e_max = e_max * horizon;
        fb.e_l = ratio_low * horizon;
        fb.e_u = ratio_high * horizon;
        fb.tau_bar_l = fb.e_l / fb.e_max;
        fb.tau_bar_u = fb.e_u / fb.e_max;
    }
    fb.e_min = 0.0;

    // Holding a home at its upper edge needs u = α(θ̂_a - U)/(βP); flag steps where that exceeds 1.
    const std::size_t mu = problem.steps();
    for (std::size_t i = 0; i < problem.population.size(); ++i) {
        const auto& p = problem.population[i].params;
        for (std::size_t k = 0; k < mu; ++k) {
            const double theta_a = problem.ambient.at(static_cast<double>(k) * problem.dt_h);
            if (p.alpha / p.beta * (theta_a - p.upper0()) > p.p_thermal) {
                std::ostringstream os;
                os << "home " << i << " cannot be held at its upper edge at t = "
                   << static_cast<double>(k) * problem.dt_h << " h";
                fb.warnings.push_back(os.str());
                break;
            }
        }
    }
    return fb;
}

void check_budget(double energy_kwh, const FeasibilityBounds& b) {
    const double slack = 1e-12 * std::max(1.0, b.e_max);
    if (energy_kwh < b.e_l - slack) {
        std::ostringstream os;
        os << "energy budget " << energy_kwh << " kWh is below E_l = " << b.e_l << " kWh";
        throw InfeasibleError(os.str(), "E_l", energy_kwh, b.e_l);
    }
    if (energy_kwh > b.e_u + slack) {
        std::ostringstream os;
        os << "energy budget " << energy_kwh << " kWh is above E_u = " << b.e_u << " kWh";
        throw InfeasibleError(os.str(), "E_u", energy_kwh, b.e_u);
    }
}

// ---------------------------------------------------------------------------
// LP instance

LpInstance::LpInstance(std::vector<HomeRows> homes, std::vector<double> ambient_at_step,
                       std::vector<double> price_usd_per_kwh, double dt_h, std::optional<double> budget_kwh)
    : homes_(std::move(homes)),
      ambient_(std::move(ambient_at_step)),
      price_(std::move(price_usd_per_kwh)),
      dt_(dt_h),
      budget_(budget_kwh) {
    if (homes_.empty()) throw PlanningError("LP instance: no homes");
    if (price_.empty() || ambient_.size() != price_.size()) throw PlanningError("LP instance: step count mismatch");
    for (const auto& h : homes_) {
        if (!(h.a > 0.0 && h.a <= 1.0) || !(h.g > 0.0) || !(h.upper > h.lower) || !(h.energy_per_unit > 0.0)) {
            throw PlanningError("LP instance: malformed home rows");
        }
    }
}

SparseLp LpInstance::to_sparse() const {
    const std::size_t n = homes();
    const std::size_t mu = steps();
    SparseLp lp;
    lp.objective.assign(num_variables(), 0.0);
    lp.lower.assign(num_variables(), 0.0);
    lp.upper.assign(num_variables(), 1.0);
    lp.rows.reserve(num_equality_rows());
    for (std::size_t k = 0; k < mu; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto& h = homes_[i];
            const std::size_t th = theta_index(i, k);
            const std::size_t u = u_index(i, k);
            lp.lower[th] = h.lower;
            lp.upper[th] = h.upper;
            lp.objective[u] = h.energy_per_unit * price_[k];
            SparseRow row;
            row.coefs.emplace_back(th, 1.0);
            row.coefs.emplace_back(u, h.g);
            row.rhs = forcing(i, k);
            if (k == 0) {
                row.rhs += h.a * h.theta0;
            } else {
                row.coefs.emplace_back(theta_index(i, k - 1), -h.a);
            }
            lp.rows.push_back(std::move(row));
        }
    }
    if (budget_) {
        SparseRow row;
        for (std::size_t k = 0; k < mu; ++k) {
            for (std::size_t i = 0; i < n; ++i) row.coefs.emplace_back(u_index(i, k), homes_[i].energy_per_unit);
        }
        row.rhs = *budget_;
        lp.rows.push_back(std::move(row));
    }
    return lp;
}

LpInstance build_lp(const PlanningProblem& problem) {
    const FeasibilityBounds bounds = feasibility_bounds(problem);
    if (problem.energy_budget_kwh) check_budget(*problem.energy_budget_kwh, bounds);

    const std::size_t mu = problem.steps();
    const double dt = problem.dt_h;
    std::vector<HomeRows> rows;
    rows.reserve(problem.population.size());
    for (const auto& h : problem.population) {
        HomeRows r;
        r.a = 1.0 - h.params.alpha * dt;
        r.g = h.params.beta * h.params.p_thermal * dt;
        r.lower = h.params.lower0();
        r.upper = h.params.upper0();
        r.theta0 = h.state.theta;
        r.alpha_dt = h.params.alpha * dt;
        r.energy_per_unit = h.params.p_thermal / h.params.eta * dt;
        rows.push_back(r);
    }
    std::vector<double> ambient(mu);
    std::vector<double> price(mu);
    for (std::size_t k = 0; k < mu; ++k) {
        ambient[k] = problem.ambient.at(static_cast<double>(k) * dt);
        price[k] = problem.price.at((static_cast<double>(k) + 0.5) * dt) * kUsdPerKwhPerUsdPerMwh;
    }
    return LpInstance(std::move(rows), std::move(ambient), std::move(price), dt, problem.energy_budget_kwh);
}

// ---------------------------------------------------------------------------
// Decomposition solver

namespace {

struct Evaluation {
    double lambda = 0.0;
    double energy = 0.0;
    double lagrangian = 0.0;  ///< Σ_i min Σ_k (c - λ e) u
    std::vector<double> u;
};

enum class CostMode { Priced, MinEnergy, MaxEnergy };

class Decomposer {
public:
    Decomposer(const LpInstance& lp, unsigned threads)
        : lp_(lp), threads_(resolve_threads(threads)), solvers_(threads_), costs_(threads_) {
        const std::size_t n = lp.homes();
        forcing_.resize(n * lp.steps());
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < lp.steps(); ++k) forcing_[i * lp.steps() + k] = lp.forcing(i, k);
        }
    }

    Evaluation evaluate(double lambda, CostMode mode = CostMode::Priced) {
        const std::size_t n = lp_.homes();
        const std::size_t mu = lp_.steps();
        Evaluation ev;
        ev.lambda = lambda;
        ev.u.assign(n * mu, 0.0);
        std::vector<double> energy(n, 0.0);
        std::vector<double> lag(n, 0.0);
        std::vector<char> ok(n, 1);
        const auto& prices = lp_.price_usd_per_kwh();
        parallel_chunks(n, threads_, [&](std::size_t begin, std::size_t end, unsigned w) {
            auto& cost = costs_[w];
            cost.resize(mu);
            for (std::size_t i = begin; i < end; ++i) {
                const auto& h = lp_.home_rows()[i];
                for (std::size_t k = 0; k < mu; ++k) {
                    switch (mode) {
                        case CostMode::Priced: cost[k] = h.energy_per_unit * (prices[k] - lambda); break;
                        case CostMode::MinEnergy: cost[k] = h.energy_per_unit; break;
                        case CostMode::MaxEnergy: cost[k] = -h.energy_per_unit; break;
                    }
                }
                HomeLpData data{h.a, h.g, h.lower, h.upper, h.theta0,
                                std::span<const double>(forcing_).subspan(i * mu, mu)};
                std::span<double> u(ev.u.data() + i * mu, mu);
                if (!solvers_[w].solve(data, cost, u)) {
                    ok[i] = 0;
                    continue;
                }
                double e = 0.0;
                double l = 0.0;
                for (std::size_t k = 0; k < mu; ++k) {
                    e += u[k];
                    l += cost[k] * u[k];
                }
                energy[i] = e * h.energy_per_unit;
                lag[i] = l;
            }
        });
        for (std::size_t i = 0; i < n; ++i) {
            if (!ok[i]) {
                throw InfeasibleError("home " + std::to_string(i) +
                                          " cannot stay inside its comfort band over the horizon",
                                      "home_" + std::to_string(i), 0.0, 0.0);
            }
            ev.energy += energy[i];
            ev.lagrangian += lag[i];
        }
        return ev;
    }

private:
    const LpInstance& lp_;
    unsigned threads_;
    std::vector<HomeLpSolver> solvers_;
    std::vector<std::vector<double>> costs_;
    std::vector<double> forcing_;
};

ReferencePlan assemble_plan(const LpInstance& lp, std::vector<double> u) {
    const std::size_t n = lp.homes();
    const std::size_t mu = lp.steps();
    ReferencePlan plan;
    plan.dt_h = lp.dt_h();
    plan.homes = n;
    plan.per_home_u = std::move(u);
    plan.p_total_ref.assign(mu, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double pe = lp.home_rows()[i].energy_per_unit / lp.dt_h();
        for (std::size_t k = 0; k < mu; ++k) plan.p_total_ref[k] += pe * plan.per_home_u[i * mu + k];
    }
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < mu; ++k) s += plan.per_home_u[i * mu + k];
        energy += s * lp.home_rows()[i].energy_per_unit;
    }
    plan.energy_kwh = energy;
    plan.objective_cost = plan_cost(lp, plan.per_home_u);

    // Primal residual: comfort bounds along the Euler trajectory and the budget row.
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& h = lp.home_rows()[i];
        std::vector<double> row(plan.per_home_u.begin() + static_cast<std::ptrdiff_t>(i * mu),
                                plan.per_home_u.begin() + static_cast<std::ptrdiff_t>((i + 1) * mu));
        const auto theta = simulate_euler(lp, i, row);
        for (double th : theta) {
            const double v = std::max({0.0, h.lower - th, th - h.upper}) / (h.upper - h.lower);
            residual = std::max(residual, v);
        }
    }
    if (lp.budget_kwh() && *lp.budget_kwh() > 0.0) {
        residual = std::max(residual, std::abs(energy - *lp.budget_kwh()) / *lp.budget_kwh());
    }
    plan.primal_residual = residual;
    return plan;
}

}  // namespace

double plan_cost(const LpInstance& lp, const std::vector<double>& per_home_u) {
    const std::size_t n = lp.homes();
    const std::size_t mu = lp.steps();
    const auto& prices = lp.price_usd_per_kwh();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < mu; ++k) s += prices[k] * per_home_u[i * mu + k];
        total += s * lp.home_rows()[i].energy_per_unit;
    }
    return total;
}

std::vector<double> simulate_euler(const LpInstance& lp, std::size_t home, const std::vector<double>& u_row) {
    const auto& h = lp.home_rows().at(home);
    std::vector<double> theta(lp.steps());
    double th = h.theta0;
    for (std::size_t k = 0; k < lp.steps(); ++k) {
        th = h.a * th + lp.forcing(home, k) - h.g * u_row[k];
        theta[k] = th;
    }
    return theta;
}

ReferencePlan solve_lp(const LpInstance& lp, const OptTolerances& tol) {
    Decomposer dec(lp, tol.threads);

    if (!lp.budget_kwh()) {
        Evaluation ev = dec.evaluate(0.0);
        ReferencePlan plan = assemble_plan(lp, std::move(ev.u));
        plan.iterations = 1;
        return plan;
    }

    const double target = *lp.budget_kwh();
    const double abs_tol = tol.feas * std::max(1.0, target);

    const Evaluation min_ev = dec.evaluate(0.0, CostMode::MinEnergy);
    if (target < min_ev.energy - abs_tol) {
        std::ostringstream os;
        os << "energy budget " << target << " kWh is below the least energy any admissible plan uses ("
           << min_ev.energy << " kWh)";
        throw InfeasibleError(os.str(), "lp_min_energy", target, min_ev.energy);
    }
    const Evaluation max_ev = dec.evaluate(0.0, CostMode::MaxEnergy);
    if (target > max_ev.energy + abs_tol) {
        std::ostringstream os;
        os << "energy budget " << target << " kWh exceeds the most energy any admissible plan can use ("
           << max_ev.energy << " kWh)";
        throw InfeasibleError(os.str(), "lp_max_energy", target, max_ev.energy);
    }

    const auto& prices = lp.price_usd_per_kwh();
    const double pmin = *std::min_element(prices.begin(), prices.end());
    const double pmax = *std::max_element(prices.begin(), prices.end());
    double span = (pmax - pmin) + 1e-3;

    int iterations = 0;
    Evaluation lo = dec.evaluate(pmin - span);
    Evaluation hi = dec.evaluate(pmax + span);
    iterations += 2;
    for (int grow = 0; lo.energy > target && grow < 200; ++grow) {
        span *= 2.0;
        lo = dec.evaluate(pmin - span);
        ++iterations;
    }
    for (int grow = 0; hi.energy < target && grow < 200; ++grow) {
        span *= 2.0;
        hi = dec.evaluate(pmax + span);
        ++iterations;
    }
    // Budget at an extreme of the admissible range: the extreme plan is the answer.
    if (lo.energy > target - abs_tol && lo.energy >= target) hi = lo;
    if (hi.energy < target + abs_tol && hi.energy <= target) lo = hi;
    if (lo.energy > target + abs_tol || hi.energy < target - abs_tol) {
        throw PlanningError("solve_lp: could not bracket the energy budget");
    }

    auto combine = [&](const Evaluation& a, const Evaluation& b) {
        std::vector<double> u;
        if (b.energy - a.energy <= 0.0) {
            u = a.u;
        } else {
            const double w = std::clamp((b.energy - target) / (b.energy - a.energy), 0.0, 1.0);
            u.resize(a.u.size());
            for (std::size_t j = 0; j < u.size(); ++j) u[j] = w * a.u[j] + (1.0 - w) * b.u[j];
        }
        return u;
    };
    auto dual_value = [&](const Evaluation& e) { return e.lambda * target + e.lagrangian; };

    double gap = std::numeric_limits<double>::infinity();
    double cost = 0.0;
    std::vector<double> best_u;
    while (true) {
        best_u = combine(lo, hi);
        cost = plan_cost(lp, best_u);
        const double dual = std::max(dual_value(lo), dual_value(hi));
        gap = std::max(0.0, cost - dual);
        const double scale = std::max(std::abs(cost), 1e-6);
        if (gap <= 1e-3 * tol.gap * scale) break;
        if (iterations >= tol.max_iterations) break;
        const double mid = 0.5 * (lo.lambda + hi.lambda);
        if (!(mid > lo.lambda && mid < hi.lambda)) break;
        Evaluation ev = dec.evaluate(mid);
        ++iterations;
        if (ev.energy < target) {
            lo = std::move(ev);
        } else {
            hi = std::move(ev);
        }
    }
    if (gap > tol.gap * std::max(std::abs(cost), 1e-6)) {
        std::ostringstream os;
        os << "solve_lp: duality gap " << gap << " $ above tolerance after " << iterations << " evaluations";
        throw PlanningError(os.str());
    }

    ReferencePlan plan = assemble_plan(lp, std::move(best_u));
    plan.lambda_usd_per_kwh = 0.5 * (lo.lambda + hi.lambda);
    plan.duality_gap = gap;
    plan.iterations = iterations;
    if (plan.primal_residual > tol.feas) {
        std::ostringstream os;
        os << "solve_lp: primal residual " << plan.primal_residual << " above tolerance";
        throw PlanningError(os.str());
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Dense reference solver

ReferencePlan solve_lp_dense(const LpInstance& lp) {
    const SparseLp sp = lp.to_sparse();
    const std::size_t n = sp.objective.size();
    const std::size_t m_eq = sp.rows.size();
    // x = lower + x', x' + s = upper - lower, all of x', s >= 0.
    const std::size_t cols = 2 * n;
    const std::size_t rows = m_eq + n;
    std::vector<double> a(rows * cols, 0.0);
    std::vector<double> b(rows, 0.0);
    std::vector<double> c(cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) c[j] = sp.objective[j];
    for (std::size_t r = 0; r < m_eq; ++r) {
        double rhs = sp.rows[r].rhs;
        for (const auto& [j, v] : sp.rows[r].coefs) {
            a[r * cols + j] += v;
            rhs -= v * sp.lower[j];
        }
        b[r] = rhs;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t r = m_eq + j;
        a[r * cols + j] = 1.0;
        a[r * cols + n + j] = 1.0;
        b[r] = sp.upper[j] - sp.lower[j];
    }
    const SimplexResult res = simplex_standard_form(a, b, c);
    if (res.status == SimplexStatus::Infeasible) {
        throw InfeasibleError("dense simplex: LP infeasible", "lp", 0.0, 0.0);
    }
    if (res.status != SimplexStatus::Optimal) throw PlanningError("dense simplex did not reach optimality");

    std::vector<double> u(lp.homes() * lp.steps());
    for (std::size_t i = 0; i < lp.homes(); ++i) {
        for (std::size_t k = 0; k < lp.steps(); ++k) {
            const std::size_t j = lp.u_index(i, k);
            u[i * lp.steps() + k] = std::clamp(sp.lower[j] + res.x[j], 0.0, 1.0);
        }
    }
    ReferencePlan plan = assemble_plan(lp, std::move(u));
    plan.iterations = res.iterations;
    return plan;
}

double reference_power(const ReferencePlan& plan, double t_h) {
    const double horizon = plan.horizon_h();
    if (plan.steps() == 0 || t_h < -1e-9 || t_h > horizon + 1e-9) {
        throw std::out_of_range("reference_power: t = " + io::format_double(t_h) + " h outside plan horizon");
    }
    const double pos = std::max(0.0, t_h) / plan.dt_h;
    const auto k = static_cast<std::size_t>(std::floor(pos + 1e-9));
    return plan.p_total_ref[std::min(k, plan.steps() - 1)];
}

}  // namespace acfleet
