#include "acfleet/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace acfleet {

namespace {

constexpr double kPivotEps = 1e-10;
constexpr double kCostEps = 1e-10;

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0) {}

    double& at(std::size_t r, std::size_t c) { return t_[r * (n_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, n_); }
    double& cost(std::size_t c) { return at(m_, c); }
    double& cost_rhs() { return at(m_, n_); }

    void pivot(std::size_t pr, std::size_t pc) {
        const double inv = 1.0 / at(pr, pc);
        for (std::size_t c = 0; c <= n_; ++c) at(pr, c) *= inv;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r <= m_; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            double* row = &t_[r * (n_ + 1)];
            const double* prow = &t_[pr * (n_ + 1)];
            for (std::size_t c = 0; c <= n_; ++c) row[c] -= f * prow[c];
            row[pc] = 0.0;
        }
    }

    [[nodiscard]] std::size_t rows() const { return m_; }
    [[nodiscard]] std::size_t cols() const { return n_; }

private:
    std::size_t m_;
    std::size_t n_;
    std::vector<double> t_;
};

// Runs Bland-rule pivots on the current cost row. Columns with allowed[c] == false never enter.
SimplexStatus run(Tableau& t, std::vector<std::size_t>& basis, const std::vector<bool>& allowed, int& iterations,
                  int max_iterations) {
    while (true) {
        if (iterations >= max_iterations) return SimplexStatus::IterationLimit;
        std::size_t enter = t.cols();
        for (std::size_t c = 0; c < t.cols(); ++c) {
            if (allowed[c] && t.cost(c) < -kCostEps) {
                enter = c;
                break;
            }
        }
        if (enter == t.cols()) return SimplexStatus::Optimal;

        std::size_t leave = t.rows();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < t.rows(); ++r) {
            const double coef = t.at(r, enter);
            if (coef > kPivotEps) {
                const double ratio = t.rhs(r) / coef;
                if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis[r] < basis[leave])) {
                    best = ratio;
                    leave = r;
                }
            }
        }
        if (leave == t.rows()) return SimplexStatus::Unbounded;
        t.pivot(leave, enter);
        basis[leave] = enter;
        ++iterations;
    }
}

}  // namespace

SimplexResult simplex_standard_form(const std::vector<double>& a, const std::vector<double>& b,
                                    const std::vector<double>& c, int max_iterations) {
    const std::size_t m = b.size();
    const std::size_t n = c.size();
    if (a.size() != m * n) throw std::invalid_argument("simplex: matrix size mismatch");

    Tableau t(m, n + m);
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) {
        const double sign = b[r] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) t.at(r, j) = sign * a[r * n + j];
        t.at(r, n + r) = 1.0;
        t.rhs(r) = sign * b[r];
        basis[r] = n + r;
    }
    // Phase 1 cost row: minimize the sum of artificials, expressed in nonbasic terms.
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) t.cost(j) -= t.at(r, j);
        t.cost_rhs() -= t.rhs(r);
    }

    SimplexResult result;
    std::vector<bool> allowed(n + m, true);
    auto status = run(t, basis, allowed, result.iterations, max_iterations);
    if (status == SimplexStatus::IterationLimit) {
        result.status = status;
        return result;
    }
    double scale = 1.0;
    for (double v : b) scale = std::max(scale, std::abs(v));
    if (-t.cost_rhs() > 1e-8 * scale) {
        result.status = SimplexStatus::Infeasible;
        return result;
    }

    // Drive artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(t.at(r, j)) > 1e-8) {
                t.pivot(r, j);
                basis[r] = j;
                break;
            }
        }
    }
    for (std::size_t j = n; j < n + m; ++j) allowed[j] = false;

    // Phase 2 cost row.
    for (std::size_t j = 0; j <= n + m; ++j) t.at(m, j) = 0.0;
    for (std::size_t j = 0; j < n; ++j) t.cost(j) = c[j];
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t bj = basis[r];
        if (bj >= n) continue;
        const double cb = c[bj];
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j <= n + m; ++j) t.at(m, j) -= cb * t.at(r, j);
    }

    status = run(t, basis, allowed, result.iterations, max_iterations);
    result.status = status;
    if (status != SimplexStatus::Optimal) return result;

    result.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n) result.x[basis[r]] = t.rhs(r);
    }
    result.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) result.objective += c[j] * result.x[j];
    return result;
}

}  // namespace acfleet
