#pragma once

#include <span>
#include <vector>

namespace acfleet {

/// One home's slice of the planning LP:
///
///   minimize   Σ_k cost[k] * u[k]
///   subject to θ[k] = a θ[k-1] + forcing[k] - g u[k],   θ[-1] = theta0
///              lower <= θ[k] <= upper,  0 <= u[k] <= 1.
struct HomeLpData {
    double a = 1.0;
    double g = 1.0;
    double lower = 0.0;
    double upper = 0.0;
    double theta0 = 0.0;
    std::span<const double> forcing;
};

/// Exact solver for HomeLpData.
///
/// The cost-to-go as a function of the temperature is convex and piecewise
/// linear. It is kept as two heaps of breakpoints (left and right of the
/// minimum) with lazy affine transforms, so every step of the backward pass
/// (window minimum over one control interval, linear cost, affine change of
/// variable, clipping to the comfort band) costs O(log μ). The forward pass
/// clamps the stored per-step minimizers into each reachable window.
///
/// Among equal-cost minimizers the one that cools earlier is returned.
class HomeLpSolver {
public:
    /// Writes the optimal controls to `u`; returns false if infeasible.
    bool solve(const HomeLpData& data, std::span<const double> cost, std::span<double> u);

private:
    struct Breakpoint {
        double pos;  ///< stored coordinate
        double inc;  ///< stored slope increment (>= 0)
    };
    std::vector<Breakpoint> left_;
    std::vector<Breakpoint> right_;
    std::vector<double> argmin_;
};

}  // namespace acfleet
