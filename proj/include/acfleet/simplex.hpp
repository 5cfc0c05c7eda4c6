#pragma once

#include <vector>

namespace acfleet {

enum class SimplexStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct SimplexResult {
    SimplexStatus status = SimplexStatus::IterationLimit;
    std::vector<double> x;
    double objective = 0.0;
    int iterations = 0;
};

/// Dense two-phase tableau simplex for
///   minimize c·x  subject to  A x = b,  x >= 0
/// with Bland's anti-cycling rule. `a` is row-major m x n.
SimplexResult simplex_standard_form(const std::vector<double>& a, const std::vector<double>& b,
                                    const std::vector<double>& c, int max_iterations = 200000);

}  // namespace acfleet
