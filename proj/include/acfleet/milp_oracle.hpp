#pragma once

#include <cstddef>

#include "acfleet/planning.hpp"

namespace acfleet {

/// Raised when the enumeration would exceed its dimension cap.
class OracleDimensionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultOracleDim = 20;

/// Exhaustive search over binary controls u_i(k) ∈ {0, 1} under the Euler
/// dynamics of `lp`. Sequences leaving a comfort band or missing the budget
/// (to 1e-9 relative) are discarded; the cheapest survivor is returned, with
/// ties resolved towards switching ON earlier.
///
/// Throws OracleDimensionError if N·μ > max_dim and InfeasibleError if no
/// binary sequence is feasible.
ReferencePlan milp_oracle(const LpInstance& lp, std::size_t max_dim = kDefaultOracleDim);
ReferencePlan milp_oracle(const PlanningProblem& problem, std::size_t max_dim = kDefaultOracleDim);

}  // namespace acfleet
