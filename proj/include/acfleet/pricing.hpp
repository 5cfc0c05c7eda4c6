#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "acfleet/planning.hpp"

namespace acfleet {

struct ContractQuote {
    std::size_t home_id = 0;
    double delta = 0.0;           ///< °C
    double marginal_value = 0.0;  ///< J*₋ᵢ - J*, $/day
    bool feasible = true;
    std::string reason;  ///< why the removal could not be priced
};

struct PriceLine {
    double slope = 0.0;      ///< $/day per °C
    double intercept = 0.0;  ///< $/day
    double residual_rms = 0.0;
    std::size_t points = 0;
    bool degenerate = false;  ///< all Δ equal: flat line through the mean
};

/// Re-solves the planning LP with each listed home removed, holding the
/// budget fixed. Quotes come back ordered by home id; removals that make the
/// budget infeasible are marked rather than priced.
std::vector<ContractQuote> marginal_values(const PlanningProblem& problem, std::vector<std::size_t> home_ids,
                                           const OptTolerances& tol = {});

/// Ordinary least squares of marginal value on Δ over the feasible quotes.
/// Throws std::invalid_argument with fewer than two feasible quotes.
PriceLine fit_price_line(const std::vector<ContractQuote>& quotes);

}  // namespace acfleet
