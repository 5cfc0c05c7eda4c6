#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "acfleet/stats.hpp"

namespace acfleet {

/// How the reporting subset is drawn each tick.
enum class Participation {
    Bernoulli,   ///< every home reports independently with probability p
    ExactCount,  ///< a uniformly random subset of exactly p·N homes reports
};

struct PrivacyParams {
    double epsilon = 0.1;
    double p = 0.9;      ///< participation probability
    double p_e = 5.6;    ///< electrical power of one AC, kW
    std::uint64_t seed = 1;
    Participation mode = Participation::Bernoulli;

    /// Throws std::invalid_argument. ExactCount additionally needs p·N integral.
    void validate(std::size_t n_total) const;
    /// Gamma shape 1/(pN).
    [[nodiscard]] double noise_shape(std::size_t n_total) const;
    /// Gamma rate ε/(p P_e).
    [[nodiscard]] double noise_rate() const { return epsilon / (p * p_e); }
    /// Rate ε/P_e of the aggregator's exponential noise ν.
    [[nodiscard]] double nu_rate() const { return epsilon / p_e; }
};

struct NoisyAggregate {
    double estimate = 0.0;  ///< kW
    std::size_t n_reported = 0;
    bool held = false;  ///< no reports arrived; previous estimate reused
};

class EmptyReportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// SplitMix64-derived seed for the substream `stream` of `seed`.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream);

/// true_power + n, n ~ Gamma(shape 1/(pN), rate ε/(pP_e)).
double noisy_value(double true_power, const PrivacyParams& params, std::size_t n_total, std::mt19937_64& rng);

/// With probability p returns noisy_value(true_power), otherwise nothing.
std::optional<double> local_report(double true_power, const PrivacyParams& params, std::size_t n_total,
                                   std::mt19937_64& rng);

/// (N / N̂) Σ reports - ν with fresh ν ~ Exp(ε/P_e). Throws EmptyReportError
/// when no report arrived.
NoisyAggregate aggregate_estimate(const std::vector<double>& reports, const PrivacyParams& params,
                                  std::size_t n_total, std::mt19937_64& rng);

/// Per-tick private sensing of a fixed population. Each home draws from its
/// own stream; the aggregator's ν and the ExactCount subset use separate ones.
class PrivateSensor {
public:
    PrivateSensor(const PrivacyParams& params, std::size_t n_total);

    /// One tick. On an empty tick the last estimate is held and flagged.
    NoisyAggregate measure(const std::vector<double>& true_powers);

    /// Residual of the latest tick: estimate - (N/N̂) Σ reported true powers.
    [[nodiscard]] double last_residual() const { return last_residual_; }
    [[nodiscard]] std::size_t empty_ticks() const { return empty_ticks_; }

private:
    PrivacyParams params_;
    std::size_t n_;
    std::vector<std::mt19937_64> home_rngs_;
    std::mt19937_64 nu_rng_;
    std::mt19937_64 subset_rng_;
    std::vector<std::size_t> order_;
    std::vector<double> reports_;
    double last_estimate_ = 0.0;
    double last_residual_ = 0.0;
    std::size_t empty_ticks_ = 0;
};

struct NoiseAlgebraReport {
    std::size_t samples = 0;
    KsResult gamma_sum_vs_exponential;  ///< Σ (1/p) n_i against Exp(ε/P_e)
    KsResult difference_vs_laplace;     ///< independent Exp - Exp against Laplace(P_e/ε)
    KsResult residual_vs_laplace;       ///< end-to-end estimate residual against Laplace(P_e/ε)
    double laplace_scale_estimate = 0.0;  ///< mean |residual|
    double laplace_scale_expected = 0.0;  ///< P_e/ε
    double residual_mean = 0.0;
    double residual_mean_stderr = 0.0;
};

/// Monte-Carlo check of the noise algebra with exactly p·N reporters per
/// trial (p·N must be integral).
NoiseAlgebraReport noise_algebra_check(const PrivacyParams& params, std::size_t n_total, std::size_t n_samples);

}  // namespace acfleet
