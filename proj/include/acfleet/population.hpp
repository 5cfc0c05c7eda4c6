#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "acfleet/thermal.hpp"

namespace acfleet {

/// Gaussian with std 0.1*mean truncated to [0.9*mean, 1.1*mean].
struct TruncatedGaussianSpec {
    double mean = 0.05;
    [[nodiscard]] double stddev() const { return 0.1 * mean; }
    [[nodiscard]] double lower() const { return 0.9 * mean; }
    [[nodiscard]] double upper() const { return 1.1 * mean; }
};

enum class DeltaShape {
    Constant,         ///< every home gets delta_const
    Uniform,          ///< uniform on [min, max]
    TriangularHigh,   ///< right-triangular density peaking at max
    TriangularLow,    ///< right-triangular density peaking at min
};

DeltaShape parse_delta_shape(const std::string& name);
std::string to_string(DeltaShape shape);

struct DeltaSpec {
    DeltaShape shape = DeltaShape::Constant;
    double delta_const = 1.0;
    double delta_min = 0.1;
    double delta_max = 1.1;
};

struct PopulationSpec {
    std::size_t n = 500;
    TruncatedGaussianSpec alpha{1.0 / (2.0 * 10.0)};  // 1/(RC), R = 2 °C/kW, C = 10 kWh/°C
    TruncatedGaussianSpec beta{1.0 / 10.0};           // 1/C
    double p_thermal = 14.0;
    double eta = 2.5;
    DeltaSpec delta;
    std::array<double, 2> init_mean{20.0, 20.0};               ///< (s0, θ0) means
    std::array<double, 4> init_cov{1.0, 0.5, 0.5, 3.0};        ///< row-major 2x2
    double on_prob = 0.5;
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument on a malformed spec.
    void validate() const;
};

struct Home {
    AcParams params;
    AcState state;
};

using Population = std::vector<Home>;

/// Raised when rejection sampling exceeds its attempt budget.
class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kMaxRejectionAttempts = 10'000;

/// Draws a heterogeneous population. Deterministic in `spec.seed`.
///
/// alpha and beta come from truncated Gaussians by rejection; (s0, θ0) is
/// bivariate Gaussian, redrawn until |θ0 - s0| <= delta; σ0 ~ Bernoulli(on_prob).
Population sample_population(const PopulationSpec& spec);

/// Electrical power of the whole population in its current modes, kW.
double aggregate_power(const Population& pop);

}  // namespace acfleet
