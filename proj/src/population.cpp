#include "acfleet/population.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace acfleet {

DeltaShape parse_delta_shape(const std::string& name) {
    if (name == "constant") return DeltaShape::Constant;
    if (name == "uniform") return DeltaShape::Uniform;
    if (name == "triangular-high") return DeltaShape::TriangularHigh;
    if (name == "triangular-low") return DeltaShape::TriangularLow;
    throw std::invalid_argument("unknown delta distribution '" + name + "'");
}

std::string to_string(DeltaShape shape) {
    switch (shape) {
        case DeltaShape::Constant: return "constant";
        case DeltaShape::Uniform: return "uniform";
        case DeltaShape::TriangularHigh: return "triangular-high";
        case DeltaShape::TriangularLow: return "triangular-low";
    }
    return "constant";
}

void PopulationSpec::validate() const {
    if (n == 0) throw std::invalid_argument("population size must be positive");
    if (!(alpha.mean > 0.0) || !(beta.mean > 0.0)) throw std::invalid_argument("alpha/beta means must be positive");
    if (!(p_thermal > 0.0) || !(eta > 0.0)) throw std::invalid_argument("p_thermal and eta must be positive");
    if (delta.shape == DeltaShape::Constant) {
        if (!(delta.delta_const > 0.0)) throw std::invalid_argument("constant delta must be positive");
    } else {
        if (!(delta.delta_min > 0.0)) throw std::invalid_argument("delta_min must be positive");
        if (!(delta.delta_max > delta.delta_min)) throw std::invalid_argument("delta_max must exceed delta_min");
    }
    const double a = init_cov[0], b = init_cov[1], c = init_cov[2], d = init_cov[3];
    if (b != c) throw std::invalid_argument("init_cov must be symmetric");
    if (!(a > 0.0) || !(a * d - b * c > 0.0)) throw std::invalid_argument("init_cov must be positive definite");
    if (!(on_prob >= 0.0 && on_prob <= 1.0)) throw std::invalid_argument("on_prob must lie in [0, 1]");
}

namespace {

double sample_truncated(const TruncatedGaussianSpec& g, std::mt19937_64& rng, const char* what) {
    std::normal_distribution<double> normal(g.mean, g.stddev());
    for (int attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
        const double x = normal(rng);
        if (x >= g.lower() && x <= g.upper()) return x;
    }
    throw SamplingError(std::string("truncated Gaussian for ") + what + " rejected " +
                        std::to_string(kMaxRejectionAttempts) + " draws");
}

double sample_delta(const DeltaSpec& d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double span = d.delta_max - d.delta_min;
    switch (d.shape) {
        case DeltaShape::Constant: return d.delta_const;
        case DeltaShape::Uniform: return d.delta_min + span * unit(rng);
        case DeltaShape::TriangularHigh: return d.delta_min + span * std::sqrt(unit(rng));
        case DeltaShape::TriangularLow: return d.delta_max - span * std::sqrt(unit(rng));
    }
    return d.delta_const;
}

}  // namespace

Population sample_population(const PopulationSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> std_normal(0.0, 1.0);
    std::bernoulli_distribution on(spec.on_prob);

    // Cholesky factor of the 2x2 initial covariance.
    const double l11 = std::sqrt(spec.init_cov[0]);
    const double l21 = spec.init_cov[2] / l11;
    const double l22 = std::sqrt(spec.init_cov[3] - l21 * l21);

    Population pop;
    pop.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        Home h;
        h.params.alpha = sample_truncated(spec.alpha, rng, "alpha");
        h.params.beta = sample_truncated(spec.beta, rng, "beta");
        h.params.p_thermal = spec.p_thermal;
        h.params.eta = spec.eta;
        h.params.delta = sample_delta(spec.delta, rng);

        bool accepted = false;
        for (int attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
            const double z1 = std_normal(rng);
            const double z2 = std_normal(rng);
            const double s0 = spec.init_mean[0] + l11 * z1;
            const double theta0 = spec.init_mean[1] + l21 * z1 + l22 * z2;
            if (theta0 >= s0 - h.params.delta && theta0 <= s0 + h.params.delta) {
                h.params.s0 = s0;
                h.state.s = s0;
                h.state.theta = theta0;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            std::ostringstream os;
            os << "initial condition for home " << i << " (delta = " << h.params.delta << ") rejected "
               << kMaxRejectionAttempts << " draws";
            throw SamplingError(os.str());
        }
        h.state.sigma = on(rng) ? 1 : 0;
        h.state.t = 0.0;
        pop.push_back(h);
    }
    return pop;
}

double aggregate_power(const Population& pop) {
    double total = 0.0;
    for (const auto& h : pop) total += electrical_power(h.params, h.state.sigma);
    return total;
}

}  // namespace acfleet
