#include "acfleet/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace acfleet {

namespace {

std::size_t exact_count(const PrivacyParams& params, std::size_t n_total) {
    return static_cast<std::size_t>(std::llround(params.p * static_cast<double>(n_total)));
}

}  // namespace

void PrivacyParams::validate(std::size_t n_total) const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("privacy: epsilon must be > 0");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("privacy: p must lie in (0, 1)");
    if (!(p_e > 0.0)) throw std::invalid_argument("privacy: P_e must be > 0");
    if (n_total == 0) throw std::invalid_argument("privacy: empty population");
    if (mode == Participation::ExactCount) {
        const double pn = p * static_cast<double>(n_total);
        if (std::abs(pn - std::round(pn)) > 1e-9 || std::round(pn) < 1.0) {
            throw std::invalid_argument("privacy: p*N must be a positive integer for exact-count participation");
        }
    }
}

double PrivacyParams::noise_shape(std::size_t n_total) const { return 1.0 / (p * static_cast<double>(n_total)); }

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double noisy_value(double true_power, const PrivacyParams& params, std::size_t n_total, std::mt19937_64& rng) {
    // std::gamma_distribution takes a scale, the reciprocal of the rate.
    std::gamma_distribution<double> gamma(params.noise_shape(n_total), 1.0 / params.noise_rate());
    return true_power + gamma(rng);
}

std::optional<double> local_report(double true_power, const PrivacyParams& params, std::size_t n_total,
                                   std::mt19937_64& rng) {
    std::bernoulli_distribution report(params.p);
    if (!report(rng)) return std::nullopt;
    return noisy_value(true_power, params, n_total, rng);
}

NoisyAggregate aggregate_estimate(const std::vector<double>& reports, const PrivacyParams& params,
                                  std::size_t n_total, std::mt19937_64& rng) {
    if (reports.empty()) throw EmptyReportError("aggregate_estimate: no reports this tick");
    double sum = 0.0;
    for (double r : reports) sum += r;
    std::exponential_distribution<double> nu(params.nu_rate());
    NoisyAggregate out;
    out.n_reported = reports.size();
    out.estimate = static_cast<double>(n_total) / static_cast<double>(reports.size()) * sum - nu(rng);
    return out;
}

PrivateSensor::PrivateSensor(const PrivacyParams& params, std::size_t n_total)
    : params_(params),
      n_(n_total),
      nu_rng_(substream_seed(params.seed, n_total)),
      subset_rng_(substream_seed(params.seed, n_total + 1)),
      order_(n_total) {
    params_.validate(n_total);
    home_rngs_.reserve(n_total);
    for (std::size_t i = 0; i < n_total; ++i) home_rngs_.emplace_back(substream_seed(params.seed, i));
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    reports_.reserve(n_total);
}

NoisyAggregate PrivateSensor::measure(const std::vector<double>& true_powers) {
    if (true_powers.size() != n_) throw std::invalid_argument("PrivateSensor: population size mismatch");
    reports_.clear();
    double true_sum = 0.0;
    if (params_.mode == Participation::Bernoulli) {
        for (std::size_t i = 0; i < n_; ++i) {
            if (auto r = local_report(true_powers[i], params_, n_, home_rngs_[i])) {
                reports_.push_back(*r);
                true_sum += true_powers[i];
            }
        }
    } else {
        const std::size_t m = exact_count(params_, n_);
        // Partial Fisher–Yates: the first m entries of order_ are the reporters.
        for (std::size_t j = 0; j < m; ++j) {
            std::uniform_int_distribution<std::size_t> pick(j, n_ - 1);
            std::swap(order_[j], order_[pick(subset_rng_)]);
        }
        std::vector<std::size_t> chosen(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(m));
        std::sort(chosen.begin(), chosen.end());
        for (std::size_t i : chosen) {
            reports_.push_back(noisy_value(true_powers[i], params_, n_, home_rngs_[i]));
            true_sum += true_powers[i];
        }
    }
    if (reports_.empty()) {
        ++empty_ticks_;
        NoisyAggregate held;
        held.estimate = last_estimate_;
        held.held = true;
        last_residual_ = 0.0;
        return held;
    }
    NoisyAggregate out = aggregate_estimate(reports_, params_, n_, nu_rng_);
    last_estimate_ = out.estimate;
    last_residual_ = out.estimate - static_cast<double>(n_) / static_cast<double>(reports_.size()) * true_sum;
    return out;
}

NoiseAlgebraReport noise_algebra_check(const PrivacyParams& params, std::size_t n_total, std::size_t n_samples) {
    PrivacyParams exact = params;
    exact.mode = Participation::ExactCount;
    exact.validate(n_total);
    if (n_samples < 2) throw std::invalid_argument("noise_algebra_check: need at least two samples");
    const std::size_t m = exact_count(exact, n_total);

    std::mt19937_64 gamma_rng(substream_seed(params.seed, 0));
    std::mt19937_64 exp_rng(substream_seed(params.seed, 1));
    std::gamma_distribution<double> gamma(exact.noise_shape(n_total), 1.0 / exact.noise_rate());
    std::exponential_distribution<double> expo(exact.nu_rate());

    std::vector<double> gamma_sums(n_samples);
    std::vector<double> differences(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
        double sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) sum += gamma(gamma_rng);
        gamma_sums[s] = sum / exact.p;
        differences[s] = expo(exp_rng) - expo(exp_rng);
    }

    // End-to-end: all homes ON, the sensor's residual after reconstruction.
    PrivateSensor sensor(exact, n_total);
    const std::vector<double> powers(n_total, exact.p_e);
    std::vector<double> residuals(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
        sensor.measure(powers);
        residuals[s] = sensor.last_residual();
    }

    const double rate = exact.nu_rate();
    const double scale = 1.0 / rate;
    NoiseAlgebraReport rep;
    rep.samples = n_samples;
    rep.gamma_sum_vs_exponential = ks_test(gamma_sums, [rate](double x) { return exponential_cdf(x, rate); });
    rep.difference_vs_laplace = ks_test(differences, [scale](double x) { return laplace_cdf(x, scale); });
    rep.residual_vs_laplace = ks_test(residuals, [scale](double x) { return laplace_cdf(x, scale); });
    double abs_sum = 0.0;
    for (double r : residuals) abs_sum += std::abs(r);
    rep.laplace_scale_estimate = abs_sum / static_cast<double>(n_samples);
    rep.laplace_scale_expected = scale;
    rep.residual_mean = mean(residuals);
    rep.residual_mean_stderr = stddev(residuals) / std::sqrt(static_cast<double>(n_samples));
    return rep;
}

}  // namespace acfleet
