#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace acfleet {

/// Piecewise-linear outdoor temperature trajectory, (hour, °C) samples.
class AmbientTrajectory {
public:
    AmbientTrajectory() = default;
    /// Throws std::invalid_argument unless timestamps strictly increase and
    /// at least one sample is given.
    explicit AmbientTrajectory(std::vector<std::pair<double, double>> samples);

    /// Constant temperature on [0, horizon].
    static AmbientTrajectory constant(double temp_c, double horizon_h);

    /// Linear interpolation; throws std::out_of_range outside the sampled span.
    [[nodiscard]] double at(double t_h) const;
    /// Exact time average over [t0, t1] of the interpolant.
    [[nodiscard]] double mean(double t0, double t1) const;
    [[nodiscard]] double min_value() const;
    [[nodiscard]] double max_value() const;
    [[nodiscard]] double start() const { return samples_.front().first; }
    [[nodiscard]] double end() const { return samples_.back().first; }
    [[nodiscard]] bool covers(double t0, double t1) const;
    [[nodiscard]] const std::vector<std::pair<double, double>>& samples() const { return samples_; }

private:
    [[nodiscard]] double integral_to(double t) const;
    std::vector<std::pair<double, double>> samples_;
};

/// Reads the `time_h,temp_c` CSV format. Parsing is strict: exact header,
/// two numeric columns, monotone time.
AmbientTrajectory read_ambient_csv(std::istream& in);
AmbientTrajectory read_ambient_csv_file(const std::string& path);
void write_ambient_csv(std::ostream& out, const AmbientTrajectory& traj);

}  // namespace acfleet
