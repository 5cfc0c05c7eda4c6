#include "acfleet/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "acfleet/io.hpp"

namespace acfleet {

namespace {
constexpr double kTimeSlack = 1e-9;
}

AmbientTrajectory::AmbientTrajectory(std::vector<std::pair<double, double>> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw std::invalid_argument("AmbientTrajectory: no samples");
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        if (!(samples_[i].first > samples_[i - 1].first)) {
            throw std::invalid_argument("AmbientTrajectory: timestamps must be strictly increasing");
        }
    }
}

AmbientTrajectory AmbientTrajectory::constant(double temp_c, double horizon_h) {
    return AmbientTrajectory({{0.0, temp_c}, {horizon_h, temp_c}});
}

double AmbientTrajectory::at(double t) const {
    if (samples_.size() == 1) {
        if (std::abs(t - samples_.front().first) > kTimeSlack) throw std::out_of_range("ambient: time out of range");
        return samples_.front().second;
    }
    if (t < start() - kTimeSlack || t > end() + kTimeSlack) {
        throw std::out_of_range("ambient: time " + io::format_double(t) + " h outside sampled span");
    }
    if (t <= start()) return samples_.front().second;
    if (t >= end()) return samples_.back().second;
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                     [](double x, const auto& s) { return x < s.first; });
    const auto& [t1, y1] = *it;
    const auto& [t0, y0] = *(it - 1);
    return y0 + (y1 - y0) * (t - t0) / (t1 - t0);
}

double AmbientTrajectory::integral_to(double t) const {
    double acc = 0.0;
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        const auto& [t0, y0] = samples_[i - 1];
        const auto& [t1, y1] = samples_[i];
        if (t <= t0) break;
        const double te = std::min(t, t1);
        const double ye = y0 + (y1 - y0) * (te - t0) / (t1 - t0);
        acc += 0.5 * (y0 + ye) * (te - t0);
    }
    return acc;
}

double AmbientTrajectory::mean(double t0, double t1) const {
    if (!(t1 > t0)) throw std::invalid_argument("ambient mean: empty interval");
    if (!covers(t0, t1)) throw std::out_of_range("ambient mean: interval not covered");
    return (integral_to(t1) - integral_to(t0)) / (t1 - t0);
}

double AmbientTrajectory::min_value() const {
    return std::min_element(samples_.begin(), samples_.end(),
                            [](const auto& a, const auto& b) { return a.second < b.second; })
        ->second;
}

double AmbientTrajectory::max_value() const {
    return std::max_element(samples_.begin(), samples_.end(),
                            [](const auto& a, const auto& b) { return a.second < b.second; })
        ->second;
}

bool AmbientTrajectory::covers(double t0, double t1) const {
    return !samples_.empty() && start() <= t0 + kTimeSlack && end() >= t1 - kTimeSlack;
}

AmbientTrajectory read_ambient_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("ambient CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "time_h,temp_c") throw std::invalid_argument("ambient CSV: expected header 'time_h,temp_c'");
    std::vector<std::pair<double, double>> samples;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = io::split_csv_line(line);
        const std::string ctx = "ambient CSV row " + std::to_string(row);
        if (fields.size() != 2) throw std::invalid_argument(ctx + ": expected 2 columns");
        samples.emplace_back(io::parse_double(fields[0], ctx), io::parse_double(fields[1], ctx));
    }
    return AmbientTrajectory(std::move(samples));
}

AmbientTrajectory read_ambient_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ambient CSV " + path);
    return read_ambient_csv(in);
}

void write_ambient_csv(std::ostream& out, const AmbientTrajectory& traj) {
    out << "time_h,temp_c\n";
    for (const auto& [t, y] : traj.samples()) out << io::format_double(t) << ',' << io::format_double(y) << '\n';
}

}  // namespace acfleet
