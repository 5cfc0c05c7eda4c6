#include "acfleet/home_lp.hpp"

#include <algorithm>
#include <cmath>

namespace acfleet {

namespace {

struct MaxPos {
    template <class B>
    bool operator()(const B& x, const B& y) const {
        return x.pos < y.pos;
    }
};
struct MinPos {
    template <class B>
    bool operator()(const B& x, const B& y) const {
        return x.pos > y.pos;
    }
};

}  // namespace

bool HomeLpSolver::solve(const HomeLpData& d, std::span<const double> cost, std::span<double> u) {
    const std::size_t mu = cost.size();
    left_.clear();
    right_.clear();
    argmin_.assign(mu, 0.0);

    // actual position = scale * stored + offset (per heap); actual increment = slope_scale * stored.
    double scale = 1.0;
    double off_left = 0.0;
    double off_right = 0.0;
    double slope_scale = 1.0;
    double mid_slope = 0.0;  // slope between top(left) and top(right)
    double lo = d.lower;
    double hi = d.upper;

    auto left_pos = [&](const Breakpoint& b) { return scale * b.pos + off_left; };
    auto right_pos = [&](const Breakpoint& b) { return scale * b.pos + off_right; };
    auto push_left = [&](double x, double inc) {
        if (inc <= 0.0) return;
        left_.push_back({(x - off_left) / scale, inc / slope_scale});
        std::push_heap(left_.begin(), left_.end(), MaxPos{});
    };
    auto push_right = [&](double x, double inc) {
        if (inc <= 0.0) return;
        right_.push_back({(x - off_right) / scale, inc / slope_scale});
        std::push_heap(right_.begin(), right_.end(), MinPos{});
    };
    auto pop_left = [&]() {
        std::pop_heap(left_.begin(), left_.end(), MaxPos{});
        const Breakpoint b = left_.back();
        left_.pop_back();
        return b;
    };
    auto pop_right = [&]() {
        std::pop_heap(right_.begin(), right_.end(), MinPos{});
        const Breakpoint b = right_.back();
        right_.pop_back();
        return b;
    };

    for (std::size_t step = mu; step-- > 0;) {
        const double shift = cost[step] / d.g;

        // h(y) = W(y) - (cost/g) y
        mid_slope -= shift;
        while (mid_slope > 0.0 && !left_.empty() && left_pos(left_.front()) > lo) {
            const Breakpoint b = pop_left();
            const double inc = b.inc * slope_scale;
            const double x = scale * b.pos + off_left;
            mid_slope -= inc;
            push_right(x, inc);
        }
        while (mid_slope < 0.0 && !right_.empty() && right_pos(right_.front()) < hi &&
               mid_slope + right_.front().inc * slope_scale < 0.0) {
            const Breakpoint b = pop_right();
            const double inc = b.inc * slope_scale;
            const double x = scale * b.pos + off_right;
            mid_slope += inc;
            push_left(x, inc);
        }

        // Window minimum over [z - g, z]: open a flat piece of length g at the minimizer.
        double ystar = 0.0;
        if (mid_slope > 0.0) {
            ystar = lo;
            off_right += d.g;
            hi += d.g;
            push_right(lo + d.g, mid_slope);
            mid_slope = 0.0;
        } else if (mid_slope == 0.0) {
            ystar = (!left_.empty() && left_pos(left_.front()) > lo) ? left_pos(left_.front()) : lo;
            off_right += d.g;
            hi += d.g;
        } else if (!right_.empty() && right_pos(right_.front()) < hi) {
            const Breakpoint b = pop_right();
            const double inc = b.inc * slope_scale;
            const double x = scale * b.pos + off_right;
            ystar = x;
            push_left(x, -mid_slope);
            off_right += d.g;
            hi += d.g;
            push_right(x + d.g, mid_slope + inc);
            mid_slope = 0.0;
        } else {
            ystar = hi;
            push_left(hi, -mid_slope);
            off_right += d.g;
            hi += d.g;
            mid_slope = 0.0;
        }
        argmin_[step] = ystar;

        mid_slope += shift;

        // z = a x + forcing
        const double b = d.forcing[step];
        scale /= d.a;
        off_left = (off_left - b) / d.a;
        off_right = (off_right - b) / d.a;
        lo = (lo - b) / d.a;
        hi = (hi - b) / d.a;
        slope_scale *= d.a;
        mid_slope *= d.a;

        const double slack = 1e-9 * (1.0 + std::abs(d.upper) + std::abs(d.lower));
        if (step > 0) {
            if (d.upper < hi) {
                hi = d.upper;
                while (!left_.empty() && left_pos(left_.front()) >= hi) {
                    mid_slope -= pop_left().inc * slope_scale;
                }
            }
            if (d.lower > lo) {
                lo = d.lower;
                while (!right_.empty() && right_pos(right_.front()) <= lo) {
                    mid_slope += pop_right().inc * slope_scale;
                }
            }
            if (lo > hi) {
                if (lo - hi > slack) return false;
                const double m = 0.5 * (lo + hi);
                lo = m;
                hi = m;
            }
        } else if (d.theta0 < lo - slack || d.theta0 > hi + slack) {
            return false;
        }
    }

    double theta = d.theta0;
    for (std::size_t step = 0; step < mu; ++step) {
        const double z = d.a * theta + d.forcing[step];
        double y = std::clamp(argmin_[step], z - d.g, z);
        y = std::clamp(y, d.lower, d.upper);
        const double control = std::clamp((z - y) / d.g, 0.0, 1.0);
        u[step] = control;
        theta = z - d.g * control;
    }
    return true;
}

}  // namespace acfleet
