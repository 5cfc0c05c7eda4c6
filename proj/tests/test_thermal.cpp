#include <doctest.h>

#include <cmath>
#include <sstream>

#include "acfleet/ambient.hpp"
#include "acfleet/population.hpp"
#include "acfleet/thermal.hpp"

using namespace acfleet;

namespace {

// Forward Euler with a tiny step, independent of the closed form.
double euler_reference(double theta, const AcParams& p, int sigma, double theta_a, double dt, int substeps) {
    const double h = dt / substeps;
    for (int i = 0; i < substeps; ++i) theta += h * (-p.alpha * (theta - theta_a) - sigma * p.beta * p.p_thermal);
    return theta;
}

AcParams wide_params() {
    AcParams p;
    p.s0 = 25.0;
    p.delta = 5.0;
    return p;
}

}  // namespace

TEST_CASE("closed-form OFF step matches the worked value") {
    const AcParams p = wide_params();
    AcState s{25.0, 25.0, 0, 0.0};
    const AcState n = step_exact(s, p, 32.0, 1.0);
    CHECK(n.sigma == 0);
    CHECK(n.theta == doctest::Approx(32.0 - 7.0 * std::exp(-0.05)).epsilon(1e-14));
    CHECK(n.theta == doctest::Approx(25.3414).epsilon(1e-5));
    CHECK(n.theta == doctest::Approx(euler_reference(25.0, p, 0, 32.0, 1.0, 200000)).epsilon(1e-6));
    CHECK(n.t == doctest::Approx(1.0));
}

TEST_CASE("closed-form ON step matches the worked value") {
    const AcParams p = wide_params();
    CHECK(32.0 - p.on_drop() == doctest::Approx(4.0));
    AcState s{25.0, 25.0, 1, 0.0};
    const AcState n = step_exact(s, p, 32.0, 1.0);
    CHECK(n.sigma == 1);
    CHECK(n.theta == doctest::Approx(4.0 + 21.0 * std::exp(-0.05)).epsilon(1e-14));
    CHECK(n.theta == doctest::Approx(23.9758).epsilon(1e-5));
    CHECK(n.theta == doctest::Approx(euler_reference(25.0, p, 1, 32.0, 1.0, 200000)).epsilon(1e-6));
}

TEST_CASE("ambient is a fixed point of the OFF dynamics") {
    AcParams p;
    for (double dt : {1e-4, 0.3, 2.0, 50.0}) CHECK(integrate_exact(31.0, p, 0, 31.0, dt) == doctest::Approx(31.0));
}

TEST_CASE("exact integration composes over split steps") {
    AcParams p;
    for (int sigma : {0, 1}) {
        const double whole = integrate_exact(21.0, p, sigma, 33.0, 0.7);
        const double split = integrate_exact(integrate_exact(21.0, p, sigma, 33.0, 0.3), p, sigma, 33.0, 0.4);
        CHECK(whole == doctest::Approx(split).epsilon(1e-13));
    }
}

TEST_CASE("temperature moves monotonically toward the mode equilibrium") {
    AcParams p;
    double off = 20.0;
    double on = 20.0;
    for (int k = 0; k < 100; ++k) {
        const double off_next = integrate_exact(off, p, 0, 32.0, 0.1);
        const double on_next = integrate_exact(on, p, 1, 32.0, 0.1);
        CHECK(off_next > off);
        CHECK(on_next < on);
        CHECK(off_next < 32.0);
        CHECK(on_next > 32.0 - p.on_drop());
        off = off_next;
        on = on_next;
    }
}

TEST_CASE("electrical power") {
    AcParams p;
    CHECK(electrical_power(p, 1) == doctest::Approx(5.6));
    CHECK(electrical_power(p, 0) == 0.0);
    Population pop(500);
    for (auto& h : pop) h.state.sigma = 1;
    CHECK(aggregate_power(pop) == doctest::Approx(2800.0));
}

TEST_CASE("hysteresis switches before crossing a band edge") {
    AcParams p;  // band [19, 21]
    AcState s{20.995, 20.0, 0, 0.0};
    const AcState n = step_exact(s, p, 32.0, 1.0 / 60.0);
    CHECK(n.sigma == 1);
    CHECK(n.theta < 20.995);

    AcState c{19.01, 20.0, 1, 0.0};
    const AcState m = step_exact(c, p, 32.0, 1.0 / 60.0);
    CHECK(m.sigma == 0);
    CHECK(m.theta > 19.01);

    AcState mid{20.0, 20.0, 0, 0.0};
    CHECK(step_exact(mid, p, 32.0, 1.0 / 60.0).sigma == 0);
}

TEST_CASE("a pinned band keeps the temperature inside the contract band") {
    AcParams p;
    const Band pinned{p.upper0(), p.upper0()};
    AcState s{20.9, 21.0, 0, 0.0};
    for (int k = 0; k < 36000; ++k) {
        s = step_exact(s, p, 36.0, 1.0 / 3600.0, pinned);
        REQUIRE(s.theta <= p.upper0() + 1e-9);
        REQUIRE(s.theta >= p.lower0() - 1e-9);
    }
}

TEST_CASE("long simulation under a fixed band stays in the band") {
    AcParams p;
    AcState s{20.0, 20.0, 1, 0.0};
    for (int k = 0; k < 24 * 3600; ++k) {
        s = step_exact(s, p, 34.0, 1.0 / 3600.0);
        REQUIRE(s.theta <= p.upper0() + 1e-9);
        REQUIRE(s.theta >= p.lower0() - 1e-9);
    }
}

TEST_CASE("step_exact rejects invalid inputs") {
    AcParams p;
    AcState s;
    CHECK_THROWS_AS((void)step_exact(s, p, 32.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)step_exact(s, p, 20.5, 0.1), ThermalDomainError);
    AcParams bad = p;
    bad.alpha = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("population sampling") {
    PopulationSpec spec;
    spec.n = 4000;
    spec.seed = 99;
    const Population pop = sample_population(spec);
    REQUIRE(pop.size() == 4000);
    double sum = 0.0;
    for (const auto& h : pop) {
        sum += h.params.alpha;
        CHECK(h.params.alpha >= 0.9 * 0.05);
        CHECK(h.params.alpha <= 1.1 * 0.05);
        CHECK(h.params.beta >= 0.09);
        CHECK(h.params.beta <= 0.11);
        CHECK(h.params.delta == 1.0);
        CHECK(std::abs(h.state.theta - h.params.s0) <= h.params.delta);
    }
    const double m = sum / static_cast<double>(pop.size());
    // Std of a truncated N(μ, 0.1μ) on ±1σ is about 0.054μ.
    const double se = 0.054 * 0.05 / std::sqrt(4000.0);
    CHECK(std::abs(m - 0.05) < 3.0 * se);
}

TEST_CASE("population sampling is deterministic in the seed") {
    PopulationSpec spec;
    spec.n = 300;
    spec.delta.shape = DeltaShape::Uniform;
    spec.seed = 5;
    const Population a = sample_population(spec);
    const Population b = sample_population(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].params.alpha == b[i].params.alpha);
        CHECK(a[i].params.delta == b[i].params.delta);
        CHECK(a[i].state.theta == b[i].state.theta);
        CHECK(a[i].state.sigma == b[i].state.sigma);
    }
    spec.seed = 6;
    CHECK(sample_population(spec)[0].params.alpha != a[0].params.alpha);
}

TEST_CASE("delta shapes stay in range") {
    for (auto shape : {DeltaShape::Uniform, DeltaShape::TriangularHigh, DeltaShape::TriangularLow}) {
        PopulationSpec spec;
        spec.n = 2000;
        spec.delta.shape = shape;
        double m = 0.0;
        for (const auto& h : sample_population(spec)) {
            CHECK(h.params.delta >= 0.1);
            CHECK(h.params.delta <= 1.1);
            m += h.params.delta / 2000.0;
        }
        if (shape == DeltaShape::Uniform) CHECK(m == doctest::Approx(0.6).epsilon(0.03));
        if (shape == DeltaShape::TriangularHigh) CHECK(m == doctest::Approx(0.1 + 2.0 / 3.0).epsilon(0.03));
        if (shape == DeltaShape::TriangularLow) CHECK(m == doctest::Approx(0.1 + 1.0 / 3.0).epsilon(0.03));
        CHECK(parse_delta_shape(to_string(shape)) == shape);
    }
    CHECK_THROWS(parse_delta_shape("bogus"));
}

TEST_CASE("ambient interpolation and averages") {
    AmbientTrajectory a({{0.0, 30.0}, {2.0, 34.0}, {4.0, 30.0}});
    CHECK(a.at(1.0) == doctest::Approx(32.0));
    CHECK(a.at(3.5) == doctest::Approx(31.0));
    CHECK(a.mean(0.0, 4.0) == doctest::Approx(32.0));
    CHECK(a.mean(0.0, 2.0) == doctest::Approx(32.0));
    CHECK(a.mean(1.0, 2.0) == doctest::Approx(33.0));
    CHECK(a.min_value() == 30.0);
    CHECK(a.max_value() == 34.0);
    CHECK(a.covers(0.0, 4.0));
    CHECK_FALSE(a.covers(0.0, 4.5));
    CHECK_THROWS_AS((void)a.at(5.0), std::out_of_range);
    CHECK_THROWS(AmbientTrajectory({{1.0, 30.0}, {1.0, 31.0}}));
    CHECK(AmbientTrajectory::constant(32.0, 24.0).mean(0.0, 24.0) == doctest::Approx(32.0));
}

TEST_CASE("ambient CSV round trip") {
    AmbientTrajectory a({{0.0, 30.5}, {0.5, 31.25}, {24.0, 29.0}});
    std::ostringstream os;
    write_ambient_csv(os, a);
    std::istringstream is(os.str());
    const AmbientTrajectory b = read_ambient_csv(is);
    REQUIRE(b.samples().size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(b.samples()[i].first == a.samples()[i].first);
        CHECK(b.samples()[i].second == a.samples()[i].second);
    }
    std::istringstream bad_header("t,temp\n0,30\n");
    CHECK_THROWS(read_ambient_csv(bad_header));
    std::istringstream bad_order("time_h,temp_c\n1,30\n0,31\n");
    CHECK_THROWS(read_ambient_csv(bad_order));
    std::istringstream bad_value("time_h,temp_c\n0,abc\n");
    CHECK_THROWS(read_ambient_csv(bad_value));
}
