#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>

#include "qorbit/ode.hpp"

using namespace qorbit;

namespace {

VectorField exp_decay() {
    return VectorField{1, [](double, const State& y, double, State& d) { d[0] = -y[0]; }};
}

VectorField harmonic() {
    return VectorField{2, [](double, const State& y, double, State& d) {
                           d[0] = y[1];
                           d[1] = -y[0];
                       }};
}

VectorField lorenz(double sigma = 10.0, double rho = 28.0, double b = 8.0 / 3.0) {
    return VectorField{3, [=](double, const State& y, double, State& d) {
                           d[0] = sigma * (y[1] - y[0]);
                           d[1] = y[0] * (rho - y[2]) - y[1];
                           d[2] = y[0] * y[1] - b * y[2];
                       }};
}

double max_abs(const Trajectory& traj) {
    double m = 0.0;
    for (const auto& s : traj.states)
        for (const auto& c : s) m = std::max({m, std::abs(c.real()), std::abs(c.imag())});
    return m;
}

}  // namespace

TEST_CASE("exponential decay hits the analytic value") {
    IntegrationPlan plan;
    plan.t_end = 1.0;
    plan.dt_out = 0.1;
    plan.rtol = 1e-10;
    plan.atol = 1e-14;
    const auto traj = integrate(exp_decay(), State{Complex(1.0)}, plan);
    REQUIRE(traj.size() == 11);
    CHECK(traj.times.back() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(traj.states.back()[0].real() - 0.3678794411714423) < 1e-8);
    CHECK(std::abs(traj.states.back()[0].imag()) < 1e-14);
}

TEST_CASE("harmonic oscillator conserves energy over a long run") {
    IntegrationPlan plan;
    plan.t_end = 100.0;
    plan.dt_out = 0.25;
    plan.rtol = 1e-10;
    plan.atol = 1e-12;
    const auto traj = integrate(harmonic(), State{Complex(1.0), Complex(0.0)}, plan);
    for (const auto& s : traj.states) {
        const double energy = std::norm(s[0]) + std::norm(s[1]);
        CHECK(std::abs(energy - 1.0) < 1e-6);
    }
}

TEST_CASE("Lorenz trajectory stays on the bounded attractor") {
    IntegrationPlan plan;
    plan.t_end = 500.0;
    plan.dt_out = 0.5;
    plan.rtol = 1e-9;
    plan.atol = 1e-12;
    const State y0{Complex(1.0), Complex(1.0), Complex(1.0)};
    const auto traj = integrate(lorenz(), y0, plan);
    CHECK(max_abs(traj) < 100.0);

    // Oracle route: same flow at much tighter tolerance remains bounded too.
    plan.rtol = 1e-12;
    plan.atol = 1e-14;
    const auto tight = integrate(lorenz(), y0, plan);
    CHECK(max_abs(tight) < 100.0);
}

TEST_CASE("output grid is independent of the solution accuracy") {
    IntegrationPlan plan;
    plan.t_end = 10.0;
    plan.dt_out = 0.2;
    plan.rtol = 1e-9;
    plan.atol = 1e-12;
    const State y0{Complex(1.0), Complex(0.0)};
    const auto coarse = integrate(harmonic(), y0, plan);
    plan.dt_out = 0.1;
    const auto fine = integrate(harmonic(), y0, plan);
    REQUIRE(fine.size() == 2 * coarse.size() - 1);
    for (std::size_t k = 0; k < coarse.size(); ++k) {
        CHECK(std::abs(coarse.times[k] - fine.times[2 * k]) < 1e-12);
        const double diff = std::abs(coarse.states[k][0] - fine.states[2 * k][0]);
        CHECK(diff < 1e-9);  // same interpolants, only grid arithmetic differs
    }
}

TEST_CASE("restart from a recorded state reproduces the tail") {
    IntegrationPlan plan;
    plan.t_end = 20.0;
    plan.dt_out = 0.5;
    plan.rtol = 1e-9;
    plan.atol = 1e-12;
    const auto full = integrate(harmonic(), State{Complex(1.0), Complex(0.0)}, plan);

    const std::size_t mid = full.size() / 2;
    IntegrationPlan tail = plan;
    tail.t_start = full.times[mid];
    const auto rest = integrate(harmonic(), full.states[mid], tail);
    for (std::size_t k = 0; k < rest.size(); ++k) {
        const std::size_t k_full = mid + k;
        REQUIRE(k_full < full.size());
        CHECK(std::abs(full.times[k_full] - rest.times[k]) < 1e-12);
        CHECK(std::abs(full.states[k_full][0] - rest.states[k][0]) < 10.0 * 1e-9);
    }
}

TEST_CASE("repeated runs are bit-identical") {
    IntegrationPlan plan;
    plan.t_end = 50.0;
    plan.dt_out = 0.1;
    const State y0{Complex(1.0), Complex(1.0), Complex(1.0)};
    const auto a = integrate(lorenz(), y0, plan);
    const auto b = integrate(lorenz(), y0, plan);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(std::memcmp(a.states[k].data(), b.states[k].data(),
                          a.states[k].size() * sizeof(Complex)) == 0);
    }
}

TEST_CASE("transient discard drops the leading samples") {
    IntegrationPlan plan;
    plan.t_end = 10.0;
    plan.dt_out = 0.5;
    plan.transient = 2.0;
    const auto traj = integrate(exp_decay(), State{Complex(1.0)}, plan);
    REQUIRE(traj.size() == 17);
    CHECK(traj.times.front() == doctest::Approx(2.0));
    CHECK(traj.times.back() == doctest::Approx(10.0));
}

TEST_CASE("finite-time blow-up raises a diagnostic error near the singularity") {
    // y' = y^2 from y(0)=1 diverges at t=1.
    VectorField f{1, [](double, const State& y, double, State& d) { d[0] = y[0] * y[0]; }};
    IntegrationPlan plan;
    plan.t_end = 2.0;
    plan.dt_out = 0.01;
    double t_fail = -1.0;
    try {
        integrate(f, State{Complex(1.0)}, plan);
        FAIL("expected an error");
    } catch (const StepSizeUnderflowError& e) {
        t_fail = e.time();
    } catch (const DivergenceError& e) {
        t_fail = e.time();
    }
    CHECK(t_fail > 0.9);
    CHECK(t_fail < 1.1);
}

TEST_CASE("resample_drive interpolates linearly and is exact at samples") {
    TimeSeries constant{0.0, 1.0, {2.0, 2.0, 2.0}};
    CHECK(resample_drive(constant, 0.0) == 2.0);
    CHECK(resample_drive(constant, 1.7) == 2.0);

    TimeSeries ramp{0.0, 1.0, {0.0, 1.0}};
    CHECK(resample_drive(ramp, 0.5) == doctest::Approx(0.5));
    CHECK(resample_drive(ramp, 0.0) == 0.0);
    CHECK(resample_drive(ramp, 1.0) == 1.0);
    CHECK_THROWS_AS(resample_drive(ramp, 1.5), RangeError);
    CHECK_THROWS_AS(resample_drive(ramp, -0.5), RangeError);
}

TEST_CASE("driven integration picks the interpolated drive sample") {
    // y' = u(t), u = t ramp: y(t) = t^2/2.
    VectorField f{1, [](double, const State&, double u, State& d) { d[0] = u; }};
    TimeSeries ramp{0.0, 0.01, {}};
    for (int k = 0; k <= 200; ++k) ramp.values.push_back(0.01 * k);
    IntegrationPlan plan;
    plan.t_end = 2.0;
    plan.dt_out = 0.1;
    const auto traj = integrate(f, State{Complex(0.0)}, plan, &ramp);
    CHECK(std::abs(traj.states.back()[0].real() - 2.0) < 1e-9);
}

TEST_CASE("fixed-step RK4 cross-check agrees with the adaptive integrator") {
    IntegrationPlan plan;
    plan.t_end = 1.0;
    plan.dt_out = 0.1;
    const auto rk4 = integrate_rk4(exp_decay(), State{Complex(1.0)}, plan, 1e-3);
    REQUIRE(rk4.size() == 11);
    CHECK(std::abs(rk4.states.back()[0].real() - 0.3678794411714423) < 1e-8);
    CHECK(std::abs(rk4.times.back() - 1.0) < 1e-12);
}

TEST_CASE("plan validation rejects broken plans") {
    IntegrationPlan plan;
    plan.t_end = -1.0;
    CHECK_THROWS_AS(plan.validate(), UsageError);
    plan.t_end = 1.0;
    plan.dt_out = 0.0;
    CHECK_THROWS_AS(plan.validate(), UsageError);
    plan.dt_out = 0.1;
    plan.transient = 2.0;
    CHECK_THROWS_AS(plan.validate(), UsageError);
}
