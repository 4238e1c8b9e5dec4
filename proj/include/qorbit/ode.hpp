#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "qorbit/errors.hpp"
#include "qorbit/time_series.hpp"

namespace qorbit {

using Complex = std::complex<double>;
using State = std::vector<Complex>;

/// Right-hand side of a complex ODE system, optionally fed by a scalar
/// external drive sample. Must be a pure function of its arguments and
/// write exactly `dimension` components into `dydt`.
struct VectorField {
    int dimension = 0;
    std::function<void(double t, const State& y, double drive, State& dydt)> rhs;
};

/// What to integrate and how accurately. Times are in the caller's units.
struct IntegrationPlan {
    double t_start = 0.0;
    double t_end = 1.0;
    double dt_out = 1e-2;    // uniform output spacing
    double transient = 0.0;  // duration discarded before the first recorded sample
    double rtol = 1e-9;
    double atol = 1e-12;
    double max_step = 0.0;   // 0 = no ceiling

    void validate() const;
};

/// Dense uniform output of an integration. times[k] = t_start + transient + k*dt_out.
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;

    std::size_t size() const { return times.size(); }

    /// Scalar series view of one derived quantity, keeping the time grid.
    TimeSeries series(const std::function<double(const State&)>& f) const;
};

/// Adaptive Dormand-Prince 5(4) with 4th-order dense output. Error control is
/// applied to the interleaved real/imaginary representation. Deterministic:
/// identical inputs give bit-identical trajectories.
///
/// Throws StepSizeUnderflowError / DivergenceError with the failing time.
Trajectory integrate(const VectorField& field, const State& y0, const IntegrationPlan& plan,
                     const TimeSeries* drive = nullptr);

/// Classical fixed-step RK4 cross-check mode. `h` is reduced to the nearest
/// divisor of dt_out so output samples land on step boundaries.
Trajectory integrate_rk4(const VectorField& field, const State& y0, const IntegrationPlan& plan,
                         double h, const TimeSeries* drive = nullptr);

/// Advance `y` in place from t0 to t1 with the adaptive stepper, no recording.
/// Building block for renormalized tangent-growth loops.
void advance(const VectorField& field, State& y, double t0, double t1, double rtol, double atol,
             double max_step = 0.0, const TimeSeries* drive = nullptr);

}  // namespace qorbit
