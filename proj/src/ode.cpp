#include "qorbit/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qorbit {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// Embedded error weights (5th minus 4th order solution).
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense-output coefficients (Hairer & Wanner contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;
constexpr double kBeta = 0.04;  // PI stabilization

bool all_finite(const State& y) {
    for (const auto& c : y)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

// Mixed abs/rel RMS norm over the real representation of the error estimate.
double error_norm(const State& err, const State& y0, const State& y1, double atol, double rtol) {
    double sum = 0.0;
    for (std::size_t i = 0; i < err.size(); ++i) {
        const double sr = atol + rtol * std::max(std::abs(y0[i].real()), std::abs(y1[i].real()));
        const double si = atol + rtol * std::max(std::abs(y0[i].imag()), std::abs(y1[i].imag()));
        const double er = err[i].real() / sr;
        const double ei = err[i].imag() / si;
        sum += er * er + ei * ei;
    }
    return std::sqrt(sum / static_cast<double>(2 * err.size()));
}

class Dopri5 {
public:
    Dopri5(const VectorField& field, const TimeSeries* drive, double rtol, double atol,
           double max_step)
        : field_(field), drive_(drive), rtol_(rtol), atol_(atol), max_step_(max_step),
          n_(static_cast<std::size_t>(field.dimension)) {
        for (auto* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_}) k->resize(n_);
        ytmp_.resize(n_);
        ynew_.resize(n_);
        err_.resize(n_);
        for (auto* r : {&r1_, &r2_, &r3_, &r4_, &r5_}) r->resize(n_);
    }

    void eval(double t, const State& y, State& dydt) {
        const double u = drive_ ? resample_drive(*drive_, t) : 0.0;
        field_.rhs(t, y, u, dydt);
    }

    // Conventional starting-step heuristic: compare state and derivative in the
    // tolerance-scaled norm, fall back to a small fraction of the span.
    double initial_step(const State& y0, double span) const {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double sr = atol_ + rtol_ * std::abs(y0[i].real());
            const double si = atol_ + rtol_ * std::abs(y0[i].imag());
            d0 += std::norm(Complex(y0[i].real() / sr, y0[i].imag() / si));
            d1 += std::norm(Complex(k1_[i].real() / sr, k1_[i].imag() / si));
        }
        double h = (d0 > 1e-10 && d1 > 1e-10) ? 0.01 * std::sqrt(d0 / d1) : 1e-6 * span;
        h = std::clamp(h, 1e-12 * span, span);
        if (max_step_ > 0.0) h = std::min(h, max_step_);
        return h;
    }

    // One accepted adaptive step from (t, y). On return y/t advanced, k1_ holds
    // the FSAL derivative at the new point, and the r*_ arrays hold the dense
    // interpolant for the step just taken.
    void step(double& t, State& y, double& h, double t_limit) {
        for (;;) {
            if (h < 1e4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0))
                throw StepSizeUnderflowError(
                    "integrate: step size underflow (stiffness beyond tolerance budget) at t=" +
                        std::to_string(t),
                    t);
            bool clipped = false;
            if (t + h >= t_limit) {
                h = t_limit - t;
                clipped = true;
            }

            for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h * a21 * k1_[i];
            eval(t + c2 * h, ytmp_, k2_);
            for (std::size_t i = 0; i < n_; ++i)
                ytmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
            eval(t + c3 * h, ytmp_, k3_);
            for (std::size_t i = 0; i < n_; ++i)
                ytmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
            eval(t + c4 * h, ytmp_, k4_);
            for (std::size_t i = 0; i < n_; ++i)
                ytmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
            eval(t + c5 * h, ytmp_, k5_);
            for (std::size_t i = 0; i < n_; ++i)
                ytmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                                       a65 * k5_[i]);
            eval(t + h, ytmp_, k6_);
            for (std::size_t i = 0; i < n_; ++i)
                ynew_[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] +
                                       a76 * k6_[i]);
            eval(t + h, ynew_, k7_);

            for (std::size_t i = 0; i < n_; ++i)
                err_[i] = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                               e6 * k6_[i] + e7 * k7_[i]);
            const double err = error_norm(err_, y, ynew_, atol_, rtol_);

            if (err <= 1.0) {
                if (!all_finite(ynew_))
                    throw DivergenceError(
                        "integrate: non-finite state component at t=" + std::to_string(t + h),
                        t + h);
                // Dense interpolant for this step.
                for (std::size_t i = 0; i < n_; ++i) {
                    const Complex ydiff = ynew_[i] - y[i];
                    const Complex bspl = h * k1_[i] - ydiff;
                    r1_[i] = y[i];
                    r2_[i] = ydiff;
                    r3_[i] = bspl;
                    r4_[i] = ydiff - h * k7_[i] - bspl;
                    r5_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] +
                                  d6 * k6_[i] + d7 * k7_[i]);
                }
                t_step_ = t;
                h_step_ = h;
                t += h;
                y.swap(ynew_);
                ynew_.resize(n_);
                k1_.swap(k7_);  // FSAL

                const double fac = err > 0.0
                                       ? kSafety * std::pow(err, -0.2) * std::pow(facold_, kBeta)
                                       : kMaxFactor;
                double hnew = h * std::clamp(fac, kMinFactor, kMaxFactor);
                if (max_step_ > 0.0) hnew = std::min(hnew, max_step_);
                facold_ = std::max(err, 1e-4);
                h = hnew;
                if (clipped && t >= t_limit) h = std::max(hnew, h_step_);
                return;
            }
            // Rejected: shrink and retry.
            const double fac = kSafety * std::pow(err, -0.2);
            h *= std::clamp(fac, kMinFactor, 1.0);
        }
    }

    // Evaluate the dense interpolant of the last accepted step at t in [t_step, t_step+h_step].
    void interpolate(double t, State& out) const {
        const double theta = (t - t_step_) / h_step_;
        const double theta1 = 1.0 - theta;
        out.resize(n_);
        for (std::size_t i = 0; i < n_; ++i)
            out[i] = r1_[i] + theta * (r2_[i] + theta1 * (r3_[i] + theta * (r4_[i] + theta1 * r5_[i])));
    }

    double step_start() const { return t_step_; }
    double step_size() const { return h_step_; }
    State k1_, k2_, k3_, k4_, k5_, k6_, k7_;
    State ynew_;

private:
    const VectorField& field_;
    const TimeSeries* drive_;
    double rtol_, atol_, max_step_;
    std::size_t n_;
    State ytmp_, err_;
    State r1_, r2_, r3_, r4_, r5_;
    double t_step_ = 0.0, h_step_ = 0.0;
    double facold_ = 1e-4;
};

void check_inputs(const VectorField& field, const State& y0, const IntegrationPlan& plan,
                  const TimeSeries* drive) {
    plan.validate();
    if (field.dimension <= 0 || !field.rhs) throw UsageError("integrate: empty vector field");
    if (static_cast<int>(y0.size()) != field.dimension)
        throw UsageError("integrate: y0 dimension " + std::to_string(y0.size()) +
                         " != field dimension " + std::to_string(field.dimension));
    if (drive) {
        const double grace = 1e-9 * drive->dt;
        if (drive->t0 > plan.t_start + grace || drive->t_end() < plan.t_end - grace)
            throw UsageError("integrate: drive series does not cover [t_start, t_end]");
    }
}

}  // namespace

void IntegrationPlan::validate() const {
    if (!(t_end > t_start)) throw UsageError("IntegrationPlan: t_end must exceed t_start");
    if (!(dt_out > 0.0)) throw UsageError("IntegrationPlan: dt_out must be positive");
    if (transient < 0.0) throw UsageError("IntegrationPlan: transient must be nonnegative");
    if (!(rtol > 0.0) || !(atol > 0.0)) throw UsageError("IntegrationPlan: tolerances must be positive");
    if (transient >= t_end - t_start)
        throw UsageError("IntegrationPlan: transient consumes the whole run");
}

TimeSeries Trajectory::series(const std::function<double(const State&)>& f) const {
    TimeSeries out;
    if (times.empty()) return out;
    out.t0 = times.front();
    out.dt = times.size() > 1 ? times[1] - times[0] : 1.0;
    out.values.reserve(states.size());
    for (const auto& s : states) out.values.push_back(f(s));
    return out;
}

Trajectory integrate(const VectorField& field, const State& y0, const IntegrationPlan& plan,
                     const TimeSeries* drive) {
    check_inputs(field, y0, plan, drive);

    Dopri5 stepper(field, drive, plan.rtol, plan.atol, plan.max_step);
    State y = y0;
    double t = plan.t_start;
    stepper.eval(t, y, stepper.k1_);

    const double span = plan.t_end - plan.t_start;
    double h = stepper.initial_step(y, span);

    const double record_from = plan.t_start + plan.transient;
    Trajectory traj;
    // Output grid: record_from + j*dt_out, computed by index (no accumulation drift).
    std::size_t j = 0;
    auto grid_time = [&](std::size_t k) { return record_from + static_cast<double>(k) * plan.dt_out; };
    const double t_eps = 1e-9 * plan.dt_out;

    if (grid_time(0) <= t + t_eps) {  // transient == 0 records the initial state
        traj.times.push_back(grid_time(0));
        traj.states.push_back(y);
        ++j;
    }

    State interp;
    while (t < plan.t_end - t_eps) {
        stepper.step(t, y, h, plan.t_end);
        while (grid_time(j) <= t + t_eps && grid_time(j) <= plan.t_end + t_eps) {
            const double tq = grid_time(j);
            if (tq >= stepper.step_start() - t_eps) {
                stepper.interpolate(std::min(tq, t), interp);
                traj.times.push_back(tq);
                traj.states.push_back(interp);
            }
            ++j;
        }
    }
    return traj;
}

Trajectory integrate_rk4(const VectorField& field, const State& y0, const IntegrationPlan& plan,
                         double h, const TimeSeries* drive) {
    check_inputs(field, y0, plan, drive);
    if (!(h > 0.0)) throw UsageError("integrate_rk4: step must be positive");

    // Land output samples exactly on step boundaries.
    const auto per_out = static_cast<std::size_t>(std::ceil(plan.dt_out / h - 1e-12));
    const double hs = plan.dt_out / static_cast<double>(per_out);

    const std::size_t n = y0.size();
    State y = y0, k1(n), k2(n), k3(n), k4(n), ytmp(n);
    auto eval = [&](double t, const State& yy, State& dydt) {
        const double u = drive ? resample_drive(*drive, std::min(t, plan.t_end)) : 0.0;
        field.rhs(t, yy, u, dydt);
    };

    Trajectory traj;
    const double record_from = plan.t_start + plan.transient;
    const double t_eps = 1e-9 * plan.dt_out;
    const auto total_steps = static_cast<std::size_t>(
        std::llround(std::ceil((plan.t_end - plan.t_start) / hs - 1e-9)));

    if (record_from <= plan.t_start + t_eps) {
        traj.times.push_back(plan.t_start);
        traj.states.push_back(y);
    }
    for (std::size_t k = 0; k < total_steps; ++k) {
        const double t = plan.t_start + static_cast<double>(k) * hs;
        eval(t, y, k1);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * hs * k1[i];
        eval(t + 0.5 * hs, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * hs * k2[i];
        eval(t + 0.5 * hs, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * k3[i];
        eval(t + hs, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            y[i] += (hs / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!all_finite(y))
            throw DivergenceError("integrate_rk4: non-finite state at t=" + std::to_string(t + hs),
                                  t + hs);
        const double tk = plan.t_start + static_cast<double>(k + 1) * hs;
        if ((k + 1) % per_out == 0 && tk >= record_from - t_eps && tk <= plan.t_end + t_eps) {
            traj.times.push_back(tk);
            traj.states.push_back(y);
        }
    }
    return traj;
}

void advance(const VectorField& field, State& y, double t0, double t1, double rtol, double atol,
             double max_step, const TimeSeries* drive) {
    if (!(t1 > t0)) throw UsageError("advance: t1 must exceed t0");
    Dopri5 stepper(field, drive, rtol, atol, max_step);
    double t = t0;
    stepper.eval(t, y, stepper.k1_);
    double h = stepper.initial_step(y, t1 - t0);
    const double t_eps = 1e-12 * std::max(std::abs(t1), 1.0);
    while (t < t1 - t_eps) stepper.step(t, y, h, t1);
}

}  // namespace qorbit
