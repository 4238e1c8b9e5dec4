#include "qorbit/moments.hpp"

#include <cmath>
#include <string>

namespace qorbit {

namespace {
constexpr Complex kI(0.0, 1.0);
constexpr double kRadicandTol = 1e-9;
}

void Config1QuantumParams::validate() const {
    if (gamma_q < 0.0 || Gamma_q < 0.0 || Omega_q < 0.0)
        throw UsageError("Config1QuantumParams: rates must be nonnegative");
    if (temperature_K < 0.0) throw UsageError("Config1QuantumParams: temperature must be nonnegative");
    if (omega_ref_radns <= 0.0)
        throw UsageError("Config1QuantumParams: omega_ref_radns must be positive");
}

double thermal_occupation(double intensity, const Config1QuantumParams& p) {
    const double omega_eff = p.Omega_q + p.g_1 * intensity;
    if (!(omega_eff > 0.0))
        throw DomainError("thermal_occupation: nonpositive effective frequency " +
                          std::to_string(omega_eff));
    return p.thermal_rate() / omega_eff;
}

MomentState MomentState::from_state(const State& y) {
    MomentState m;
    m.n_a = y[kNa].real();
    m.n_b = y[kNb].real();
    m.aa = y[kAA];
    m.bb = y[kBB];
    m.ab = y[kAB];
    m.adag_b = y[kAdagB];
    return m;
}

State MomentState::to_state() const {
    return State{Complex(n_a, 0.0), Complex(n_b, 0.0), aa, bb, ab, adag_b};
}

VectorField moment_field(const Config1QuantumParams& p) {
    p.validate();
    return VectorField{
        6, [p](double, const State& y, double u, State& d) {
            const Complex na = y[kNa], nb = y[kNb];
            const Complex A = y[kAA], B = y[kBB], X = y[kAB], Y = y[kAdagB];
            const double omega_eff = p.Omega_q + p.g_1 * u;
            if (!(omega_eff > 0.0))
                throw DomainError("moment_field: nonpositive effective mechanical frequency");
            const double n_th = p.thermal_rate() / omega_eff;
            const double G = p.G_q;

            d[kNa] = -p.gamma_q * na + kI * G * (X + std::conj(Y) - Y - std::conj(X));
            d[kNb] = -kI * G * (-Y + std::conj(Y) + std::conj(X) - X) - p.Gamma_q * nb +
                     p.Gamma_q * n_th;
            d[kAA] = -(2.0 * kI * p.delta_q + p.gamma_q) * A - 2.0 * kI * G * (X + std::conj(Y));
            d[kBB] = -(2.0 * kI * omega_eff + p.Gamma_q) * B - 2.0 * kI * G * (X + Y);
            d[kAB] = -(kI * (p.delta_q + omega_eff) + 0.5 * (p.gamma_q + p.Gamma_q)) * X -
                     kI * G * (A + B + na + nb + 1.0);
            d[kAdagB] = (kI * (p.delta_q - omega_eff) - 0.5 * (p.gamma_q + p.Gamma_q)) * Y +
                        kI * G * (B - std::conj(A) + nb - na);
        }};
}

namespace {

double quadrature_deviation(double radicand, const char* label) {
    if (radicand < -kRadicandTol)
        throw PhysicalityError(std::string(label) + ": negative radicand " +
                               std::to_string(radicand) + " beyond tolerance");
    return std::sqrt(std::max(radicand, 0.0));
}

}  // namespace

double sigma_x(const MomentState& m) {
    return quadrature_deviation(0.5 + m.n_b + m.bb.real(), "sigma_x");
}

double sigma_p(const MomentState& m) {
    return quadrature_deviation(0.5 + m.n_b - m.bb.real(), "sigma_p");
}

Config1Run simulate_config1(const Config1ClassicalParams& cp, const Config1QuantumParams& qp,
                            const IntegrationPlan& plan, FilterMode mode) {
    cp.validate();
    qp.validate();

    // The classical chain is recorded over the whole window so its signal can
    // drive the quantum stage through the joint transient; the discard happens
    // once, on the quantum output. One extra output step keeps the drive
    // defined up to t_end when the window is not a multiple of dt_out.
    IntegrationPlan classical_plan = plan;
    classical_plan.transient = 0.0;
    classical_plan.t_end = plan.t_end + plan.dt_out;

    Config1Run run;
    run.chain = run_config1_chain(cp, classical_plan, mode);
    run.intensity = extract_drive(run.chain, ModelTag::config1, DriveKind::intensity);

    run.moments = integrate(moment_field(qp), MomentState::vacuum().to_state(), plan,
                            &run.intensity);
    run.sigma_x = run.moments.series([](const State& s) {
        return sigma_x(MomentState::from_state(s));
    });
    return run;
}

}  // namespace qorbit
