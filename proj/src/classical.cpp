#include "qorbit/classical.hpp"

#include <algorithm>
#include <cmath>

namespace qorbit {

namespace {
constexpr Complex kI(0.0, 1.0);
}

void Config1ClassicalParams::validate() const {
    if (gamma_1 < 0.0 || gamma_c < 0.0 || Gamma_c < 0.0 || Omega_c < 0.0)
        throw UsageError("Config1ClassicalParams: damping rates and Omega_c must be nonnegative");
}

void Config2ClassicalParams::validate() const {
    if (gamma_s < 0.0 || Gamma < 0.0 || Omega < 0.0)
        throw UsageError("Config2ClassicalParams: damping rates and Omega must be nonnegative");
}

VectorField config1_field(const Config1ClassicalParams& p) {
    p.validate();
    const double cascade = std::sqrt(p.gamma_1 * p.gamma_c);
    return VectorField{
        3, [p, cascade](double, const State& y, double, State& d) {
            const Complex a1 = y[kAlpha1], ac = y[kAlphaC], bc = y[kBetaC];
            d[kAlpha1] = -kI * p.delta_1 * a1 - 0.5 * p.gamma_1 * a1 - cascade * ac + p.epsilon_1;
            d[kAlphaC] = -kI * p.delta_c * ac - 0.5 * p.gamma_c * ac -
                         kI * p.g_c * ac * (bc + std::conj(bc)) + p.epsilon_c;
            d[kBetaC] = (-kI * p.Omega_c - 0.5 * p.Gamma_c) * bc - kI * p.g_c * std::norm(ac);
        }};
}

VectorField config1_core_field(const Config1ClassicalParams& p) {
    p.validate();
    return VectorField{
        2, [p](double, const State& y, double, State& d) {
            const Complex ac = y[0], bc = y[1];
            d[0] = -kI * p.delta_c * ac - 0.5 * p.gamma_c * ac -
                   kI * p.g_c * ac * (bc + std::conj(bc)) + p.epsilon_c;
            d[1] = (-kI * p.Omega_c - 0.5 * p.Gamma_c) * bc - kI * p.g_c * std::norm(ac);
        }};
}

VectorField config2_field(const Config2ClassicalParams& p) {
    p.validate();
    return VectorField{
        2, [p](double, const State& y, double, State& d) {
            const Complex as = y[kAlphaS], b = y[kBeta];
            const Complex x = 0.5 * (b + std::conj(b));
            d[kAlphaS] =
                -kI * p.delta_s * as - 0.5 * p.gamma_s * as - 2.0 * kI * p.g_s * as * x + p.epsilon_s;
            d[kBeta] = (-kI * p.Omega - 0.5 * p.Gamma) * b - kI * p.g_s * std::norm(as);
        }};
}

Complex config1_filter_response(const Config1ClassicalParams& p, Complex alpha_c,
                                Complex alpha_c_dot) {
    const Complex lam = kI * p.delta_1 + 0.5 * p.gamma_1;
    const double cascade = std::sqrt(p.gamma_1 * p.gamma_c);
    return -cascade * (alpha_c / lam - alpha_c_dot / (lam * lam));
}

State config1_initial_state() { return State{Complex(0.0), Complex(1e-3, 0.0), Complex(0.0)}; }
State config2_initial_state() { return State{Complex(1e-3, 0.0), Complex(0.0)}; }

namespace {

bool use_adiabatic(const Config1ClassicalParams& p, FilterMode mode) {
    switch (mode) {
        case FilterMode::full: return false;
        case FilterMode::adiabatic: return true;
        case FilterMode::automatic: break;
    }
    const double lam = std::hypot(p.delta_1, 0.5 * p.gamma_1);
    const double scale = std::max({p.Omega_c, std::abs(p.delta_c), p.gamma_c, p.Gamma_c, 1.0});
    return lam >= 1e3 * scale;
}

}  // namespace

Trajectory run_config1_chain(const Config1ClassicalParams& p, const IntegrationPlan& plan,
                             FilterMode mode) {
    if (!use_adiabatic(p, mode)) return integrate(config1_field(p), config1_initial_state(), plan);

    if (p.epsilon_1 != 0.0)
        throw UsageError("run_config1_chain: adiabatic filter assumes epsilon_1 = 0");
    const VectorField core = config1_core_field(p);
    const State y0{Complex(1e-3, 0.0), Complex(0.0)};
    Trajectory sub = integrate(core, y0, plan);

    // Rebuild the three-component view; alpha_1 from the steady filter response,
    // with alpha_c' evaluated exactly from the subsystem right-hand side.
    Trajectory out;
    out.times = sub.times;
    out.states.reserve(sub.size());
    State deriv(2);
    for (std::size_t k = 0; k < sub.size(); ++k) {
        core.rhs(sub.times[k], sub.states[k], 0.0, deriv);
        const Complex a1 = config1_filter_response(p, sub.states[k][0], deriv[0]);
        out.states.push_back(State{a1, sub.states[k][0], sub.states[k][1]});
    }
    return out;
}

Trajectory run_config2_resonator(const Config2ClassicalParams& p, const IntegrationPlan& plan) {
    return integrate(config2_field(p), config2_initial_state(), plan);
}

TimeSeries extract_drive(const Trajectory& traj, ModelTag tag, DriveKind kind, double g_q) {
    if (traj.size() == 0) throw EmptyInputError("extract_drive: empty trajectory");
    const std::size_t dim = traj.states.front().size();

    if (kind == DriveKind::intensity) {
        if (tag != ModelTag::config1 || dim != 3)
            throw UsageError("extract_drive: intensity drive requires a configuration-I chain trajectory");
        return traj.series([](const State& s) { return std::norm(s[kAlpha1]); });
    }
    if (tag != ModelTag::config2 || dim != 2)
        throw UsageError("extract_drive: displacement signal requires a configuration-II trajectory");
    return traj.series([g_q](const State& s) { return 2.0 * g_q * s[kBeta].real(); });
}

}  // namespace qorbit
