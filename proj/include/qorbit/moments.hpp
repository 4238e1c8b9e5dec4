#pragma once

#include "qorbit/classical.hpp"
#include "qorbit/ode.hpp"

namespace qorbit {

/// CODATA k_B/hbar in rad ns^-1 K^-1.
inline constexpr double kBoltzmannOverHbarRadNsK = 1.380649e-23 / 1.054571817e-34 * 1e-9;

/// Configuration-I quantum stage: linearized cavity fluctuation a~ coupled to
/// the mechanical fluctuation b~, driven through the classical intensity
/// |alpha_1(t)|^2. Rates dimensionless in the same units as the classical
/// chain; `omega_ref_radns` converts those units to physical rates so the
/// kelvin-valued temperature can enter the thermal occupation.
struct Config1QuantumParams {
    double delta_q = 0.0;  // cavity detuning
    double gamma_q = 0.0;  // cavity damping (vacuum bath)
    double Omega_q = 1.0;  // bare mechanical frequency
    double Gamma_q = 0.0;  // mechanical damping (thermal bath)
    double g_1 = 0.0;      // quadratic coupling to |alpha_1|^2
    double G_q = 0.0;      // linearized optomechanical coupling
    double temperature_K = 0.0;
    double omega_ref_radns = 1.0;  // physical value of one dimensionless rate unit

    void validate() const;
    /// Dimensionless k_B T / hbar in simulation units.
    double thermal_rate() const { return kBoltzmannOverHbarRadNsK * temperature_K / omega_ref_radns; }
};

/// Mean thermal phonon number n_th = (k_B T/hbar) / (Omega_q + g_1 |alpha_1|^2).
/// Throws DomainError when the effective frequency is not positive.
double thermal_occupation(double intensity, const Config1QuantumParams& p);

/// Closed set of second moments of (a~, b~): occupations plus the four complex
/// quadratic moments, 10 real degrees of freedom.
struct MomentState {
    double n_a = 0.0;        // <a~+ a~>
    double n_b = 0.0;        // <b~+ b~>
    Complex aa;              // <a~^2>
    Complex bb;              // <b~^2>
    Complex ab;              // <a~ b~>
    Complex adag_b;          // <a~+ b~>

    static MomentState vacuum() { return {}; }
    static MomentState from_state(const State& y);
    State to_state() const;
};

// Component order inside the integrator state vector.
enum : int { kNa = 0, kNb = 1, kAA = 2, kBB = 3, kAB = 4, kAdagB = 5 };

/// The 10-real-dimensional linear moment system generated by
/// H = delta_q a+a + [Omega_q + g_1 u(t)] b+b + G_q (a + a+)(b + b+)
/// with a vacuum bath gamma_q on a~ and a thermal bath Gamma_q, n_th(u) on b~.
/// Drive sample u = |alpha_1(t)|^2.
VectorField moment_field(const Config1QuantumParams& p);

/// sigma_x = sqrt(1/2 + <b~+b~> + Re<b~^2>). Radicand slightly below zero is
/// clamped; beyond tolerance it flags a physicality failure.
double sigma_x(const MomentState& m);
double sigma_p(const MomentState& m);

/// Full configuration-I pipeline: classical chain -> intensity drive ->
/// moment evolution from vacuum -> sigma_x(t). Times are dimensionless.
struct Config1Run {
    Trajectory chain;      // [alpha_1, alpha_c, beta_c] over the full window
    TimeSeries intensity;  // |alpha_1|^2
    Trajectory moments;    // post-transient moment states
    TimeSeries sigma_x;    // per recorded sample
};

Config1Run simulate_config1(const Config1ClassicalParams& cp, const Config1QuantumParams& qp,
                            const IntegrationPlan& plan, FilterMode mode = FilterMode::automatic);

}  // namespace qorbit
