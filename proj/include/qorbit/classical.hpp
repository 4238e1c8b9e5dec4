#pragma once

#include "qorbit/ode.hpp"

namespace qorbit {

/// Configuration-I classical chain: driven optomechanical resonator
/// (alpha_c, beta_c) cascaded into the far-detuned filter cavity alpha_1.
/// All rates are dimensionless (units of the chain's mechanical frequency).
struct Config1ClassicalParams {
    double delta_1 = 0.0;   // filter-cavity detuning
    double delta_c = 0.0;   // driven-cavity detuning
    double gamma_1 = 0.0;   // filter-cavity damping
    double gamma_c = 0.0;   // driven-cavity damping
    double epsilon_c = 0.0; // drive on alpha_c
    double epsilon_1 = 0.0; // drive on alpha_1 (0 in the published set)
    double Omega_c = 1.0;   // mechanical frequency
    double Gamma_c = 0.0;   // mechanical damping
    double g_c = 0.0;       // optomechanical coupling

    void validate() const;
};

/// Configuration-II classical resonator (alpha_s, beta).
struct Config2ClassicalParams {
    double delta_s = 0.0;
    double gamma_s = 0.0;
    double epsilon_s = 0.0;
    double Omega = 1.0;
    double Gamma = 0.0;
    double g_s = 0.0;

    void validate() const;
};

// State component order used by all chain trajectories.
enum : int { kAlpha1 = 0, kAlphaC = 1, kBetaC = 2 };   // configuration I
enum : int { kAlphaS = 0, kBeta = 1 };                 // configuration II

/// Full three-mode chain field [alpha_1, alpha_c, beta_c].
VectorField config1_field(const Config1ClassicalParams& p);

/// Autonomous (alpha_c, beta_c) subsystem: alpha_1 has no back-action on it.
VectorField config1_core_field(const Config1ClassicalParams& p);

/// Two-mode resonator field [alpha_s, beta].
VectorField config2_field(const Config2ClassicalParams& p);

/// Steady filter response alpha_1 = -sqrt(gamma_1 gamma_c) (alpha_c/L - alpha_c'/L^2),
/// L = i delta_1 + gamma_1/2. Valid when |L| dwarfs the alpha_c bandwidth.
Complex config1_filter_response(const Config1ClassicalParams& p, Complex alpha_c,
                                Complex alpha_c_dot);

/// How to obtain alpha_1 when integrating the chain.
enum class FilterMode {
    automatic,  // adiabatic when |i delta_1 + gamma_1/2| >= 1e3 x other rates
    full,       // integrate the printed three-mode system directly
    adiabatic,  // integrate (alpha_c, beta_c); reconstruct alpha_1 per sample
};

/// Canonical start: all modes zero except Re = 1e-3 on the driven mode.
State config1_initial_state();
State config2_initial_state();

/// Integrate the chain and return a three-component [alpha_1, alpha_c, beta_c]
/// trajectory regardless of mode.
Trajectory run_config1_chain(const Config1ClassicalParams& p, const IntegrationPlan& plan,
                             FilterMode mode = FilterMode::automatic);

Trajectory run_config2_resonator(const Config2ClassicalParams& p, const IntegrationPlan& plan);

enum class ModelTag { config1, config2 };
enum class DriveKind { intensity, displacement_signal };

/// Drive exported to the quantum stage: per-sample |alpha_1|^2 (configuration I)
/// or s(t) = 2 g_q Re(beta) (configuration II).
TimeSeries extract_drive(const Trajectory& traj, ModelTag tag, DriveKind kind, double g_q = 1.0);

}  // namespace qorbit
