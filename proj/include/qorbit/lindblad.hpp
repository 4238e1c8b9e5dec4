#pragma once

#include <array>

#include "qorbit/classical.hpp"
#include "qorbit/ode.hpp"

namespace qorbit {

/// Configuration-II quantum cavity: weakly driven mode whose detuning is
/// modulated by the classical signal s(t). Dimensionless rates.
struct Config2QuantumParams {
    double delta_q = 0.0;
    double gamma_q = 0.0;
    double epsilon_q = 0.0;  // weak drive; warn above 0.1 * gamma_q
    double g_q = 0.0;        // coupling to the mechanical displacement

    void validate() const;
    bool weak_driving() const { return epsilon_q <= 0.1 * gamma_q; }
};

/// 3x3 density matrix in the Fock basis {|0>, |1>, |2>}, row-major lam[j*3+k].
struct DensityMatrix {
    std::array<Complex, 9> lam{};

    static DensityMatrix vacuum();
    static DensityMatrix from_state(const State& y);
    State to_state() const;

    Complex operator()(int j, int k) const { return lam[j * 3 + k]; }
    Complex& operator()(int j, int k) { return lam[j * 3 + k]; }

    double trace_deviation() const;       // |tr - 1|
    double hermiticity_residue() const;   // max |lam_jk - conj(lam_kj)|
    double min_eigenvalue() const;
    /// Throws PhysicalityError when any of the three invariants is violated.
    void validate(double trace_tol = 1e-8, double herm_tol = 1e-10, double eig_tol = 1e-8) const;
};

/// Lindblad generator rho' = i[rho, H(t)] + gamma_q D[a]rho on the truncated
/// basis, H(t) = [delta_q + s(t)] a+a + epsilon_q (a + a+). Drive sample: s(t).
VectorField lindblad_field(const Config2QuantumParams& p);

namespace detail {
/// Same generator truncated at `levels` Fock states (state dim levels^2);
/// used by the truncation-sensitivity check.
VectorField lindblad_field_n(const Config2QuantumParams& p, int levels);
}

/// Mean photon number lam_11 + 2 lam_22 (= n_a on the truncated basis).
double mean_photon(const DensityMatrix& rho);
/// Residue of the weak-driving readout approximation n_a ~ lam_11.
double mean_photon_residue(const DensityMatrix& rho);

/// Full configuration-II pipeline: resonator -> s(t) -> Lindblad evolution
/// from vacuum -> lam_11(t). Physicality is validated on every recorded sample.
struct Config2Run {
    Trajectory resonator;  // [alpha_s, beta] over the full window
    TimeSeries drive;      // s(t) = 2 g_q x(t)
    Trajectory rho;        // post-transient density matrices (dim 9)
    TimeSeries lambda11;
};

Config2Run simulate_config2(const Config2ClassicalParams& cp, const Config2QuantumParams& qp,
                            const IntegrationPlan& plan);

}  // namespace qorbit
