#include "qorbit/lindblad.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "qorbit/numerics.hpp"

namespace qorbit {

namespace {
constexpr Complex kI(0.0, 1.0);
}

void Config2QuantumParams::validate() const {
    if (gamma_q < 0.0) throw UsageError("Config2QuantumParams: gamma_q must be nonnegative");
    if (epsilon_q < 0.0) throw UsageError("Config2QuantumParams: epsilon_q must be nonnegative");
}

DensityMatrix DensityMatrix::vacuum() {
    DensityMatrix rho;
    rho(0, 0) = 1.0;
    return rho;
}

DensityMatrix DensityMatrix::from_state(const State& y) {
    DensityMatrix rho;
    for (int i = 0; i < 9; ++i) rho.lam[i] = y[i];
    return rho;
}

State DensityMatrix::to_state() const { return State(lam.begin(), lam.end()); }

double DensityMatrix::trace_deviation() const {
    const Complex tr = lam[0] + lam[4] + lam[8];
    return std::abs(tr - Complex(1.0));
}

double DensityMatrix::hermiticity_residue() const {
    double r = 0.0;
    for (int j = 0; j < 3; ++j)
        for (int k = j; k < 3; ++k)
            r = std::max(r, std::abs((*this)(j, k) - std::conj((*this)(k, j))));
    return r;
}

double DensityMatrix::min_eigenvalue() const {
    const std::vector<Complex> a(lam.begin(), lam.end());
    return detail::hermitian_eigenvalues(a, 3).front();
}

void DensityMatrix::validate(double trace_tol, double herm_tol, double eig_tol) const {
    if (trace_deviation() > trace_tol)
        throw PhysicalityError("DensityMatrix: trace deviates by " +
                               std::to_string(trace_deviation()));
    if (hermiticity_residue() > herm_tol)
        throw PhysicalityError("DensityMatrix: Hermiticity residue " +
                               std::to_string(hermiticity_residue()));
    const double eig = min_eigenvalue();
    if (eig < -eig_tol)
        throw PhysicalityError("DensityMatrix: negative eigenvalue " + std::to_string(eig));
}

namespace detail {

VectorField lindblad_field_n(const Config2QuantumParams& p, int levels) {
    p.validate();
    if (levels < 2) throw UsageError("lindblad_field_n: need at least two Fock levels");
    const int n = levels;

    // sqrt(k) ladder factors; a[j][k] = sqrt(k) delta_{j,k-1}.
    std::vector<double> sq(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) sq[static_cast<std::size_t>(k)] = std::sqrt(static_cast<double>(k));

    return VectorField{
        n * n, [p, n, sq](double, const State& y, double s, State& d) {
            auto rho = [&](int j, int k) -> Complex { return y[j * n + k]; };
            const double eps = p.epsilon_q;
            const double det = p.delta_q + s;

            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < n; ++k) {
                    // i [rho, H] with H = det * N + eps (a + a+):
                    // N part: i det (k - j) rho_jk.
                    Complex v = kI * det * static_cast<double>(k - j) * rho(j, k);
                    // eps part: i (rho H - H rho) over the tridiagonal drive.
                    Complex rH(0.0, 0.0), Hr(0.0, 0.0);
                    if (k + 1 < n) rH += rho(j, k + 1) * sq[k + 1];
                    if (k - 1 >= 0) rH += rho(j, k - 1) * sq[k];
                    if (j + 1 < n) Hr += sq[j + 1] * rho(j + 1, k);
                    if (j - 1 >= 0) Hr += sq[j] * rho(j - 1, k);
                    v += kI * eps * (rH - Hr);
                    // gamma D[a]: a rho a+ - {a+a, rho}/2.
                    Complex diss(0.0, 0.0);
                    if (j + 1 < n && k + 1 < n) diss += sq[j + 1] * sq[k + 1] * rho(j + 1, k + 1);
                    diss -= 0.5 * static_cast<double>(j + k) * rho(j, k);
                    v += p.gamma_q * diss;
                    d[j * n + k] = v;
                }
            }
        }};
}

}  // namespace detail

VectorField lindblad_field(const Config2QuantumParams& p) { return detail::lindblad_field_n(p, 3); }

double mean_photon(const DensityMatrix& rho) {
    return rho(1, 1).real() + 2.0 * rho(2, 2).real();
}

double mean_photon_residue(const DensityMatrix& rho) { return 2.0 * std::abs(rho(2, 2)); }

Config2Run simulate_config2(const Config2ClassicalParams& cp, const Config2QuantumParams& qp,
                            const IntegrationPlan& plan) {
    cp.validate();
    qp.validate();

    IntegrationPlan classical_plan = plan;
    classical_plan.transient = 0.0;
    classical_plan.t_end = plan.t_end + plan.dt_out;

    Config2Run run;
    run.resonator = run_config2_resonator(cp, classical_plan);
    run.drive = extract_drive(run.resonator, ModelTag::config2, DriveKind::displacement_signal,
                              qp.g_q);

    run.rho = integrate(lindblad_field(qp), DensityMatrix::vacuum().to_state(), plan, &run.drive);
    for (const auto& y : run.rho.states) DensityMatrix::from_state(y).validate();
    run.lambda11 = run.rho.series([](const State& y) { return y[4].real(); });
    return run;
}

}  // namespace qorbit
