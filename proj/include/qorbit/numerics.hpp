#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qorbit::detail {

using Complex = std::complex<double>;

/// Eigenvalues of a Hermitian n x n matrix (row-major, n small), ascending.
/// Cyclic complex Jacobi; accurate to ~n * machine epsilon * ||A||.
std::vector<double> hermitian_eigenvalues(const std::vector<Complex>& a, std::size_t n);

/// In-place radix-2 FFT (size must be a power of two); sign=-1 forward.
void fft_radix2(std::vector<Complex>& data, int sign);

/// Dominant period of a series in samples: peak of the Hann-windowed,
/// mean-removed periodogram, DC excluded. Returns 0 for flat input.
double dominant_period_samples(const std::vector<double>& values);

/// Deterministic pairwise (tree) summation for order-independent reductions.
double pairwise_sum(const double* data, std::size_t n);

}  // namespace qorbit::detail
