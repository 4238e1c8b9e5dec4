#include "qorbit/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace qorbit::detail {

std::vector<double> hermitian_eigenvalues(const std::vector<Complex>& a_in, std::size_t n) {
    std::vector<Complex> a = a_in;
    auto at = [&](std::size_t i, std::size_t j) -> Complex& { return a[i * n + j]; };

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += std::norm(at(i, j));
        if (off < 1e-30) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double app = at(p, p).real();
                const double aqq = at(q, q).real();
                // Unitary 2x2 rotation annihilating (p,q): standard complex Jacobi.
                const double tau = (aqq - app) / (2.0 * std::abs(apq));
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const Complex phase = apq / std::abs(apq);
                const Complex s = t * c * phase;

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = at(k, p);
                    const Complex akq = at(k, q);
                    at(k, p) = c * akp - std::conj(s) * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = at(p, k);
                    const Complex aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = std::conj(s) * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i).real();
    std::sort(eig.begin(), eig.end());
    return eig;
}

void fft_radix2(std::vector<Complex>& data, int sign) {
    const std::size_t n = data.size();
    if (n < 2) return;
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const Complex wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex u = data[i + k];
                const Complex v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

double dominant_period_samples(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 8) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);

    std::size_t m = 1;
    while (m < n) m <<= 1;
    std::vector<Complex> buf(m, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        const double hann =
            0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n - 1)));
        buf[k] = Complex((values[k] - mean) * hann, 0.0);
    }
    fft_radix2(buf, -1);

    std::size_t best = 0;
    double best_power = 0.0;
    for (std::size_t k = 1; k <= m / 2; ++k) {
        const double p = std::norm(buf[k]);
        if (p > best_power) {
            best_power = p;
            best = k;
        }
    }
    if (best == 0 || best_power <= 0.0) return 0.0;
    return static_cast<double>(m) / static_cast<double>(best);
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

}  // namespace qorbit::detail
