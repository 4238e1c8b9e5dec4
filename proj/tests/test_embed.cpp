#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qorbit/embed.hpp"
#include "qorbit/numerics.hpp"

using namespace qorbit;

namespace {

TimeSeries sine_series(std::size_t n, double period_samples, double dt = 1.0) {
    TimeSeries s{0.0, dt, {}};
    for (std::size_t k = 0; k < n; ++k)
        s.values.push_back(std::sin(2.0 * M_PI * static_cast<double>(k) / period_samples));
    return s;
}

}  // namespace

TEST_CASE("quarter-period delay of a sinusoid lands on the unit circle") {
    const auto s = sine_series(1000, 100.0);
    const auto orbit = embed(s, EmbeddingParams{25.0, 2});
    REQUIRE(orbit.count() == 975);
    for (std::size_t i = 0; i < orbit.count(); ++i) {
        const auto p = orbit.point(i);
        const double r = std::hypot(p[0], p[1]);
        CHECK(std::abs(r - 1.0) < 1e-9);
    }
}

TEST_CASE("constant series embeds to identical points") {
    TimeSeries s{0.0, 1.0, std::vector<double>(300, 4.2)};
    const auto orbit = embed(s, EmbeddingParams{7.0, 4});
    for (std::size_t i = 0; i < orbit.count(); ++i)
        for (double c : orbit.point(i)) CHECK(c == 4.2);
}

TEST_CASE("point count follows the sliding-window formula") {
    const auto s = sine_series(1000, 30.0);
    const auto orbit = embed(s, EmbeddingParams{10.0, 4});
    CHECK(orbit.count() == 1000 - 3 * 10);
    CHECK(orbit.m == 4);
    CHECK(orbit.lag == 10);
}

TEST_CASE("embed rejects short series and misaligned delays") {
    const auto s = sine_series(50, 10.0);
    CHECK_THROWS_AS(embed(s, EmbeddingParams{20.0, 4}), LengthError);
    CHECK_THROWS_AS(embed(s, EmbeddingParams{2.5, 2}), AlignmentError);
    CHECK_THROWS_AS(embed(s, EmbeddingParams{-1.0, 2}), UsageError);
    CHECK_THROWS_AS(embed(s, EmbeddingParams{2.0, 1}), UsageError);
}

TEST_CASE("snap_delay reports the nearest sample multiple") {
    CHECK(snap_delay(0.3, 0.075) == doctest::Approx(0.3));
    CHECK(snap_delay(0.32, 0.075) == doctest::Approx(0.3));
    CHECK(snap_delay(1.0, 0.3) == doctest::Approx(0.9));
    CHECK_THROWS_AS(snap_delay(0.01, 0.3), AlignmentError);
}

TEST_CASE("periodic series: pairwise distances invariant under one-period shift") {
    const std::size_t period = 100;
    const auto s = sine_series(1200, static_cast<double>(period));
    const auto orbit = embed(s, EmbeddingParams{25.0, 3});
    std::mt19937 rng(5u);
    std::uniform_int_distribution<std::size_t> pick(0, orbit.count() - period - 1);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t i = pick(rng);
        const std::size_t j = pick(rng);
        auto d = [&](std::size_t a, std::size_t b) {
            double acc = 0.0;
            for (int c = 0; c < orbit.m; ++c) {
                const double diff = orbit.point(a)[c] - orbit.point(b)[c];
                acc += diff * diff;
            }
            return std::sqrt(acc);
        };
        CHECK(std::abs(d(i, j) - d(i + period, j + period)) < 1e-9);
    }
}

TEST_CASE("embedded sinusoid has numerical rank two") {
    const auto s = sine_series(4000, 250.0);
    const auto orbit = embed(s, EmbeddingParams{40.0, 4});

    // Singular values via the 4x4 Gram matrix of the centered cloud.
    const std::size_t n = orbit.count();
    double mean[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < n; ++i)
        for (int c = 0; c < 4; ++c) mean[c] += orbit.point(i)[c];
    for (auto& v : mean) v /= static_cast<double>(n);

    std::vector<detail::Complex> gram(16, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                gram[static_cast<std::size_t>(a * 4 + b)] +=
                    (orbit.point(i)[a] - mean[a]) * (orbit.point(i)[b] - mean[b]);

    auto eig = detail::hermitian_eigenvalues(gram, 4);
    std::vector<double> sv;
    for (double e : eig) sv.push_back(std::sqrt(std::max(e, 0.0)));
    std::sort(sv.rbegin(), sv.rend());
    CHECK(sv[2] < 1e-6 * sv[0]);
    CHECK(sv[1] > 1e-3 * sv[0]);  // genuinely two-dimensional
}

TEST_CASE("embedding is deterministic") {
    const auto s = sine_series(512, 37.0);
    const auto a = embed(s, EmbeddingParams{5.0, 4});
    const auto b = embed(s, EmbeddingParams{5.0, 4});
    CHECK(a.coords == b.coords);
}

TEST_CASE("suggested delay for a sinusoid sits near the quarter period") {
    const auto s = sine_series(2000, 100.0);
    const double tau = suggest_delay(s);
    CHECK(tau >= 20.0);
    CHECK(tau <= 30.0);
}

TEST_CASE("white noise decorrelates immediately") {
    std::mt19937 rng(12345u);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    TimeSeries s{0.0, 1.0, {}};
    for (int k = 0; k < 4096; ++k) s.values.push_back(uni(rng));
    CHECK(suggest_delay(s) == 1.0);
}

TEST_CASE("degenerate input is rejected") {
    TimeSeries s{0.0, 1.0, std::vector<double>(500, 1.0)};
    CHECK_THROWS_AS(suggest_delay(s), DegenerateInputError);
    TimeSeries tiny{0.0, 1.0, {1.0, 2.0, 3.0}};
    CHECK_THROWS_AS(suggest_delay(tiny), LengthError);
}

TEST_CASE("dominant period estimator matches the source period") {
    const auto s = sine_series(4096, 128.0);
    CHECK(detail::dominant_period_samples(s.values) == doctest::Approx(128.0).epsilon(0.02));
}
