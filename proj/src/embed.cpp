#include "qorbit/embed.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qorbit/errors.hpp"

namespace qorbit {

double snap_delay(double tau, double dt) {
    if (!(tau > 0.0)) throw UsageError("snap_delay: tau must be positive");
    if (!(dt > 0.0)) throw UsageError("snap_delay: dt must be positive");
    const double k = std::round(tau / dt);
    if (k < 1.0) throw AlignmentError("snap_delay: tau " + std::to_string(tau) +
                                      " is below one sample (" + std::to_string(dt) + ")");
    return k * dt;
}

EmbeddedOrbit embed(const TimeSeries& series, const EmbeddingParams& params) {
    if (params.m < 2) throw UsageError("embed: embedding dimension must be at least 2");
    if (!(params.tau > 0.0)) throw UsageError("embed: tau must be positive");

    const double ratio = params.tau / series.dt;
    const double k = std::round(ratio);
    if (k < 1.0 || std::abs(ratio - k) > 1e-9 * std::max(1.0, ratio))
        throw AlignmentError("embed: tau = " + std::to_string(params.tau) +
                             " is not an integer multiple of dt = " + std::to_string(series.dt));
    const auto lag = static_cast<std::size_t>(k);

    const std::size_t n = series.size();
    const std::size_t span = static_cast<std::size_t>(params.m - 1) * lag;
    if (n <= span)
        throw LengthError("embed: series of length " + std::to_string(n) +
                          " too short for m=" + std::to_string(params.m) +
                          ", lag=" + std::to_string(lag));

    EmbeddedOrbit orbit;
    orbit.m = params.m;
    orbit.lag = lag;
    orbit.dt = series.dt;
    const std::size_t count = n - span;
    orbit.coords.resize(count * static_cast<std::size_t>(params.m));
    for (std::size_t i = 0; i < count; ++i)
        for (int c = 0; c < params.m; ++c)
            orbit.coords[i * static_cast<std::size_t>(params.m) + static_cast<std::size_t>(c)] =
                series.values[i + static_cast<std::size_t>(c) * lag];
    return orbit;
}

namespace {

// Equal-width histogram mutual information between s(k) and s(k+lag), in
// nats. Pairs are strided so long series cost a bounded amount per lag.
double lagged_mutual_information(const std::vector<double>& v, std::size_t lag, int bins,
                                 double lo, double width, std::size_t stride) {
    const std::size_t n = v.size() - lag;
    std::vector<double> px(static_cast<std::size_t>(bins), 0.0);
    std::vector<double> py(static_cast<std::size_t>(bins), 0.0);
    std::vector<double> pxy(static_cast<std::size_t>(bins * bins), 0.0);
    auto bin_of = [&](double x) {
        int b = static_cast<int>((x - lo) / width);
        return std::clamp(b, 0, bins - 1);
    };
    std::size_t count = 0;
    for (std::size_t k = 0; k < n; k += stride) ++count;
    const double w = 1.0 / static_cast<double>(count);
    for (std::size_t k = 0; k < n; k += stride) {
        const int bx = bin_of(v[k]);
        const int by = bin_of(v[k + lag]);
        px[static_cast<std::size_t>(bx)] += w;
        py[static_cast<std::size_t>(by)] += w;
        pxy[static_cast<std::size_t>(bx * bins + by)] += w;
    }
    double mi = 0.0;
    for (int bx = 0; bx < bins; ++bx)
        for (int by = 0; by < bins; ++by) {
            const double p = pxy[static_cast<std::size_t>(bx * bins + by)];
            if (p > 0.0)
                mi += p * std::log(p / (px[static_cast<std::size_t>(bx)] *
                                        py[static_cast<std::size_t>(by)]));
        }
    return std::max(mi, 0.0);
}

}  // namespace

double suggest_delay(const TimeSeries& series) {
    const std::size_t n = series.size();
    if (n < 100) throw LengthError("suggest_delay: need at least 100 samples");

    const double lo = series.min();
    const double hi = series.max();
    const double range = hi - lo;
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (range <= 1e-12 * std::max(scale, 1.0))
        throw DegenerateInputError("suggest_delay: constant series");

    const int bins = 16;
    const double width = range / bins * (1.0 + 1e-12);
    const std::size_t max_lag = std::min<std::size_t>(n / 4, 8192);
    const std::size_t stride = std::max<std::size_t>(1, n / 32768);

    std::vector<double> mi(max_lag + 1, 0.0);
    for (std::size_t lag = 1; lag <= max_lag; ++lag)
        mi[lag] = lagged_mutual_information(series.values, lag, bins, lo, width, stride);

    // Immediate decorrelation: MI(1) already at the scan's noise floor.
    std::vector<double> sorted(mi.begin() + 1, mi.end());
    std::sort(sorted.begin(), sorted.end());
    const double floor = sorted[sorted.size() / 2];
    if (mi[1] <= 1.2 * floor + 1e-12) return series.dt;

    // First minimum, robust against histogram jitter: smooth, then take the
    // first lag that minimizes its +-w neighborhood.
    const std::size_t w = std::max<std::size_t>(1, std::min<std::size_t>(5, max_lag / 5));
    std::vector<double> smooth(mi.size(), 0.0);
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        double acc = 0.0;
        std::size_t cnt = 0;
        const std::size_t j0 = lag > w ? lag - w : 1;
        const std::size_t j1 = std::min(lag + w, max_lag);
        for (std::size_t j = j0; j <= j1; ++j) {
            acc += mi[j];
            ++cnt;
        }
        smooth[lag] = acc / static_cast<double>(cnt);
    }
    for (std::size_t lag = 1 + w; lag + w <= max_lag; ++lag) {
        bool is_min = true;
        for (std::size_t j = lag - w; j <= lag + w && is_min; ++j)
            if (smooth[j] < smooth[lag]) is_min = false;
        if (is_min) return static_cast<double>(lag) * series.dt;
    }

    // No interior minimum: first zero crossing of the autocorrelation.
    const double mean = series.mean();
    double c0 = 0.0;
    for (double v : series.values) c0 += (v - mean) * (v - mean);
    if (c0 <= 0.0) throw DegenerateInputError("suggest_delay: zero-variance series");
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        double c = 0.0;
        for (std::size_t k = 0; k + lag < n; k += stride)
            c += (series.values[k] - mean) * (series.values[k + lag] - mean);
        if (c <= 0.0) return static_cast<double>(lag) * series.dt;
    }
    return static_cast<double>(max_lag) * series.dt;
}

}  // namespace qorbit
