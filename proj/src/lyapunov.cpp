#include "qorbit/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "qorbit/numerics.hpp"

namespace qorbit {

namespace {

struct LineFit {
    double slope = 0.0;
    double r2 = 0.0;
};

// Least-squares line through (x(k), y[k]) for k in [begin, end), where x is
// either the offset itself (exponential divergence) or log(offset) (ballistic).
LineFit fit_line_impl(const std::vector<double>& y, int begin, int end, bool log_abscissa) {
    const int n = end - begin;
    if (n < 2) return {};
    auto x = [&](int k) {
        return log_abscissa ? std::log(static_cast<double>(std::max(k, 1))) : static_cast<double>(k);
    };
    double kbar = 0.0, ybar = 0.0;
    for (int k = begin; k < end; ++k) {
        kbar += x(k);
        ybar += y[static_cast<std::size_t>(k)];
    }
    kbar /= n;
    ybar /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (int k = begin; k < end; ++k) {
        const double dx = x(k) - kbar;
        const double dy = y[static_cast<std::size_t>(k)] - ybar;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.r2 = (syy > 0.0 && sxx > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

LineFit fit_line(const std::vector<double>& y, int begin, int end) {
    return fit_line_impl(y, begin, end, false);
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::chaotic: return "chaotic";
        case Verdict::non_chaotic: return "non-chaotic";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

LLEEstimate lle_series(const TimeSeries& series, const EmbeddingParams& params,
                       const SeriesLLEOptions& options) {
    const EmbeddedOrbit orbit = embed(series, params);
    const std::size_t total = orbit.count();
    if (total < 500)
        throw InsufficientDataError("lle_series: only " + std::to_string(total) +
                                    " embedded points; need at least 500");
    const int m = orbit.m;
    const auto* pts = orbit.coords.data();
    auto dist2 = [&](std::size_t i, std::size_t j) {
        const double* a = pts + i * static_cast<std::size_t>(m);
        const double* b = pts + j * static_cast<std::size_t>(m);
        double s = 0.0;
        for (int c = 0; c < m; ++c) {
            const double d = a[c] - b[c];
            s += d * d;
        }
        return s;
    };

    // Theiler exclusion: one mean period by default, estimated from the
    // dominant spectral peak, capped to keep enough candidates.
    int theiler = options.theiler;
    if (theiler < 0) {
        const double period = detail::dominant_period_samples(series.values);
        theiler = static_cast<int>(std::clamp<double>(
            period, static_cast<double>(orbit.lag), static_cast<double>(total) / 10.0));
    }

    // Divergence-curve length: long enough to expose the scaling regime and
    // the saturation knee. Every pair is kept alive through the full curve,
    // so references and neighbors stop max_offset short of the end.
    int k_max = options.max_offset > 0
                    ? options.max_offset
                    : static_cast<int>(std::min<std::size_t>(
                          total / 5, std::max<std::size_t>(
                                         2500, 8 * static_cast<std::size_t>(theiler))));
    if (options.fit_end > 0) k_max = std::max(k_max, options.fit_end);
    if (static_cast<std::size_t>(k_max) + 500 >= total)
        throw InsufficientDataError("lle_series: series too short for the divergence-curve length");
    const std::size_t usable = total - static_cast<std::size_t>(k_max);

    const double range = series.max() - series.min();
    const double floor2 =
        std::max(std::pow(1e-13 * std::max(range, 1e-300), 2) * m, 1e-300);

    int stride = options.ref_stride;
    if (stride < 1) stride = std::max<int>(1, static_cast<int>(usable / 4000));

    // Pass 1: nearest neighbors (squared distances, Theiler-excluded).
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < usable; i += static_cast<std::size_t>(stride)) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = usable;
        for (std::size_t j = 0; j < usable; ++j) {
            const auto sep = (i > j) ? i - j : j - i;
            if (sep <= static_cast<std::size_t>(theiler)) continue;
            const double d2 = dist2(i, j);
            if (d2 >= floor2 && d2 < best) {
                best = d2;
                best_j = j;
            }
        }
        if (best_j < usable) pairs.emplace_back(i, best_j);
    }
    if (pairs.size() < 32)
        throw InsufficientDataError("lle_series: too few neighbor pairs (" +
                                    std::to_string(pairs.size()) + ")");

    // Pass 2: mean log-divergence curve and per-pair windowed slopes.
    std::vector<double> curve(static_cast<std::size_t>(k_max) + 1, 0.0);
    {
        std::vector<double> lg(static_cast<std::size_t>(k_max) + 1);
        for (const auto& [i, j] : pairs) {
            for (int k = 0; k <= k_max; ++k)
                lg[static_cast<std::size_t>(k)] =
                    0.5 * std::log(std::max(dist2(i + static_cast<std::size_t>(k),
                                                  j + static_cast<std::size_t>(k)),
                                            floor2));
            for (int k = 0; k <= k_max; ++k) curve[static_cast<std::size_t>(k)] += lg[static_cast<std::size_t>(k)];
        }
        const double inv = 1.0 / static_cast<double>(pairs.size());
        for (auto& v : curve) v *= inv;
    }

    // Fit window. The curve has three regimes: an initial relaxation of the
    // neighbor offset onto the expanding direction, the linear growth, and the
    // saturation plateau. Start past the relaxation (half an embedding
    // window), stop at 70% of the rise toward saturation, then shrink until
    // r2 >= 0.7 if curvature remains.
    int fit_begin = options.fit_begin >= 0
                        ? options.fit_begin
                        : std::min(std::max({2, static_cast<int>(orbit.lag),
                                             (m - 1) * static_cast<int>(orbit.lag) / 2}),
                                   k_max / 4);
    int fit_end;
    LineFit fit;
    if (options.fit_end > 0) {
        fit_end = std::min(options.fit_end, k_max);
        fit = fit_line(curve, fit_begin, fit_end + 1);
    } else {
        double saturation = curve[static_cast<std::size_t>(fit_begin)];
        for (int k = fit_begin; k <= k_max; ++k)
            saturation = std::max(saturation, curve[static_cast<std::size_t>(k)]);
        const double target =
            curve[static_cast<std::size_t>(fit_begin)] +
            0.7 * (saturation - curve[static_cast<std::size_t>(fit_begin)]);
        fit_end = k_max;
        for (int k = fit_begin + 1; k <= k_max; ++k) {
            if (curve[static_cast<std::size_t>(k)] >= target) {
                fit_end = k;
                break;
            }
        }
        fit_end = std::clamp(fit_end, std::min(fit_begin + 8, k_max), k_max);
        fit = fit_line(curve, fit_begin, fit_end + 1);
        while (fit.r2 < 0.7 && fit_end - fit_begin > 8) {
            fit_end = std::max(fit_begin + 8, fit_begin + (fit_end - fit_begin) * 3 / 4);
            fit = fit_line(curve, fit_begin, fit_end + 1);
        }
    }

    // Per-pair slopes projected with the window's least-squares weights; the
    // window slope is their mean, so the bootstrap of the mean gives its SE.
    const int wn = fit_end - fit_begin + 1;
    std::vector<double> weights(static_cast<std::size_t>(wn));
    {
        const double kbar = fit_begin + 0.5 * (wn - 1);
        double sxx = 0.0;
        for (int k = fit_begin; k <= fit_end; ++k) sxx += (k - kbar) * (k - kbar);
        for (int k = fit_begin; k <= fit_end; ++k)
            weights[static_cast<std::size_t>(k - fit_begin)] = (k - kbar) / sxx;
    }
    std::vector<double> pair_slopes;
    pair_slopes.reserve(pairs.size());
    for (const auto& [i, j] : pairs) {
        double s = 0.0;
        for (int k = fit_begin; k <= fit_end; ++k)
            s += weights[static_cast<std::size_t>(k - fit_begin)] * 0.5 *
                 std::log(std::max(dist2(i + static_cast<std::size_t>(k),
                                         j + static_cast<std::size_t>(k)),
                                   floor2));
        pair_slopes.push_back(s);
    }

    std::mt19937 rng(0x51e57a1u);
    std::uniform_int_distribution<std::size_t> pick(0, pair_slopes.size() - 1);
    std::vector<double> boot(static_cast<std::size_t>(std::max(options.n_boot, 16)));
    std::vector<double> scratch(pair_slopes.size());
    for (auto& b : boot) {
        for (auto& s : scratch) s = pair_slopes[pick(rng)];
        b = detail::pairwise_sum(scratch.data(), scratch.size()) /
            static_cast<double>(scratch.size());
    }
    double bmean = detail::pairwise_sum(boot.data(), boot.size()) / static_cast<double>(boot.size());
    double bvar = 0.0;
    for (double b : boot) bvar += (b - bmean) * (b - bmean);
    bvar /= static_cast<double>(boot.size() - 1);

    LLEEstimate est;
    est.exponent = fit.slope / series.dt;
    est.std_error = std::sqrt(bvar) / series.dt;
    est.r2 = fit.r2;
    est.fit_window = IndexRange{fit_begin, fit_end + 1};
    est.method = LLEMethod::series_based;
    est.low_confidence = fit.r2 < 0.5;
    est.r2_ballistic = fit_line_impl(curve, fit_begin, fit_end + 1, true).r2;
    est.window_growth = curve[static_cast<std::size_t>(fit_end)] -
                        curve[static_cast<std::size_t>(fit_begin)];
    return est;
}

LLEEstimate lle_variational(const VectorField& field, const State& y0,
                            const IntegrationPlan& plan) {
    plan.validate();
    const std::size_t n = y0.size();
    if (static_cast<int>(n) != field.dimension)
        throw UsageError("lle_variational: y0 dimension mismatch");

    // Combined base + tangent system; the tangent row applies the Jacobian by
    // forward finite differences of the base field.
    VectorField combined{
        2 * field.dimension, [&field, n](double t, const State& yv, double u, State& d) {
            const State y(yv.begin(), yv.begin() + static_cast<std::ptrdiff_t>(n));
            State f(n), yp(n), fp(n);
            field.rhs(t, y, u, f);
            double scale = 1.0;
            for (const auto& c : y)
                scale = std::max({scale, std::abs(c.real()), std::abs(c.imag())});
            const double delta = 1e-7 * scale;
            for (std::size_t i = 0; i < n; ++i) yp[i] = y[i] + delta * yv[n + i];
            field.rhs(t, yp, u, fp);
            for (std::size_t i = 0; i < n; ++i) {
                d[i] = f[i];
                d[n + i] = (fp[i] - f[i]) / delta;
            }
        }};

    State y = y0;
    if (plan.transient > 0.0)
        advance(field, y, plan.t_start, plan.t_start + plan.transient, plan.rtol, plan.atol,
                plan.max_step);

    // Generic initial tangent: equal weight in every component so no invariant
    // subspace (e.g. a slaved filter mode) can trap the growth estimate.
    State yv(2 * n, Complex(0.0));
    std::copy(y.begin(), y.end(), yv.begin());
    const double w = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) yv[n + i] = Complex(w, 0.0);

    const double t_begin = plan.t_start + plan.transient;
    const auto intervals =
        static_cast<std::size_t>(std::floor((plan.t_end - t_begin) / plan.dt_out + 1e-9));
    if (intervals < 4) throw UsageError("lle_variational: too few renormalization intervals");

    std::vector<double> log_growth;
    log_growth.reserve(intervals);
    std::vector<double> cumulative;
    cumulative.reserve(intervals);
    double acc = 0.0;
    for (std::size_t k = 0; k < intervals; ++k) {
        const double ta = t_begin + static_cast<double>(k) * plan.dt_out;
        const double tb = t_begin + static_cast<double>(k + 1) * plan.dt_out;
        advance(combined, yv, ta, tb, plan.rtol, plan.atol, plan.max_step);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm2 += std::norm(yv[n + i]);
        const double g = std::sqrt(norm2);
        if (!(g > 0.0) || !std::isfinite(g))
            throw DivergenceError("lle_variational: degenerate tangent at t=" + std::to_string(tb),
                                  tb);
        log_growth.push_back(std::log(g));
        acc += std::log(g);
        cumulative.push_back(acc);
        for (std::size_t i = 0; i < n; ++i) yv[n + i] /= g;
    }

    const double duration = static_cast<double>(intervals) * plan.dt_out;
    LLEEstimate est;
    est.exponent = acc / duration;
    est.method = LLEMethod::variational;
    est.fit_window = IndexRange{0, static_cast<int>(intervals)};

    // Block means give the standard error of the time average.
    const std::size_t n_blocks = std::min<std::size_t>(20, intervals / 2);
    const std::size_t block = intervals / n_blocks;
    std::vector<double> means;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        double s = 0.0;
        for (std::size_t k = b * block; k < (b + 1) * block; ++k) s += log_growth[k];
        means.push_back(s / (static_cast<double>(block) * plan.dt_out));
    }
    double mbar = 0.0;
    for (double v : means) mbar += v;
    mbar /= static_cast<double>(means.size());
    double var = 0.0;
    for (double v : means) var += (v - mbar) * (v - mbar);
    var /= static_cast<double>(means.size() - 1) * static_cast<double>(means.size());
    est.std_error = std::sqrt(var);

    est.r2 = fit_line(cumulative, 0, static_cast<int>(cumulative.size())).r2;
    est.low_confidence = false;
    return est;
}

CertifyResult certify(const TimeSeries& series, const EmbeddingParams& params,
                      const SeriesLLEOptions& options) {
    CertifyResult out;
    if (!series.empty()) {
        const double range = series.max() - series.min();
        const double scale = std::max({std::abs(series.min()), std::abs(series.max()), 1.0});
        if (range <= 1e-12 * scale) {
            // A numerically constant signal carries no divergence to fit.
            out.verdict = Verdict::non_chaotic;
            out.estimate.method = LLEMethod::series_based;
            out.estimate.r2 = 1.0;
            return out;
        }
    }
    out.estimate = lle_series(series, params, options);

    const double window_duration =
        std::max(out.estimate.fit_window.size() - 1, 1) * series.dt;
    // A slope is unresolvable when the divergence gained over the window is
    // within the noise floor; 0.1 log-units is the resolution bar.
    const double threshold = std::max(3.0 * out.estimate.std_error, 0.1 / window_duration);

    // Exponential scaling regime: the straight line in offset must explain
    // the window better than the ballistic log-law, across a real dynamic
    // range. Curves without such a regime (flat, drifting, or reinjection-
    // dominated) carry no evidence of a chaotic attractor.
    const bool scaling_regime = out.estimate.r2 >= 0.7 &&
                                out.estimate.r2 > out.estimate.r2_ballistic &&
                                out.estimate.window_growth >= 2.0;

    if (scaling_regime && out.estimate.exponent > threshold)
        out.verdict = Verdict::chaotic;
    else if (!scaling_regime || std::abs(out.estimate.exponent) <= threshold)
        out.verdict = Verdict::non_chaotic;
    else
        out.verdict = Verdict::inconclusive;
    return out;
}

}  // namespace qorbit
