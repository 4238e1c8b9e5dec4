#pragma once

#include <span>
#include <vector>

#include "qorbit/time_series.hpp"

namespace qorbit {

/// Delay-embedding parameters. `tau` is in the series' time units and must be
/// an integer multiple of its sampling interval (within 1e-9 relative).
struct EmbeddingParams {
    double tau = 1.0;
    int m = 4;
};

/// Point cloud of delay vectors (s(t_i), s(t_i + tau), ..., s(t_i + (m-1) tau)).
struct EmbeddedOrbit {
    int m = 0;
    std::size_t lag = 0;  // tau in samples
    double dt = 1.0;      // source sampling interval
    std::vector<double> coords;  // count() * m, row-major, time order

    std::size_t count() const { return m > 0 ? coords.size() / static_cast<std::size_t>(m) : 0; }
    std::span<const double> point(std::size_t i) const {
        return {coords.data() + i * static_cast<std::size_t>(m), static_cast<std::size_t>(m)};
    }
};

/// Sliding-window delay embedding. Throws LengthError (series too short) or
/// AlignmentError (tau not a sample multiple).
EmbeddedOrbit embed(const TimeSeries& series, const EmbeddingParams& params);

/// Snap tau to the nearest sample multiple of `dt`. Reports the snapped value;
/// throws AlignmentError if tau rounds to fewer than one sample.
double snap_delay(double tau, double dt);

/// Delay suggestion: first minimum of the lagged mutual-information histogram
/// estimate; falls back to the first autocorrelation zero when no minimum
/// exists below N/4. Returned in the series' time units.
double suggest_delay(const TimeSeries& series);

}  // namespace qorbit
