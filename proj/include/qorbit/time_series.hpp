#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "qorbit/errors.hpp"

namespace qorbit {

/// Uniformly sampled scalar signal. Sample k lives at t0 + k*dt.
struct TimeSeries {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    double t_end() const {
        return values.empty() ? t0 : time_at(values.size() - 1);
    }

    double min() const;
    double max() const;
    double mean() const;
};

/// Linear interpolation between bracketing samples; exact at sample points.
/// Throws RangeError outside [t0, t_end] (with a half-ulp-ish grace band).
double resample_drive(const TimeSeries& series, double t);

}  // namespace qorbit
