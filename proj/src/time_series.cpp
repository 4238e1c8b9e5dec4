#include "qorbit/time_series.hpp"

#include <algorithm>
#include <numeric>

namespace qorbit {

double TimeSeries::min() const {
    if (values.empty()) throw EmptyInputError("TimeSeries::min on empty series");
    return *std::min_element(values.begin(), values.end());
}

double TimeSeries::max() const {
    if (values.empty()) throw EmptyInputError("TimeSeries::max on empty series");
    return *std::max_element(values.begin(), values.end());
}

double TimeSeries::mean() const {
    if (values.empty()) throw EmptyInputError("TimeSeries::mean on empty series");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double resample_drive(const TimeSeries& series, double t) {
    if (series.values.empty()) throw EmptyInputError("resample_drive: empty series");
    const double grace = 1e-9 * series.dt;  // forgive end-point roundoff
    if (t < series.t0 - grace || t > series.t_end() + grace)
        throw RangeError("resample_drive: t=" + std::to_string(t) + " outside [" +
                         std::to_string(series.t0) + ", " + std::to_string(series.t_end()) + "]");
    const double x = (t - series.t0) / series.dt;
    if (x <= 0.0) return series.values.front();
    const auto last = series.values.size() - 1;
    const auto i = static_cast<std::size_t>(x);
    if (i >= last) return series.values.back();
    const double w = x - static_cast<double>(i);
    return series.values[i] * (1.0 - w) + series.values[i + 1] * w;
}

}  // namespace qorbit
