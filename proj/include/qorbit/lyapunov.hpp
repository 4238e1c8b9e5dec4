#pragma once

#include "qorbit/embed.hpp"
#include "qorbit/ode.hpp"

namespace qorbit {

enum class LLEMethod { series_based, variational };

struct IndexRange {
    int begin = 0;
    int end = 0;  // half-open [begin, end)
    int size() const { return end - begin; }
};

/// Largest-Lyapunov-exponent estimate. `exponent` and `std_error` are per
/// unit time of the input series / plan.
struct LLEEstimate {
    double exponent = 0.0;
    double std_error = 0.0;
    double r2 = 0.0;          // of the linear (exponential-divergence) fit
    IndexRange fit_window;
    LLEMethod method = LLEMethod::series_based;
    bool low_confidence = false;
    // Scaling-regime diagnostics (series-based only): how well a ballistic
    // log(k) law explains the same window, and the divergence gained across it.
    double r2_ballistic = 0.0;
    double window_growth = 0.0;  // natural-log units
};

struct SeriesLLEOptions {
    int theiler = -1;     // exclusion window in samples; auto: one mean period
    int fit_begin = -1;   // divergence-curve offset range; auto per Lyapunov time
    int fit_end = -1;
    int max_offset = -1;  // divergence-curve length; auto
    int ref_stride = -1;  // reference subsampling; auto bounds the pair count
    int n_boot = 200;     // bootstrap replicates for the standard error
};

/// Nearest-neighbor divergence-curve estimator: for every reference point the
/// nearest neighbor outside the Theiler window, mean log-divergence versus
/// offset, least-squares slope over the fit window.
LLEEstimate lle_series(const TimeSeries& series, const EmbeddingParams& params,
                       const SeriesLLEOptions& options = {});

/// Variational oracle: renormalized tangent-vector growth along the flow, the
/// Jacobian applied by forward finite differences (step 1e-7 x state scale).
/// plan.dt_out is the renormalization interval; plan.transient is discarded.
LLEEstimate lle_variational(const VectorField& field, const State& y0,
                            const IntegrationPlan& plan);

enum class Verdict { chaotic, non_chaotic, inconclusive };

const char* to_string(Verdict v);

struct CertifyResult {
    Verdict verdict = Verdict::inconclusive;
    LLEEstimate estimate;
};

/// Chaotic iff the divergence curve exhibits a genuine exponential scaling
/// regime (linear-in-offset fit beats the ballistic log-law, >= 2 log-units of
/// growth, r2 >= 0.7) and the exponent clears both the 3x bootstrap-standard-
/// error bar and the slope-resolution floor of the fitted window. A curve
/// without such a regime certifies non-chaotic; a significant exponent with a
/// marginal regime stays inconclusive.
CertifyResult certify(const TimeSeries& series, const EmbeddingParams& params,
                      const SeriesLLEOptions& options = {});

}  // namespace qorbit
