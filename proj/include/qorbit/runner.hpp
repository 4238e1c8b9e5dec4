#pragma once

#include <string>
#include <vector>

#include "qorbit/artifacts.hpp"
#include "qorbit/config.hpp"

namespace qorbit {

/// What a `run` leaves behind, plus the in-memory results for callers.
struct RunArtifacts {
    std::string series_csv;
    std::string orbit_csv;
    std::string verdict_json;
    std::string orbit_svg;  // empty unless requested

    TimeSeries series_ns;
    EmbeddedOrbit orbit;
    CertifyResult certification;
    double tau_ns = 0.0;          // orbit/export delay (configured or suggested)
    double tau_certify_ns = 0.0;  // delay the verdict was computed at
    Provenance provenance;
};

/// Simulate, embed, certify, and write the artifact files into out_dir.
RunArtifacts run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                          bool write_svg = false);

struct SweepRow {
    double value = 0.0;
    bool failed = false;
    std::string error;
    LLEEstimate estimate;
    Verdict verdict = Verdict::inconclusive;
};

struct SweepResult {
    std::string parameter;
    std::vector<SweepRow> rows;  // sorted by value
    std::string table_csv;
};

/// Grid syntax: "a,b,c" or "log:lo:hi:n".
std::vector<double> parse_grid(const std::string& text);

/// Set a caption-named scenario parameter (optionally section-qualified).
void set_config_param(ScenarioConfig& config, const std::string& name, double value);

/// Independent runs per grid value, fanned out over `workers` threads; a
/// failing run marks its row without aborting the sweep.
SweepResult run_sweep(const ScenarioConfig& base, const std::string& parameter,
                      const std::vector<double>& grid, const std::string& out_dir,
                      int workers = 0);

}  // namespace qorbit
