#pragma once

#include <string>
#include <vector>

#include "qorbit/embed.hpp"
#include "qorbit/lyapunov.hpp"
#include "qorbit/time_series.hpp"

namespace qorbit {

/// Header stamped on every output file: tool version plus the fully resolved
/// scenario, '#'-prefixed line by line. Deliberately carries no timestamps so
/// identical runs produce byte-identical files.
struct Provenance {
    std::string scenario_name;
    std::string config_echo;          // canonical emit_config() text
    std::vector<std::string> notes;   // resolution remarks (delay snapping, ...)

    std::string header() const;       // "# ..." lines, newline-terminated
    std::string xml_comment() const;  // the same block as an XML comment
};

void write_series_csv(const std::string& path, const TimeSeries& series_ns,
                      const Provenance& prov);
void write_orbit_csv(const std::string& path, const EmbeddedOrbit& orbit, const Provenance& prov);
void write_verdict_json(const std::string& path, const LLEEstimate& est, Verdict verdict,
                        double tau_ns, int m, const Provenance& prov);
/// 2-D scatter of (z1, z2) colored by z4 (requires m = 4); axes and color
/// scale annotated. Provenance rides as an XML comment.
void write_orbit_svg(const std::string& path, const EmbeddedOrbit& orbit, const Provenance& prov);

/// Readers skip '#' header lines. Throw ConfigError on malformed content.
TimeSeries read_series_csv(const std::string& path);
EmbeddedOrbit read_orbit_csv(const std::string& path);

/// Shortest round-trip decimal form used in all emitted files.
std::string format_double(double v);

}  // namespace qorbit
