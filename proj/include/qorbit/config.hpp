#pragma once

#include <map>
#include <set>
#include <optional>
#include <string>
#include <vector>

#include "qorbit/classical.hpp"
#include "qorbit/lindblad.hpp"
#include "qorbit/moments.hpp"

namespace qorbit {

enum class Configuration { config1, config2, classical_only };
enum class RateConvention { angular, ordinary };
enum class DetuningSign { flipped, literal };

/// Raw scenario file contents: caption-style ratios plus run/embedding blocks.
/// Keys and units follow the published parameter tables; see the bundled
/// presets. Times in the run/embedding blocks are nanoseconds.
struct ScenarioConfig {
    std::string name = "scenario";
    Configuration configuration = Configuration::config1;
    RateConvention rate_convention = RateConvention::angular;
    DetuningSign detuning_sign = DetuningSign::flipped;

    // [classical], configuration I: ratios to Omega_c unless noted
    double delta_c = 0.0, gamma_c = 0.0, g_c = 0.0, epsilon_c = 0.0, Gamma_c = 0.0;
    double Omega_c_over_2pi = 0.0;           // GHz
    double delta_1 = 0.0, gamma_1 = 0.0;     // ratios to Omega_q
    double epsilon_1 = 0.0;                  // ratio to Omega_c

    // [quantum], configuration I: ratios to Omega_q unless noted
    double delta_q = 0.0, gamma_q = 0.0, g_1 = 0.0, G_q = 0.0;
    double Gamma_q = 0.0;                    // GHz (bare rate; see rate_convention)
    double Omega_q_over_2pi = 0.0;           // GHz
    double T = 0.0;                          // kelvin

    // [classical], configuration II: ratios to Omega
    double delta_s = 0.0, gamma_s = 0.0, epsilon_s = 0.0, Gamma = 0.0, g_s = 0.0;
    double Omega_over_2pi = 0.0;             // GHz

    // [quantum], configuration II: ratios to Omega
    double epsilon_q = 0.0, g_q = 0.0;       // (delta_q, gamma_q shared above)

    // [run] (ns except tolerances)
    double t_end = 0.0, dt_out = 0.0;
    double transient = -1.0;                 // < 0: default 20% of t_end
    double tolerance = 1e-9;                 // relative
    double atol = 1e-12;
    std::string filter_mode = "auto";        // auto | full | adiabatic

    // [embedding]
    double tau_ns = -1.0;                    // < 0: suggest from the series
    int m = 4;
};

/// Parse / validate a scenario file (key = value lines inside [sections]).
/// Throws ConfigError with the offending field path.
ScenarioConfig parse_config(const std::string& text, const std::string& name);
ScenarioConfig load_config_file(const std::string& path);

/// Canonical round-trip form: parse(emit(c)) resolves to an identical scenario.
std::string emit_config(const ScenarioConfig& c);

/// Bundled presets (fig3a, fig3b, fig3c, fig5).
const std::map<std::string, std::string>& preset_texts();
bool is_preset(const std::string& name);
ScenarioConfig load_preset(const std::string& name);

// ---- resolution to dimensionless model parameters ---------------------------

/// Reference angular frequency (rad/ns) of one dimensionless rate unit.
double omega_ref_radns(const ScenarioConfig& c);

Config1ClassicalParams resolve_config1_classical(const ScenarioConfig& c);
Config1QuantumParams resolve_config1_quantum(const ScenarioConfig& c);
Config2ClassicalParams resolve_config2_classical(const ScenarioConfig& c);
Config2QuantumParams resolve_config2_quantum(const ScenarioConfig& c);
IntegrationPlan resolve_plan(const ScenarioConfig& c);
FilterMode resolve_filter_mode(const ScenarioConfig& c);

}  // namespace qorbit
