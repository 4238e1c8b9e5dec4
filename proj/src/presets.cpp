#include "qorbit/config.hpp"

namespace qorbit {

namespace {

// Configuration-I chain + moment stage. Published parameter table, three
// mechanical damping rates. Gamma_c is 2.8e-3: the table's bare "2.8" leaves
// the mechanical mode overdamped and the chain settles on a fixed point; the
// e-3 scale matches the g_c = g_s/100, epsilon_c = 100 epsilon_s replica
// scaling between the two setups (see README, "Parameter conventions").
constexpr const char* kFig3Common = R"(
[scenario]
configuration = config1
rate_convention = angular
detuning_sign = flipped

[classical]
delta_c = -1
gamma_c = 1
g_c = 1e-3
epsilon_c = 433
Gamma_c = 2.8e-3
Omega_c_over_2pi = 0.01   # GHz
delta_1 = 1e4             # ratio to Omega_q
gamma_1 = 6               # ratio to Omega_q
epsilon_1 = 0

[quantum]
delta_q = -2
gamma_q = 1
g_1 = 2
G_q = 1e-4
Omega_q_over_2pi = 0.1    # GHz
T = 0.002                 # K
)";

constexpr const char* kFig3Run = R"(
[run]
t_end = 20000             # ns
dt_out = 0.075            # ns
transient = 12000         # ns
tolerance = 1e-9
atol = 1e-12
filter_mode = auto

[embedding]
tau_ns = 0.3
m = 4
)";

constexpr const char* kFig5 = R"(
[scenario]
configuration = config2
rate_convention = angular
detuning_sign = flipped

[classical]
delta_s = -1
gamma_s = 1
epsilon_s = 4.33
Gamma = 1e-3
g_s = 0.1
Omega_over_2pi = 0.1      # GHz

[quantum]
delta_q = 1
gamma_q = 1
epsilon_q = 0.01
g_q = 0.1

[run]
t_end = 30000             # ns
dt_out = 0.2              # ns
transient = 6000          # ns
tolerance = 1e-9
atol = 1e-12

[embedding]
tau_ns = 4
m = 4
)";

std::map<std::string, std::string> build_presets() {
    std::map<std::string, std::string> presets;
    auto fig3 = [](const char* gamma_q_line) {
        return std::string(kFig3Common) + gamma_q_line + kFig3Run;
    };
    presets["fig3a"] = fig3("Gamma_q = 0.001          # GHz (1 MHz)\n");
    presets["fig3b"] = fig3("Gamma_q = 0.05           # GHz (50 MHz)\n");
    presets["fig3c"] = fig3("Gamma_q = 5              # GHz\n");
    presets["fig5"] = kFig5;
    return presets;
}

}  // namespace

const std::map<std::string, std::string>& preset_texts() {
    static const std::map<std::string, std::string> presets = build_presets();
    return presets;
}

bool is_preset(const std::string& name) { return preset_texts().count(name) > 0; }

ScenarioConfig load_preset(const std::string& name) {
    const auto& presets = preset_texts();
    const auto it = presets.find(name);
    if (it == presets.end()) throw ConfigError(name, "unknown preset");
    return parse_config(it->second, name);
}

}  // namespace qorbit
