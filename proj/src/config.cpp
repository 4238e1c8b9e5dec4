#include "qorbit/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qorbit {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

using Section = std::map<std::string, std::string>;
using Tree = std::map<std::string, Section>;

Tree parse_tree(const std::string& text, const std::string& name) {
    Tree tree;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(name + ":" + std::to_string(lineno), "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(name + ":" + std::to_string(lineno), "empty section name");
            tree[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(name + ":" + std::to_string(lineno), "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError(name + ":" + std::to_string(lineno), "key outside any [section]");
        if (key.empty() || value.empty())
            throw ConfigError(section + "." + key, "empty key or value");
        if (!tree[section].emplace(key, value).second)
            throw ConfigError(section + "." + key, "duplicate key");
    }
    return tree;
}

class Extractor {
public:
    Extractor(Tree tree, std::string file) : tree_(std::move(tree)), file_(std::move(file)) {}

    bool has(const std::string& section, const std::string& key) const {
        const auto s = tree_.find(section);
        return s != tree_.end() && s->second.count(key) > 0;
    }

    std::string take_string(const std::string& section, const std::string& key) {
        auto s = tree_.find(section);
        if (s == tree_.end() || !s->second.count(key))
            throw ConfigError(section + "." + key, "missing required key");
        consumed_.insert(section + "\n" + key);
        return s->second.at(key);
    }

    std::string take_string_or(const std::string& section, const std::string& key,
                               const std::string& fallback) {
        if (!has(section, key)) return fallback;
        return take_string(section, key);
    }

    double take_number(const std::string& section, const std::string& key) {
        return to_number(section, key, take_string(section, key));
    }

    double take_number_or(const std::string& section, const std::string& key, double fallback) {
        if (!has(section, key)) return fallback;
        return take_number(section, key);
    }

    void require_section(const std::string& section) const {
        if (!tree_.count(section)) throw ConfigError("[" + section + "]", "missing section");
    }

    void finish() const {
        static const char* known_sections[] = {"scenario", "classical", "quantum", "run",
                                               "embedding"};
        for (const auto& [section, kv] : tree_) {
            if (std::find_if(std::begin(known_sections), std::end(known_sections),
                             [&](const char* s) { return section == s; }) ==
                std::end(known_sections))
                throw ConfigError("[" + section + "]", "unknown section");
            for (const auto& [key, value] : kv)
                if (!consumed_.count(section + "\n" + key))
                    throw ConfigError(section + "." + key,
                                      "unknown key for this configuration");
        }
    }

private:
    double to_number(const std::string& section, const std::string& key,
                     const std::string& text) const {
        const char* begin = text.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end != begin + text.size() || !std::isfinite(v))
            throw ConfigError(section + "." + key, "not a finite number: '" + text + "'");
        return v;
    }

    Tree tree_;
    std::string file_;
    std::set<std::string> consumed_;
};

bool classical_block_is_config2(const Extractor& ex) { return ex.has("classical", "delta_s"); }

void read_config1_blocks(Extractor& ex, ScenarioConfig& c) {
    c.delta_c = ex.take_number("classical", "delta_c");
    c.gamma_c = ex.take_number("classical", "gamma_c");
    c.g_c = ex.take_number("classical", "g_c");
    c.epsilon_c = ex.take_number("classical", "epsilon_c");
    c.Gamma_c = ex.take_number("classical", "Gamma_c");
    c.Omega_c_over_2pi = ex.take_number("classical", "Omega_c_over_2pi");
    c.delta_1 = ex.take_number("classical", "delta_1");
    c.gamma_1 = ex.take_number("classical", "gamma_1");
    c.epsilon_1 = ex.take_number_or("classical", "epsilon_1", 0.0);

    c.delta_q = ex.take_number("quantum", "delta_q");
    c.gamma_q = ex.take_number("quantum", "gamma_q");
    c.g_1 = ex.take_number("quantum", "g_1");
    c.G_q = ex.take_number("quantum", "G_q");
    c.Gamma_q = ex.take_number("quantum", "Gamma_q");
    c.Omega_q_over_2pi = ex.take_number("quantum", "Omega_q_over_2pi");
    c.T = ex.take_number("quantum", "T");

    if (c.Omega_c_over_2pi <= 0.0)
        throw ConfigError("classical.Omega_c_over_2pi", "must be positive");
    if (c.Omega_q_over_2pi <= 0.0)
        throw ConfigError("quantum.Omega_q_over_2pi", "must be positive");
    if (c.gamma_c < 0.0 || c.Gamma_c < 0.0) throw ConfigError("classical", "negative damping rate");
    if (c.gamma_q < 0.0 || c.Gamma_q < 0.0) throw ConfigError("quantum", "negative damping rate");
    if (c.T < 0.0) throw ConfigError("quantum.T", "temperature must be nonnegative");
}

void read_config2_blocks(Extractor& ex, ScenarioConfig& c) {
    c.delta_s = ex.take_number("classical", "delta_s");
    c.gamma_s = ex.take_number("classical", "gamma_s");
    c.epsilon_s = ex.take_number("classical", "epsilon_s");
    c.Gamma = ex.take_number("classical", "Gamma");
    c.g_s = ex.take_number("classical", "g_s");
    c.Omega_over_2pi = ex.take_number("classical", "Omega_over_2pi");

    c.delta_q = ex.take_number("quantum", "delta_q");
    c.gamma_q = ex.take_number("quantum", "gamma_q");
    c.epsilon_q = ex.take_number("quantum", "epsilon_q");
    c.g_q = ex.take_number("quantum", "g_q");

    if (c.Omega_over_2pi <= 0.0) throw ConfigError("classical.Omega_over_2pi", "must be positive");
    if (c.gamma_s < 0.0 || c.Gamma < 0.0) throw ConfigError("classical", "negative damping rate");
    if (c.gamma_q < 0.0) throw ConfigError("quantum.gamma_q", "negative damping rate");
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& name) {
    Extractor ex(parse_tree(text, name), name);
    ScenarioConfig c;
    c.name = name;

    ex.require_section("scenario");
    const std::string conf = ex.take_string("scenario", "configuration");
    if (conf == "config1")
        c.configuration = Configuration::config1;
    else if (conf == "config2")
        c.configuration = Configuration::config2;
    else if (conf == "classical-only")
        c.configuration = Configuration::classical_only;
    else
        throw ConfigError("scenario.configuration",
                          "expected config1 | config2 | classical-only, got '" + conf + "'");

    const std::string rc = ex.take_string_or("scenario", "rate_convention", "angular");
    if (rc == "angular")
        c.rate_convention = RateConvention::angular;
    else if (rc == "ordinary")
        c.rate_convention = RateConvention::ordinary;
    else
        throw ConfigError("scenario.rate_convention", "expected angular | ordinary");

    const std::string ds = ex.take_string_or("scenario", "detuning_sign", "flipped");
    if (ds == "flipped")
        c.detuning_sign = DetuningSign::flipped;
    else if (ds == "literal")
        c.detuning_sign = DetuningSign::literal;
    else
        throw ConfigError("scenario.detuning_sign", "expected flipped | literal");

    ex.require_section("classical");
    ex.require_section("run");

    const bool family2 = classical_block_is_config2(ex);
    if (c.configuration == Configuration::config1 && family2)
        throw ConfigError("classical.delta_s", "configuration config1 uses the delta_c family");
    if (c.configuration == Configuration::config2 && !family2)
        throw ConfigError("classical.delta_c", "configuration config2 uses the delta_s family");
    if (family2)
        read_config2_blocks(ex, c);
    else
        read_config1_blocks(ex, c);

    c.t_end = ex.take_number("run", "t_end");
    c.dt_out = ex.take_number("run", "dt_out");
    c.transient = ex.take_number_or("run", "transient", -1.0);
    c.tolerance = ex.take_number_or("run", "tolerance", 1e-9);
    c.atol = ex.take_number_or("run", "atol", 1e-12);
    c.filter_mode = ex.take_string_or("run", "filter_mode", "auto");
    if (c.filter_mode != "auto" && c.filter_mode != "full" && c.filter_mode != "adiabatic")
        throw ConfigError("run.filter_mode", "expected auto | full | adiabatic");
    if (!(c.t_end > 0.0)) throw ConfigError("run.t_end", "must be positive (ns)");
    if (!(c.dt_out > 0.0)) throw ConfigError("run.dt_out", "must be positive (ns)");
    if (c.transient >= c.t_end) throw ConfigError("run.transient", "consumes the whole run");
    if (!(c.tolerance > 0.0) || !(c.atol > 0.0))
        throw ConfigError("run.tolerance", "tolerances must be positive");

    c.tau_ns = ex.take_number_or("embedding", "tau_ns", -1.0);
    const double m = ex.take_number_or("embedding", "m", 4.0);
    if (m < 2.0 || m != std::floor(m)) throw ConfigError("embedding.m", "must be an integer >= 2");
    c.m = static_cast<int>(m);

    ex.finish();
    return c;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string base = path;
    const auto slash = base.find_last_of('/');
    if (slash != std::string::npos) base = base.substr(slash + 1);
    const auto dot = base.rfind(".cfg");
    if (dot != std::string::npos) base = base.substr(0, dot);
    return parse_config(buf.str(), base);
}

namespace {

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string emit_config(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "[scenario]\n";
    out << "configuration = "
        << (c.configuration == Configuration::config1
                ? "config1"
                : c.configuration == Configuration::config2 ? "config2" : "classical-only")
        << "\n";
    out << "rate_convention = "
        << (c.rate_convention == RateConvention::angular ? "angular" : "ordinary") << "\n";
    out << "detuning_sign = " << (c.detuning_sign == DetuningSign::flipped ? "flipped" : "literal")
        << "\n";

    const bool family2 = c.configuration == Configuration::config2 ||
                         (c.configuration == Configuration::classical_only && c.Omega_over_2pi > 0.0);
    out << "\n[classical]\n";
    if (family2) {
        out << "delta_s = " << fmt(c.delta_s) << "\n";
        out << "gamma_s = " << fmt(c.gamma_s) << "\n";
        out << "epsilon_s = " << fmt(c.epsilon_s) << "\n";
        out << "Gamma = " << fmt(c.Gamma) << "\n";
        out << "g_s = " << fmt(c.g_s) << "\n";
        out << "Omega_over_2pi = " << fmt(c.Omega_over_2pi) << "\n";
    } else {
        out << "delta_c = " << fmt(c.delta_c) << "\n";
        out << "gamma_c = " << fmt(c.gamma_c) << "\n";
        out << "g_c = " << fmt(c.g_c) << "\n";
        out << "epsilon_c = " << fmt(c.epsilon_c) << "\n";
        out << "Gamma_c = " << fmt(c.Gamma_c) << "\n";
        out << "Omega_c_over_2pi = " << fmt(c.Omega_c_over_2pi) << "\n";
        out << "delta_1 = " << fmt(c.delta_1) << "\n";
        out << "gamma_1 = " << fmt(c.gamma_1) << "\n";
        out << "epsilon_1 = " << fmt(c.epsilon_1) << "\n";
    }
    out << "\n[quantum]\n";
    if (family2) {
        out << "delta_q = " << fmt(c.delta_q) << "\n";
        out << "gamma_q = " << fmt(c.gamma_q) << "\n";
        out << "epsilon_q = " << fmt(c.epsilon_q) << "\n";
        out << "g_q = " << fmt(c.g_q) << "\n";
    } else {
        out << "delta_q = " << fmt(c.delta_q) << "\n";
        out << "gamma_q = " << fmt(c.gamma_q) << "\n";
        out << "g_1 = " << fmt(c.g_1) << "\n";
        out << "G_q = " << fmt(c.G_q) << "\n";
        out << "Gamma_q = " << fmt(c.Gamma_q) << "\n";
        out << "Omega_q_over_2pi = " << fmt(c.Omega_q_over_2pi) << "\n";
        out << "T = " << fmt(c.T) << "\n";
    }
    out << "\n[run]\n";
    out << "t_end = " << fmt(c.t_end) << "\n";
    out << "dt_out = " << fmt(c.dt_out) << "\n";
    if (c.transient >= 0.0) out << "transient = " << fmt(c.transient) << "\n";
    out << "tolerance = " << fmt(c.tolerance) << "\n";
    out << "atol = " << fmt(c.atol) << "\n";
    out << "filter_mode = " << c.filter_mode << "\n";
    out << "\n[embedding]\n";
    if (c.tau_ns >= 0.0) out << "tau_ns = " << fmt(c.tau_ns) << "\n";
    out << "m = " << c.m << "\n";
    return out.str();
}

double omega_ref_radns(const ScenarioConfig& c) {
    const bool family2 = c.configuration == Configuration::config2 ||
                         (c.configuration == Configuration::classical_only && c.Omega_over_2pi > 0.0);
    const double over_2pi = family2 ? c.Omega_over_2pi : c.Omega_c_over_2pi;
    if (!(over_2pi > 0.0)) throw ConfigError("Omega_over_2pi", "reference frequency unresolved");
    return 2.0 * M_PI * over_2pi;
}

namespace {
double detuning_factor(const ScenarioConfig& c) {
    return c.detuning_sign == DetuningSign::flipped ? -1.0 : 1.0;
}
}

Config1ClassicalParams resolve_config1_classical(const ScenarioConfig& c) {
    if (c.Omega_q_over_2pi <= 0.0 || c.Omega_c_over_2pi <= 0.0)
        throw ConfigError("classical", "configuration-I frequencies unresolved");
    const double sgn = detuning_factor(c);
    const double wq = c.Omega_q_over_2pi / c.Omega_c_over_2pi;  // Omega_q in chain units
    Config1ClassicalParams p;
    p.delta_c = sgn * c.delta_c;
    p.gamma_c = c.gamma_c;
    p.g_c = c.g_c;
    p.epsilon_c = c.epsilon_c;
    p.Gamma_c = c.Gamma_c;
    p.Omega_c = 1.0;
    p.delta_1 = sgn * c.delta_1 * wq;
    p.gamma_1 = c.gamma_1 * wq;
    p.epsilon_1 = c.epsilon_1;
    return p;
}

Config1QuantumParams resolve_config1_quantum(const ScenarioConfig& c) {
    const double sgn = detuning_factor(c);
    const double wq = c.Omega_q_over_2pi / c.Omega_c_over_2pi;
    const double omega_ref = omega_ref_radns(c);
    const double rate_factor = c.rate_convention == RateConvention::angular ? 1.0 : 2.0 * M_PI;
    Config1QuantumParams p;
    p.delta_q = sgn * c.delta_q * wq;
    p.gamma_q = c.gamma_q * wq;
    p.Omega_q = wq;
    p.Gamma_q = c.Gamma_q * rate_factor / omega_ref;  // GHz -> rad/ns -> dimensionless
    p.g_1 = c.g_1 * wq;
    p.G_q = c.G_q * wq;
    p.temperature_K = c.T;
    p.omega_ref_radns = omega_ref;
    return p;
}

Config2ClassicalParams resolve_config2_classical(const ScenarioConfig& c) {
    const double sgn = detuning_factor(c);
    Config2ClassicalParams p;
    p.delta_s = sgn * c.delta_s;
    p.gamma_s = c.gamma_s;
    p.epsilon_s = c.epsilon_s;
    p.Omega = 1.0;
    p.Gamma = c.Gamma;
    p.g_s = c.g_s;
    return p;
}

Config2QuantumParams resolve_config2_quantum(const ScenarioConfig& c) {
    const double sgn = detuning_factor(c);
    Config2QuantumParams p;
    p.delta_q = sgn * c.delta_q;
    p.gamma_q = c.gamma_q;
    p.epsilon_q = c.epsilon_q;
    p.g_q = c.g_q;
    return p;
}

IntegrationPlan resolve_plan(const ScenarioConfig& c) {
    const double omega_ref = omega_ref_radns(c);
    IntegrationPlan plan;
    plan.t_start = 0.0;
    plan.t_end = c.t_end * omega_ref;
    plan.dt_out = c.dt_out * omega_ref;
    plan.transient = (c.transient >= 0.0 ? c.transient : 0.2 * c.t_end) * omega_ref;
    plan.rtol = c.tolerance;
    plan.atol = c.atol;
    return plan;
}

FilterMode resolve_filter_mode(const ScenarioConfig& c) {
    if (c.filter_mode == "full") return FilterMode::full;
    if (c.filter_mode == "adiabatic") return FilterMode::adiabatic;
    return FilterMode::automatic;
}

}  // namespace qorbit
