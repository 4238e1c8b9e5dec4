#include "qorbit/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "qorbit/lindblad.hpp"
#include "qorbit/moments.hpp"

namespace qorbit {

namespace {

namespace fs = std::filesystem;

bool family2(const ScenarioConfig& c) {
    return c.configuration == Configuration::config2 ||
           (c.configuration == Configuration::classical_only && c.Omega_over_2pi > 0.0);
}

// The observable series on the exact nanosecond grid of the config (avoids
// dimensionless->ns roundoff in the recorded time stamps).
TimeSeries to_ns_grid(const ScenarioConfig& c, const std::vector<double>& values) {
    TimeSeries s;
    s.t0 = c.transient >= 0.0 ? c.transient : 0.2 * c.t_end;
    s.dt = c.dt_out;
    s.values = values;
    return s;
}

// Certification picks its own delay (first mutual-information minimum): the
// caption delays are for the exported orbit pictures and are far shorter than
// these signals' correlation times, where every neighbor pair separates
// ballistically and no exponential regime exists.
CertifyResult certify_auto_delay(const TimeSeries& series, double fallback_tau, int m,
                                 double* tau_used) {
    double tau = fallback_tau;
    try {
        tau = suggest_delay(series);
    } catch (const Error&) {
        // degenerate or short series: certify() handles it at the fallback
    }
    if (tau_used) *tau_used = tau;
    return certify(series, EmbeddingParams{tau, m});
}

TimeSeries simulate_observable(const ScenarioConfig& c) {
    const IntegrationPlan plan = resolve_plan(c);
    switch (c.configuration) {
        case Configuration::config1: {
            const auto run = simulate_config1(resolve_config1_classical(c),
                                              resolve_config1_quantum(c), plan,
                                              resolve_filter_mode(c));
            return to_ns_grid(c, run.sigma_x.values);
        }
        case Configuration::config2: {
            const auto run =
                simulate_config2(resolve_config2_classical(c), resolve_config2_quantum(c), plan);
            return to_ns_grid(c, run.lambda11.values);
        }
        case Configuration::classical_only: {
            if (family2(c)) {
                const auto traj = run_config2_resonator(resolve_config2_classical(c), plan);
                const auto drive = extract_drive(traj, ModelTag::config2,
                                                 DriveKind::displacement_signal, c.g_q);
                return to_ns_grid(c, drive.values);
            }
            const auto traj = run_config1_chain(resolve_config1_classical(c), plan,
                                                resolve_filter_mode(c));
            const auto drive = extract_drive(traj, ModelTag::config1, DriveKind::intensity);
            return to_ns_grid(c, drive.values);
        }
    }
    throw UsageError("simulate_observable: unknown configuration");
}

}  // namespace

RunArtifacts run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                          bool write_svg) {
    RunArtifacts out;
    out.provenance.scenario_name = config.name;
    out.provenance.config_echo = emit_config(config);
    if (config.configuration == Configuration::config2 &&
        !resolve_config2_quantum(config).weak_driving())
        out.provenance.notes.push_back(
            "warning: epsilon_q exceeds the weak-driving regime (0.1 gamma_q); "
            "the three-level truncation may be inadequate");

    out.series_ns = simulate_observable(config);

    if (config.tau_ns > 0.0) {
        out.tau_ns = snap_delay(config.tau_ns, out.series_ns.dt);
        if (std::abs(out.tau_ns - config.tau_ns) > 1e-12 * std::max(1.0, config.tau_ns))
            out.provenance.notes.push_back("tau_ns snapped from " + format_double(config.tau_ns) +
                                           " to " + format_double(out.tau_ns));
    } else {
        out.tau_ns = suggest_delay(out.series_ns);
        out.provenance.notes.push_back("tau_ns suggested: " + format_double(out.tau_ns));
    }

    out.orbit = embed(out.series_ns, EmbeddingParams{out.tau_ns, config.m});

    double tau_cert = out.tau_ns;
    out.certification = certify_auto_delay(out.series_ns, out.tau_ns, config.m, &tau_cert);
    out.tau_certify_ns = tau_cert;
    if (std::abs(tau_cert - out.tau_ns) > 1e-12)
        out.provenance.notes.push_back("certification delay: " + format_double(tau_cert) + " ns");

    fs::create_directories(out_dir);
    const std::string stem = (fs::path(out_dir) / config.name).string();
    out.series_csv = stem + "_series.csv";
    out.orbit_csv = stem + "_orbit.csv";
    out.verdict_json = stem + "_verdict.json";
    write_series_csv(out.series_csv, out.series_ns, out.provenance);
    write_orbit_csv(out.orbit_csv, out.orbit, out.provenance);
    write_verdict_json(out.verdict_json, out.certification.estimate, out.certification.verdict,
                       out.tau_certify_ns, config.m, out.provenance);
    if (write_svg) {
        out.orbit_svg = stem + "_orbit.svg";
        write_orbit_svg(out.orbit_svg, out.orbit, out.provenance);
    }
    return out;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.rfind("log:", 0) == 0) {
        double lo = 0.0, hi = 0.0;
        int n = 0;
        char extra = 0;
        if (std::sscanf(text.c_str(), "log:%lf:%lf:%d%c", &lo, &hi, &n, &extra) != 3 || n < 2 ||
            lo <= 0.0 || hi <= lo)
            throw UsageError("parse_grid: expected log:lo:hi:n with 0 < lo < hi, n >= 2");
        for (int k = 0; k < n; ++k)
            grid.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1)));
        return grid;
    }
    std::istringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        if (cell.empty()) continue;
        const char* begin = cell.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end != begin + cell.size())
            throw UsageError("parse_grid: not a number: '" + cell + "'");
        grid.push_back(v);
    }
    if (grid.empty()) throw UsageError("parse_grid: empty grid");
    return grid;
}

void set_config_param(ScenarioConfig& config, const std::string& name, double value) {
    static const std::map<std::string, double ScenarioConfig::*> fields = {
        {"delta_c", &ScenarioConfig::delta_c},
        {"gamma_c", &ScenarioConfig::gamma_c},
        {"g_c", &ScenarioConfig::g_c},
        {"epsilon_c", &ScenarioConfig::epsilon_c},
        {"Gamma_c", &ScenarioConfig::Gamma_c},
        {"Omega_c_over_2pi", &ScenarioConfig::Omega_c_over_2pi},
        {"delta_1", &ScenarioConfig::delta_1},
        {"gamma_1", &ScenarioConfig::gamma_1},
        {"epsilon_1", &ScenarioConfig::epsilon_1},
        {"delta_q", &ScenarioConfig::delta_q},
        {"gamma_q", &ScenarioConfig::gamma_q},
        {"g_1", &ScenarioConfig::g_1},
        {"G_q", &ScenarioConfig::G_q},
        {"Gamma_q", &ScenarioConfig::Gamma_q},
        {"Omega_q_over_2pi", &ScenarioConfig::Omega_q_over_2pi},
        {"T", &ScenarioConfig::T},
        {"delta_s", &ScenarioConfig::delta_s},
        {"gamma_s", &ScenarioConfig::gamma_s},
        {"epsilon_s", &ScenarioConfig::epsilon_s},
        {"Gamma", &ScenarioConfig::Gamma},
        {"g_s", &ScenarioConfig::g_s},
        {"Omega_over_2pi", &ScenarioConfig::Omega_over_2pi},
        {"epsilon_q", &ScenarioConfig::epsilon_q},
        {"g_q", &ScenarioConfig::g_q},
        {"t_end", &ScenarioConfig::t_end},
        {"dt_out", &ScenarioConfig::dt_out},
        {"transient", &ScenarioConfig::transient},
        {"tolerance", &ScenarioConfig::tolerance},
        {"tau_ns", &ScenarioConfig::tau_ns},
    };
    std::string key = name;
    const auto dot = key.find('.');
    if (dot != std::string::npos) key = key.substr(dot + 1);
    const auto it = fields.find(key);
    if (it == fields.end())
        throw ConfigError(name, "unknown sweep parameter");
    config.*(it->second) = value;
}

SweepResult run_sweep(const ScenarioConfig& base, const std::string& parameter,
                      const std::vector<double>& grid, const std::string& out_dir, int workers) {
    if (grid.empty()) throw UsageError("run_sweep: empty grid");
    {
        ScenarioConfig probe = base;  // validates the parameter name up front
        set_config_param(probe, parameter, grid.front());
    }

    SweepResult result;
    result.parameter = parameter;
    result.rows.resize(grid.size());

    if (workers <= 0)
        workers = static_cast<int>(std::min<std::size_t>(
            grid.size(), std::max(1u, std::thread::hardware_concurrency())));

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            SweepRow& row = result.rows[i];
            row.value = grid[i];
            try {
                ScenarioConfig c = base;
                set_config_param(c, parameter, grid[i]);
                c.name = base.name;  // row runs write no files of their own
                const TimeSeries series = simulate_observable(c);
                const double fallback =
                    c.tau_ns > 0.0 ? snap_delay(c.tau_ns, series.dt) : series.dt;
                const auto cert = certify_auto_delay(series, fallback, c.m, nullptr);
                row.estimate = cert.estimate;
                row.verdict = cert.verdict;
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
            }
        }
    };
    std::vector<std::future<void>> pool;
    for (int w = 0; w < workers; ++w) pool.push_back(std::async(std::launch::async, work));
    for (auto& f : pool) f.get();

    std::stable_sort(result.rows.begin(), result.rows.end(),
                     [](const SweepRow& a, const SweepRow& b) { return a.value < b.value; });

    Provenance prov;
    prov.scenario_name = base.name + " sweep over " + parameter;
    prov.config_echo = emit_config(base);
    std::ostringstream out;
    out << prov.header() << "value,exponent,stderr,r2,verdict\n";
    for (const auto& row : result.rows) {
        if (row.failed) {
            out << format_double(row.value) << ",,,,failed\n";
            continue;
        }
        out << format_double(row.value) << "," << format_double(row.estimate.exponent) << ","
            << format_double(row.estimate.std_error) << "," << format_double(row.estimate.r2)
            << "," << to_string(row.verdict) << "\n";
    }
    std::filesystem::create_directories(out_dir);
    result.table_csv =
        (std::filesystem::path(out_dir) / (base.name + "_sweep_" + parameter + ".csv")).string();
    std::ofstream file(result.table_csv, std::ios::binary);
    if (!file) throw UsageError("cannot open " + result.table_csv);
    file << out.str();
    return result;
}

}  // namespace qorbit
