// qorbit: simulate classical-to-quantum chaos transfer in optomechanical
// models, reconstruct delay-embedded orbits, and certify chaos from the
// largest Lyapunov exponent.
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qorbit/runner.hpp"
#include "qorbit/version.hpp"

namespace {

using namespace qorbit;

ScenarioConfig load_scenario(const std::string& ref) {
    if (is_preset(ref)) return load_preset(ref);
    return load_config_file(ref);
}

void print_verdict(const CertifyResult& cert) {
    std::printf("verdict: %s  exponent: %.6g /ns  stderr: %.3g  r2: %.3f%s\n",
                to_string(cert.verdict), cert.estimate.exponent, cert.estimate.std_error,
                cert.estimate.r2, cert.estimate.low_confidence ? "  (low confidence)" : "");
}

int run_command(const std::string& scenario, const std::string& out_dir, bool svg) {
    const ScenarioConfig config = load_scenario(scenario);
    const RunArtifacts artifacts = run_scenario(config, out_dir, svg);
    std::printf("wrote %s\n", artifacts.series_csv.c_str());
    std::printf("wrote %s\n", artifacts.orbit_csv.c_str());
    std::printf("wrote %s\n", artifacts.verdict_json.c_str());
    if (!artifacts.orbit_svg.empty()) std::printf("wrote %s\n", artifacts.orbit_svg.c_str());
    print_verdict(artifacts.certification);
    return 0;
}

int sweep_command(const std::string& scenario, const std::string& param, const std::string& grid,
                  const std::string& out_dir, int workers) {
    const ScenarioConfig config = load_scenario(scenario);
    const auto result = run_sweep(config, param, parse_grid(grid), out_dir, workers);
    std::printf("wrote %s\n", result.table_csv.c_str());
    for (const auto& row : result.rows) {
        if (row.failed)
            std::printf("%12.6g  failed: %s\n", row.value, row.error.c_str());
        else
            std::printf("%12.6g  %-12s lambda=%.6g /ns\n", row.value, to_string(row.verdict),
                        row.estimate.exponent);
    }
    return 0;
}

int embed_command(const std::string& series_path, double tau, int m, const std::string& out_path) {
    const TimeSeries series = read_series_csv(series_path);
    const double tau_used = tau > 0.0 ? snap_delay(tau, series.dt) : suggest_delay(series);
    const EmbeddedOrbit orbit = embed(series, EmbeddingParams{tau_used, m});
    Provenance prov;
    prov.scenario_name = series_path;
    prov.notes.push_back("embedded with tau_ns=" + format_double(tau_used) +
                         " m=" + std::to_string(m));
    write_orbit_csv(out_path, orbit, prov);
    std::printf("wrote %s (%zu points, tau=%.6g ns)\n", out_path.c_str(), orbit.count(), tau_used);
    return 0;
}

int lle_command(const std::string& series_path, double tau, int m, int theiler, int fit_begin,
                int fit_end, const std::string& out_path) {
    const TimeSeries series = read_series_csv(series_path);
    const double tau_used = tau > 0.0 ? snap_delay(tau, series.dt) : suggest_delay(series);
    SeriesLLEOptions options;
    options.theiler = theiler;
    options.fit_begin = fit_begin;
    options.fit_end = fit_end;
    const auto cert = certify(series, EmbeddingParams{tau_used, m}, options);
    print_verdict(cert);
    if (!out_path.empty()) {
        Provenance prov;
        prov.scenario_name = series_path;
        write_verdict_json(out_path, cert.estimate, cert.verdict, tau_used, m, prov);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

int export_command(const std::string& orbit_path, const std::string& format,
                   const std::string& out_path) {
    const EmbeddedOrbit orbit = read_orbit_csv(orbit_path);
    Provenance prov;
    prov.scenario_name = orbit_path;
    if (format == "csv")
        write_orbit_csv(out_path, orbit, prov);
    else if (format == "svg-projection" || format == "svg")
        write_orbit_svg(out_path, orbit, prov);
    else
        throw UsageError("export: unknown format '" + format + "' (csv | svg)");
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(qorbit::kToolName) + " " + qorbit::kToolVersion +
                 " - classical-to-quantum chaos transfer toolkit"};
    app.require_subcommand(1);

    std::string scenario, out_dir = "out", series_path, orbit_path, out_path, grid, param;
    std::string format = "svg";
    bool svg = false;
    double tau = -1.0;
    int m = 4, workers = 0, theiler = -1, fit_begin = -1, fit_end = -1;

    auto* run = app.add_subcommand("run", "simulate a scenario and write its artifacts");
    run->add_option("config", scenario, "preset name (fig3a|fig3b|fig3c|fig5) or config path")
        ->required();
    run->add_option("--out", out_dir, "output directory (default: out)");
    run->add_flag("--svg", svg, "also write the orbit projection SVG");

    auto* sweep = app.add_subcommand("sweep", "rerun a scenario over a parameter grid");
    sweep->add_option("config", scenario, "preset name or config path")->required();
    sweep->add_option("--param", param, "parameter to vary (caption name)")->required();
    sweep->add_option("--grid", grid, "a,b,c or log:lo:hi:n")->required();
    sweep->add_option("--out", out_dir, "output directory (default: out)");
    sweep->add_option("--workers", workers, "worker threads (default: hardware)");

    auto* embed_cmd = app.add_subcommand("embed", "delay-embed a series CSV into an orbit CSV");
    embed_cmd->add_option("series", series_path, "series CSV (t_ns,value)")->required();
    embed_cmd->add_option("--tau", tau, "delay in ns (default: suggest)");
    embed_cmd->add_option("--m", m, "embedding dimension (default 4)");
    embed_cmd->add_option("--out", out_path, "output orbit CSV")->required();

    auto* lle = app.add_subcommand("lle", "estimate the largest Lyapunov exponent of a series");
    lle->add_option("series", series_path, "series CSV (t_ns,value)")->required();
    lle->add_option("--tau", tau, "delay in ns (default: suggest)");
    lle->add_option("--m", m, "embedding dimension (default 4)");
    lle->add_option("--theiler", theiler, "Theiler window in samples (default: mean period)");
    lle->add_option("--fit-begin", fit_begin, "divergence-curve fit start (samples)");
    lle->add_option("--fit-end", fit_end, "divergence-curve fit end (samples)");
    lle->add_option("--out", out_path, "also write a verdict JSON here");

    auto* exp = app.add_subcommand("export", "re-emit an orbit CSV as csv or svg");
    exp->add_option("orbit", orbit_path, "orbit CSV")->required();
    exp->add_option("--format", format, "csv | svg (default svg)");
    exp->add_option("--out", out_path, "output file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(scenario, out_dir, svg);
        if (sweep->parsed()) return sweep_command(scenario, param, grid, out_dir, workers);
        if (embed_cmd->parsed()) return embed_command(series_path, tau, m, out_path);
        if (lle->parsed())
            return lle_command(series_path, tau, m, theiler, fit_begin, fit_end, out_path);
        if (exp->parsed()) return export_command(orbit_path, format, out_path);
    } catch (const qorbit::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const qorbit::UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const qorbit::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
