#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qorbit/runner.hpp"

using namespace qorbit;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int data_rows(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int rows = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        ++rows;
    }
    return rows;
}

ScenarioConfig tiny_config2() {
    ScenarioConfig c = load_preset("fig5");
    c.name = "tiny";
    c.t_end = 400.0;
    c.dt_out = 0.2;
    c.transient = 80.0;
    c.tau_ns = 4.0;
    return c;
}

const std::string out_root = "test_io_out";

}  // namespace

TEST_CASE("presets parse, validate, and resolve") {
    for (const auto& name : {"fig3a", "fig3b", "fig3c", "fig5"}) {
        CHECK(is_preset(name));
        const ScenarioConfig c = load_preset(name);
        CHECK(c.name == name);
        if (std::string(name) == "fig5") {
            CHECK(c.configuration == Configuration::config2);
            const auto p = resolve_config2_classical(c);
            CHECK(p.delta_s == doctest::Approx(1.0));  // caption -1, flipped
            CHECK(p.epsilon_s == doctest::Approx(4.33));
            const auto q = resolve_config2_quantum(c);
            CHECK(q.delta_q == doctest::Approx(-1.0));
            CHECK(q.epsilon_q == doctest::Approx(0.01));
            CHECK(q.weak_driving());
        } else {
            CHECK(c.configuration == Configuration::config1);
            const auto p = resolve_config1_classical(c);
            CHECK(p.delta_c == doctest::Approx(1.0));
            CHECK(p.delta_1 == doctest::Approx(-1e5));  // 1e4 x Omega_q, flipped
            CHECK(p.gamma_1 == doctest::Approx(60.0));
            const auto q = resolve_config1_quantum(c);
            CHECK(q.Omega_q == doctest::Approx(10.0));
            CHECK(q.delta_q == doctest::Approx(20.0));
            CHECK(q.omega_ref_radns == doctest::Approx(2.0 * M_PI * 0.01));
        }
    }
    // Gamma_q: 5 GHz, angular convention -> 5 rad/ns -> / Omega_c.
    const auto q3c = resolve_config1_quantum(load_preset("fig3c"));
    CHECK(q3c.Gamma_q == doctest::Approx(5.0 / (2.0 * M_PI * 0.01)));
    ScenarioConfig ordinary = load_preset("fig3c");
    ordinary.rate_convention = RateConvention::ordinary;
    CHECK(resolve_config1_quantum(ordinary).Gamma_q ==
          doctest::Approx(2.0 * M_PI * 5.0 / (2.0 * M_PI * 0.01)));
}

TEST_CASE("config echo re-parses to an identical scenario") {
    for (const auto& name : {"fig3c", "fig5"}) {
        const ScenarioConfig c = load_preset(name);
        const ScenarioConfig back = parse_config(emit_config(c), c.name);
        CHECK(emit_config(back) == emit_config(c));
        CHECK(back.configuration == c.configuration);
        CHECK(back.Gamma_q == c.Gamma_q);
        CHECK(back.t_end == c.t_end);
        CHECK(back.tau_ns == c.tau_ns);
    }
}

TEST_CASE("schema violations carry the offending field path") {
    auto expect_error = [](const std::string& text, const std::string& path_fragment) {
        try {
            parse_config(text, "bad");
            FAIL("expected ConfigError for ", path_fragment);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(path_fragment) != std::string::npos);
        }
    };
    expect_error("[scenario]\nconfiguration = config3\n", "scenario.configuration");
    expect_error("[scenario]\nconfiguration = config2\n[classical]\ndelta_s = 0\n", "run");
    const std::string fig5 = preset_texts().at("fig5");
    expect_error(fig5 + "\nbogus_key = 1\n", "bogus_key");
    expect_error(
        "[scenario]\nconfiguration = config2\n[classical]\ndelta_c = 1\n[run]\nt_end = 1\ndt_out "
        "= 0.1\n",
        "classical.delta_c");

    std::string broken = fig5;
    const auto pos = broken.find("gamma_s = 1");
    broken.replace(pos, 11, "gamma_s = x");
    expect_error(broken, "classical.gamma_s");
}

TEST_CASE("series CSV round-trips exactly") {
    fs::create_directories(out_root);
    TimeSeries s{12.5, 0.25, {}};
    std::mt19937 rng(42u);
    std::uniform_real_distribution<double> uni(-1e3, 1e3);
    for (int k = 0; k < 500; ++k) s.values.push_back(uni(rng));

    Provenance prov;
    prov.scenario_name = "roundtrip";
    prov.config_echo = "[scenario]\nconfiguration = config2\n";
    const std::string path = out_root + "/series.csv";
    write_series_csv(path, s, prov);

    const std::string text = slurp(path);
    CHECK(text.rfind("# qorbit", 0) == 0);  // provenance first
    CHECK(data_rows(text) == 500);

    const TimeSeries back = read_series_csv(path);
    REQUIRE(back.size() == s.size());
    CHECK(back.t0 == s.t0);
    for (std::size_t k = 0; k < s.size(); ++k) CHECK(back.values[k] == s.values[k]);
}

TEST_CASE("orbit CSV has the advertised row count and round-trips") {
    TimeSeries s{0.0, 1.0, {}};
    for (int k = 0; k < 1000; ++k) s.values.push_back(std::sin(2.0 * M_PI * k / 100.0));
    const auto orbit = embed(s, EmbeddingParams{10.0, 4});
    REQUIRE(orbit.count() == 970);

    Provenance prov;
    prov.scenario_name = "orbit";
    const std::string path = out_root + "/orbit.csv";
    write_orbit_csv(path, orbit, prov);
    const std::string text = slurp(path);
    CHECK(data_rows(text) == 970);
    CHECK(text.find("z1,z2,z3,z4") != std::string::npos);

    const auto back = read_orbit_csv(path);
    CHECK(back.m == 4);
    CHECK(back.count() == 970);
    CHECK(back.coords == orbit.coords);
}

TEST_CASE("verdict JSON carries the contract fields after the header") {
    Provenance prov;
    prov.scenario_name = "v";
    LLEEstimate est;
    est.exponent = 0.0123;
    est.std_error = 0.001;
    est.r2 = 0.93;
    est.fit_window = {3, 40};
    const std::string path = out_root + "/verdict.json";
    write_verdict_json(path, est, Verdict::chaotic, 0.3, 4, prov);
    const std::string text = slurp(path);
    CHECK(text.front() == '#');
    for (const char* field : {"\"exponent\"", "\"stderr\"", "\"r2\"", "\"verdict\"", "\"method\""})
        CHECK(text.find(field) != std::string::npos);
    CHECK(text.find("\"chaotic\"") != std::string::npos);
    CHECK(text.find("series-based") != std::string::npos);
}

TEST_CASE("svg projection renders every point; degenerate orbit collapses to one spot") {
    TimeSeries s{0.0, 1.0, {}};
    for (int k = 0; k < 300; ++k) s.values.push_back(std::sin(2.0 * M_PI * k / 60.0));
    const auto orbit = embed(s, EmbeddingParams{15.0, 4});
    Provenance prov;
    prov.scenario_name = "svg";
    const std::string path = out_root + "/orbit.svg";
    write_orbit_svg(path, orbit, prov);
    std::string text = slurp(path);
    CHECK(text.rfind("<?xml", 0) == 0);
    std::size_t circles = 0;
    for (std::size_t pos = 0; (pos = text.find("<circle", pos)) != std::string::npos; ++pos)
        ++circles;
    CHECK(circles == orbit.count());
    CHECK(text.find("z4") != std::string::npos);  // color scale annotated

    TimeSeries flat{0.0, 1.0, std::vector<double>(100, 3.0)};
    const auto constant = embed(flat, EmbeddingParams{5.0, 4});
    const std::string path2 = out_root + "/flat.svg";
    write_orbit_svg(path2, constant, prov);
    text = slurp(path2);
    // all markers at one location, one color
    const auto first_circle = text.find("<circle");
    const auto probe = text.substr(first_circle, text.find("/>", first_circle) - first_circle);
    std::size_t occurrences = 0;
    for (std::size_t pos = 0; (pos = text.find(probe, pos)) != std::string::npos; ++pos)
        ++occurrences;
    CHECK(occurrences == constant.count());

    EmbeddedOrbit empty;
    empty.m = 4;
    CHECK_THROWS_AS(write_orbit_svg(out_root + "/none.svg", empty, prov), EmptyInputError);
}

TEST_CASE("run_scenario writes deterministic artifacts with sane units") {
    const ScenarioConfig c = tiny_config2();
    const auto a = run_scenario(c, out_root + "/a", true);
    const auto b = run_scenario(c, out_root + "/b", true);

    CHECK(slurp(a.series_csv) == slurp(b.series_csv));
    CHECK(slurp(a.orbit_csv) == slurp(b.orbit_csv));
    CHECK(slurp(a.verdict_json) == slurp(b.verdict_json));
    CHECK(slurp(a.orbit_svg) == slurp(b.orbit_svg));

    // Unit sanity: stamps in ns match dimensionless time / (2 pi Omega_over_2pi).
    CHECK(a.series_ns.t0 == doctest::Approx(c.transient));
    CHECK(a.series_ns.dt == doctest::Approx(c.dt_out));
    const double omega_ref = omega_ref_radns(c);
    const IntegrationPlan plan = resolve_plan(c);
    CHECK(a.series_ns.t0 == doctest::Approx(plan.transient / omega_ref));
    CHECK(a.series_ns.time_at(a.series_ns.size() - 1) ==
          doctest::Approx(c.t_end).epsilon(1e-9));

    // Embedding bookkeeping: orbit rows = samples - (m-1) * (tau/dt).
    const std::size_t lag = static_cast<std::size_t>(std::llround(a.tau_ns / c.dt_out));
    CHECK(a.orbit.count() == a.series_ns.size() - 3 * lag);
}

TEST_CASE("sweep with a single grid value reproduces the run verdict") {
    const ScenarioConfig c = tiny_config2();
    const auto run = run_scenario(c, out_root + "/single");
    const auto sweep = run_sweep(c, "epsilon_q", {c.epsilon_q}, out_root + "/single");
    REQUIRE(sweep.rows.size() == 1);
    CHECK(!sweep.rows[0].failed);
    CHECK(sweep.rows[0].verdict == run.certification.verdict);
    CHECK(sweep.rows[0].estimate.exponent ==
          doctest::Approx(run.certification.estimate.exponent));
    const std::string table = slurp(sweep.table_csv);
    CHECK(data_rows(table) == 1);
    CHECK(table.find("value,exponent,stderr,r2,verdict") != std::string::npos);
}

TEST_CASE("sweep marks failing rows without aborting") {
    ScenarioConfig c = tiny_config2();
    const auto sweep =
        run_sweep(c, "gamma_s", {1.0, -5.0}, out_root + "/fail");  // negative rate fails
    REQUIRE(sweep.rows.size() == 2);
    CHECK(sweep.rows[0].failed);  // sorted by value: -5 first
    CHECK(!sweep.rows[1].failed);
    const std::string table = slurp(sweep.table_csv);
    CHECK(table.find("failed") != std::string::npos);
}

TEST_CASE("parse_grid understands lists and log grids") {
    const auto list = parse_grid("0.5,2,1");
    CHECK(list == std::vector<double>{0.5, 2.0, 1.0});
    const auto log = parse_grid("log:0.001:5:12");
    REQUIRE(log.size() == 12);
    CHECK(log.front() == doctest::Approx(0.001));
    CHECK(log.back() == doctest::Approx(5.0));
    CHECK(log[1] / log[0] == doctest::Approx(std::pow(5000.0, 1.0 / 11.0)));
    CHECK_THROWS_AS(parse_grid("log:5:1:3"), UsageError);
    CHECK_THROWS_AS(parse_grid(""), UsageError);
    CHECK_THROWS_AS(parse_grid("1,two,3"), UsageError);
}

TEST_CASE("on-disk preset files match the bundled texts") {
    for (const auto& [name, text] : preset_texts()) {
        const std::string path = "../presets/" + name + ".cfg";
        if (!fs::exists(path)) continue;  // run from an out-of-tree build dir
        CHECK(slurp(path) == text);
        const ScenarioConfig c = load_config_file(path);
        CHECK(emit_config(c) == emit_config(load_preset(name)));
    }
}

TEST_CASE("CLI exit codes: success, config error, usage error") {
    if (!fs::exists("qorbit")) return;  // tests launched away from the build dir
    fs::create_directories(out_root);
    const ScenarioConfig tiny = tiny_config2();
    {
        std::ofstream out(out_root + "/tiny.cfg");
        out << emit_config(tiny);
    }
    auto shell = [](const std::string& cmd) {
        const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    CHECK(shell("./qorbit run " + out_root + "/tiny.cfg --out " + out_root + "/cli") == 0);
    CHECK(shell("./qorbit run /nonexistent.cfg") == 2);
    {
        std::ofstream out(out_root + "/broken.cfg");
        out << "[scenario]\nconfiguration = config9\n";
    }
    CHECK(shell("./qorbit run " + out_root + "/broken.cfg") == 2);
    CHECK(shell("./qorbit sweep " + out_root + "/tiny.cfg --param nope --grid 1,2") == 2);
    CHECK(shell("./qorbit lle " + out_root + "/cli/tiny_series.csv --tau 4") == 0);
    CHECK(shell("./qorbit embed " + out_root + "/cli/tiny_series.csv --tau 4 --out " + out_root +
                "/cli/o.csv") == 0);
    CHECK(shell("./qorbit export " + out_root + "/cli/o.csv --format svg --out " + out_root +
                "/cli/o.svg") == 0);
}

TEST_CASE("sweeping the classical drive off and on flips the verdict") {
    // Without the drive everything decays and sigma_x settles on a constant;
    // at the published drive the chain is chaotic and the transfer is strong.
    const auto sweep = run_sweep(load_preset("fig3c"), "epsilon_c", {0.0, 433.0},
                                 out_root + "/eps");
    REQUIRE(sweep.rows.size() == 2);
    CHECK(!sweep.rows[0].failed);
    CHECK(sweep.rows[0].verdict == Verdict::non_chaotic);
    CHECK(!sweep.rows[1].failed);
    CHECK(sweep.rows[1].verdict == Verdict::chaotic);
}

TEST_CASE("strong cavity drives carry a truncation warning") {
    ScenarioConfig c = tiny_config2();
    c.epsilon_q = 0.5;  // far beyond 0.1 gamma_q
    const auto run = run_scenario(c, out_root + "/warn");
    bool warned = false;
    for (const auto& note : run.provenance.notes)
        if (note.find("weak-driving") != std::string::npos) warned = true;
    CHECK(warned);
}

TEST_CASE("unknown sweep parameters are rejected up front") {
    ScenarioConfig c = tiny_config2();
    CHECK_THROWS_AS(run_sweep(c, "not_a_param", {1.0}, out_root), ConfigError);
    set_config_param(c, "quantum.epsilon_q", 0.02);  // section-qualified accepted
    CHECK(c.epsilon_q == 0.02);
}
