#include "qorbit/artifacts.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qorbit/errors.hpp"
#include "qorbit/version.hpp"

namespace qorbit {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string header_body(const Provenance& prov) {
    std::ostringstream out;
    out << kToolName << " " << kToolVersion << "\n";
    out << "scenario: " << prov.scenario_name << "\n";
    std::istringstream echo(prov.config_echo);
    std::string line;
    while (std::getline(echo, line))
        if (!line.empty()) out << line << "\n";
    for (const auto& note : prov.notes) out << "note: " << note << "\n";
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open output file: " + path);
    out << content;
    if (!out) throw UsageError("failed writing output file: " + path);
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::string Provenance::header() const {
    std::istringstream body(header_body(*this));
    std::ostringstream out;
    std::string line;
    while (std::getline(body, line)) out << "# " << line << "\n";
    return out.str();
}

std::string Provenance::xml_comment() const {
    return "<!--\n" + header_body(*this) + "-->\n";
}

void write_series_csv(const std::string& path, const TimeSeries& series_ns,
                      const Provenance& prov) {
    std::ostringstream out;
    out << prov.header() << "t_ns,value\n";
    for (std::size_t k = 0; k < series_ns.size(); ++k)
        out << format_double(series_ns.time_at(k)) << "," << format_double(series_ns.values[k])
            << "\n";
    write_file(path, out.str());
}

void write_orbit_csv(const std::string& path, const EmbeddedOrbit& orbit, const Provenance& prov) {
    if (orbit.count() == 0) throw EmptyInputError("write_orbit_csv: empty orbit");
    std::ostringstream out;
    out << prov.header();
    for (int c = 0; c < orbit.m; ++c) out << (c ? "," : "") << "z" << (c + 1);
    out << "\n";
    for (std::size_t i = 0; i < orbit.count(); ++i) {
        const auto p = orbit.point(i);
        for (int c = 0; c < orbit.m; ++c)
            out << (c ? "," : "") << format_double(p[static_cast<std::size_t>(c)]);
        out << "\n";
    }
    write_file(path, out.str());
}

void write_verdict_json(const std::string& path, const LLEEstimate& est, Verdict verdict,
                        double tau_ns, int m, const Provenance& prov) {
    std::ostringstream out;
    out << prov.header();
    out << "{\n";
    out << "  \"exponent\": " << format_double(est.exponent) << ",\n";
    out << "  \"stderr\": " << format_double(est.std_error) << ",\n";
    out << "  \"r2\": " << format_double(est.r2) << ",\n";
    out << "  \"verdict\": \"" << to_string(verdict) << "\",\n";
    out << "  \"method\": \""
        << (est.method == LLEMethod::series_based ? "series-based" : "variational") << "\",\n";
    out << "  \"fit_window\": [" << est.fit_window.begin << ", " << est.fit_window.end << "],\n";
    out << "  \"low_confidence\": " << (est.low_confidence ? "true" : "false") << ",\n";
    out << "  \"tau_ns\": " << format_double(tau_ns) << ",\n";
    out << "  \"m\": " << m << ",\n";
    out << "  \"scenario\": \"" << json_escape(prov.scenario_name) << "\"\n";
    out << "}\n";
    write_file(path, out.str());
}

namespace {

// Five-stop perceptual ramp (dark blue -> teal -> green -> yellow).
void colormap(double t, int& r, int& g, int& b) {
    static const double stops[5][3] = {{0.267, 0.005, 0.329},
                                       {0.229, 0.322, 0.546},
                                       {0.128, 0.567, 0.551},
                                       {0.369, 0.789, 0.383},
                                       {0.993, 0.906, 0.144}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int i = std::min(static_cast<int>(t), 3);
    const double w = t - i;
    r = static_cast<int>(std::lround(255.0 * (stops[i][0] * (1 - w) + stops[i + 1][0] * w)));
    g = static_cast<int>(std::lround(255.0 * (stops[i][1] * (1 - w) + stops[i + 1][1] * w)));
    b = static_cast<int>(std::lround(255.0 * (stops[i][2] * (1 - w) + stops[i + 1][2] * w)));
}

std::string svg_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

void write_orbit_svg(const std::string& path, const EmbeddedOrbit& orbit, const Provenance& prov) {
    if (orbit.count() == 0) throw EmptyInputError("write_orbit_svg: empty orbit");
    if (orbit.m != 4) throw UsageError("write_orbit_svg: svg projection requires m = 4");

    const double W = 720, H = 560;
    const double ml = 70, mr = 110, mt = 30, mb = 60;  // margins
    const double pw = W - ml - mr, ph = H - mt - mb;

    double xmin = orbit.point(0)[0], xmax = xmin;
    double ymin = orbit.point(0)[1], ymax = ymin;
    double cmin = orbit.point(0)[3], cmax = cmin;
    for (std::size_t i = 0; i < orbit.count(); ++i) {
        const auto p = orbit.point(i);
        xmin = std::min(xmin, p[0]);
        xmax = std::max(xmax, p[0]);
        ymin = std::min(ymin, p[1]);
        ymax = std::max(ymax, p[1]);
        cmin = std::min(cmin, p[3]);
        cmax = std::max(cmax, p[3]);
    }
    if (xmax - xmin <= 0.0) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax - ymin <= 0.0) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double cspan = (cmax - cmin > 0.0) ? cmax - cmin : 1.0;
    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << prov.xml_comment();
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

    // axes frame + ticks
    out << "<rect x=\"" << svg_num(ml) << "\" y=\"" << svg_num(mt) << "\" width=\"" << svg_num(pw)
        << "\" height=\"" << svg_num(ph)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        out << "<line x1=\"" << svg_num(sx(fx)) << "\" y1=\"" << svg_num(mt + ph) << "\" x2=\""
            << svg_num(sx(fx)) << "\" y2=\"" << svg_num(mt + ph + 5)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << svg_num(sx(fx)) << "\" y=\"" << svg_num(mt + ph + 20)
            << "\" font-size=\"11\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n";
        out << "<line x1=\"" << svg_num(ml - 5) << "\" y1=\"" << svg_num(sy(fy)) << "\" x2=\""
            << svg_num(ml) << "\" y2=\"" << svg_num(sy(fy)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << svg_num(ml - 8) << "\" y=\"" << svg_num(sy(fy) + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << tick_label(fy) << "</text>\n";
    }
    out << "<text x=\"" << svg_num(ml + pw / 2) << "\" y=\"" << svg_num(H - 15)
        << "\" font-size=\"14\" text-anchor=\"middle\">z1</text>\n";
    out << "<text x=\"18\" y=\"" << svg_num(mt + ph / 2)
        << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << svg_num(mt + ph / 2) << ")\">z2</text>\n";

    // points
    for (std::size_t i = 0; i < orbit.count(); ++i) {
        const auto p = orbit.point(i);
        int r, g, b;
        colormap((p[3] - cmin) / cspan, r, g, b);
        out << "<circle cx=\"" << svg_num(sx(p[0])) << "\" cy=\"" << svg_num(sy(p[1]))
            << "\" r=\"1.4\" fill=\"rgb(" << r << "," << g << "," << b
            << ")\" fill-opacity=\"0.75\"/>\n";
    }

    // color scale for z4
    const double bx = W - mr + 30, bw = 16, by = mt, bh = ph;
    for (int i = 0; i < 64; ++i) {
        int r, g, b;
        colormap(1.0 - static_cast<double>(i) / 63.0, r, g, b);
        out << "<rect x=\"" << svg_num(bx) << "\" y=\"" << svg_num(by + bh * i / 64.0)
            << "\" width=\"" << svg_num(bw) << "\" height=\"" << svg_num(bh / 64.0 + 0.5)
            << "\" fill=\"rgb(" << r << "," << g << "," << b << ")\"/>\n";
    }
    out << "<rect x=\"" << svg_num(bx) << "\" y=\"" << svg_num(by) << "\" width=\"" << svg_num(bw)
        << "\" height=\"" << svg_num(bh)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
    out << "<text x=\"" << svg_num(bx + bw + 6) << "\" y=\"" << svg_num(by + 10)
        << "\" font-size=\"11\">" << tick_label(cmax) << "</text>\n";
    out << "<text x=\"" << svg_num(bx + bw + 6) << "\" y=\"" << svg_num(by + bh)
        << "\" font-size=\"11\">" << tick_label(cmin) << "</text>\n";
    out << "<text x=\"" << svg_num(bx + bw / 2) << "\" y=\"" << svg_num(by - 8)
        << "\" font-size=\"13\" text-anchor=\"middle\">z4</text>\n";
    out << "</svg>\n";
    write_file(path, out.str());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    return cells;
}

double parse_cell(const std::string& cell, const std::string& path, int lineno) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + cell.size())
        throw ConfigError(path + ":" + std::to_string(lineno), "not a number: '" + cell + "'");
    return v;
}

}  // namespace

TimeSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open series file");
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    std::vector<double> times, values;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;  // column header row
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != 2)
            throw ConfigError(path + ":" + std::to_string(lineno), "expected t_ns,value");
        times.push_back(parse_cell(cells[0], path, lineno));
        values.push_back(parse_cell(cells[1], path, lineno));
    }
    if (values.size() < 2) throw ConfigError(path, "series has fewer than two samples");
    TimeSeries s;
    s.t0 = times.front();
    s.dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    for (std::size_t k = 1; k + 1 < times.size(); ++k) {
        const double expected = s.t0 + static_cast<double>(k) * s.dt;
        if (std::abs(times[k] - expected) > 1e-6 * std::max(1.0, std::abs(expected)))
            throw ConfigError(path, "time stamps are not uniformly spaced");
    }
    s.values = std::move(values);
    return s;
}

EmbeddedOrbit read_orbit_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open orbit file");
    std::string line;
    int lineno = 0;
    int m = 0;
    std::vector<double> coords;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        const auto cells = split_csv_line(line);
        if (m == 0) {
            m = static_cast<int>(cells.size());
            if (m < 2) throw ConfigError(path, "orbit needs at least two columns");
            continue;  // header row (z1,z2,...)
        }
        if (static_cast<int>(cells.size()) != m)
            throw ConfigError(path + ":" + std::to_string(lineno), "ragged row");
        for (const auto& cell : cells) coords.push_back(parse_cell(cell, path, lineno));
    }
    if (coords.empty()) throw EmptyInputError(path + ": orbit file has no data rows");
    EmbeddedOrbit orbit;
    orbit.m = m;
    orbit.coords = std::move(coords);
    return orbit;
}

}  // namespace qorbit
