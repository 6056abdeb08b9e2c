#include "poncelet/experiment.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

namespace poncelet {

using nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

const std::vector<std::string> kExperiments = {
    "find-family", "locus", "area-product", "degenerate", "quad-tests", "spherical-locus"};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void csv_complex(std::ostringstream& out, cplx v) {
    out << ',' << fmt(v.real()) << ',' << fmt(v.imag());
}

ordered_json json_point(const CPoint& p) {
    return ordered_json{{"x_re", p.x.real()}, {"x_im", p.x.imag()},
                        {"y_re", p.y.real()}, {"y_im", p.y.imag()}};
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (!cfg.entries.emplace(key, value).second)
            throw ConfigError("duplicate key: " + key);
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string ExperimentConfig::emit() const {
    std::ostringstream out;
    for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
    return out.str();
}

std::string ExperimentConfig::hash() const {
    uint64_t h = 14695981039346656037ull;
    for (char c : emit()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::string ExperimentConfig::get(const std::string& key) const {
    auto it = entries.find(key);
    if (it == entries.end()) throw ConfigError("missing key: " + key);
    return it->second;
}

std::string ExperimentConfig::get_or(const std::string& key, std::string fallback) const {
    auto it = entries.find(key);
    return it == entries.end() ? std::move(fallback) : it->second;
}

double ExperimentConfig::number(const std::string& key) const {
    const std::string v = get(key);
    try {
        size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key " + key + ": not a number: " + v);
    }
}

double ExperimentConfig::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

int ExperimentConfig::integer_or(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    double d = number(key);
    int i = static_cast<int>(d);
    if (i != d) throw ConfigError("key " + key + ": not an integer");
    return i;
}

Conic ExperimentConfig::conic(const std::string& prefix) const {
    std::string kind = get(prefix + ".kind");
    if (kind == "circle")
        return Conic::circle(number_or(prefix + ".cx", 0.0), number_or(prefix + ".cy", 0.0),
                             number(prefix + ".r"));
    if (kind == "ellipse") {
        Ellipse e{number(prefix + ".a"), number(prefix + ".b"),
                  number_or(prefix + ".cx", 0.0), number_or(prefix + ".cy", 0.0),
                  number_or(prefix + ".angle", 0.0)};
        return e.conic();
    }
    if (kind == "coeffs")
        return Conic::from_coeffs(number(prefix + ".A"), number(prefix + ".B"),
                                  number(prefix + ".C"), number(prefix + ".D"),
                                  number(prefix + ".E"), number(prefix + ".F"));
    throw ConfigError(prefix + ".kind: expected circle, ellipse or coeffs, got " + kind);
}

void validate_config(const ExperimentConfig& cfg) {
    std::string kind = cfg.get("experiment");
    if (std::find(kExperiments.begin(), kExperiments.end(), kind) == kExperiments.end())
        throw ConfigError("unknown experiment: " + kind);
    Conic outer = cfg.conic("outer");
    cfg.conic("inner");
    try {
        Ellipse::from_conic(outer);
    } catch (const GeometryError& e) {
        throw ConfigError(std::string("outer conic must be a real ellipse: ") + e.what());
    }
    int n = cfg.integer_or("n", 3), k = cfg.integer_or("k", 1);
    if (n < 3) throw ConfigError("n must be at least 3");
    if (k < 1 || std::gcd(n, k) != 1) throw ConfigError("need k >= 1 with gcd(n, k) = 1");
    if (cfg.integer_or("samples", 50) < 1) throw ConfigError("samples must be positive");
    if (kind == "locus") {
        std::string c = cfg.get_or("center", "ccm");
        if (c != "ccm" && c != "cm2") throw ConfigError("center: expected ccm or cm2");
    }
    if (kind == "quad-tests" && n != 4) throw ConfigError("quad-tests requires n = 4");
    if (kind == "spherical-locus" && n != 3)
        throw ConfigError("spherical-locus requires n = 3");
    // round-trip invariant of the canonical form
    if (ExperimentConfig::parse(cfg.emit()).entries != cfg.entries)
        throw ConfigError("config does not round-trip");
}

std::string emit_svg(const std::vector<Polygon>& polygons, const std::vector<Conic>& conics,
                     const std::vector<CPoint>& points) {
    struct XY {
        double x, y;
    };
    std::vector<std::vector<XY>> paths;   // polygons + conic polylines
    std::vector<XY> dots;

    for (const Polygon& p : polygons) {
        std::vector<XY> path;
        for (int i = 0; i < p.n(); ++i)
            path.push_back({p.at(i).x.real(), p.at(i).y.real()});
        if (!path.empty()) paths.push_back(std::move(path));
    }
    for (const Conic& c : conics) {
        Ellipse e = Ellipse::from_conic(c);
        std::vector<XY> path;
        for (int i = 0; i <= 256; ++i) {
            CPoint p = e.point_at(2 * std::numbers::pi * i / 256.0);
            path.push_back({p.x.real(), p.y.real()});
        }
        paths.push_back(std::move(path));
    }
    for (const CPoint& p : points) dots.push_back({p.x.real(), p.y.real()});
    if (paths.empty() && dots.empty()) throw EmptyDataset("emit_svg: nothing to draw");

    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    auto grow = [&](const XY& q) {
        xlo = std::min(xlo, q.x);
        xhi = std::max(xhi, q.x);
        ylo = std::min(ylo, q.y);
        yhi = std::max(yhi, q.y);
    };
    for (const auto& path : paths)
        for (const XY& q : path) grow(q);
    for (const XY& q : dots) grow(q);

    double w = xhi - xlo, h = yhi - ylo;
    double margin = 0.05 * std::max({w, h, 1e-6});
    xlo -= margin;
    ylo -= margin;
    w += 2 * margin;
    h += 2 * margin;
    double stroke = 0.004 * std::max(w, h), dot = 0.008 * std::max(w, h);

    std::ostringstream out;
    // y axis flipped so the figure reads in math orientation
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt6(xlo) << ' '
        << fmt6(-(ylo + h)) << ' ' << fmt6(w) << ' ' << fmt6(h) << "\">\n";
    for (const auto& path : paths) {
        out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"" << fmt6(stroke)
            << "\" points=\"";
        for (const XY& q : path) out << fmt6(q.x) << ',' << fmt6(-q.y) << ' ';
        out << fmt6(path.front().x) << ',' << fmt6(-path.front().y) << "\"/>\n";
    }
    for (const XY& q : dots)
        out << "<circle cx=\"" << fmt6(q.x) << "\" cy=\"" << fmt6(-q.y) << "\" r=\""
            << fmt6(dot) << "\" fill=\"crimson\"/>\n";
    out << "</svg>\n";
    return out.str();
}

namespace {

struct Runner {
    const ExperimentConfig& cfg;
    bool want_svg;
    ordered_json results;
    ordered_json checks = ordered_json::object();
    std::ostringstream csv;
    std::string svg;
    bool check_failed = false;

    // records an expectation when the matching expect.* key is present
    void expect_max(const std::string& key, double value) {
        if (!cfg.has("expect." + key)) return;
        double bound = cfg.number("expect." + key);
        bool ok = value <= bound;
        checks[key] = ordered_json{{"value", value}, {"max", bound}, {"pass", ok}};
        if (!ok) check_failed = true;
    }
    void expect_min(const std::string& key, double value) {
        if (!cfg.has("expect." + key)) return;
        double bound = cfg.number("expect." + key);
        bool ok = value >= bound;
        checks[key] = ordered_json{{"value", value}, {"min", bound}, {"pass", ok}};
        if (!ok) check_failed = true;
    }
    void expect_equal(const std::string& key, double value) {
        if (!cfg.has("expect." + key)) return;
        double target = cfg.number("expect." + key);
        double tol = cfg.number_or("expect." + key + "_tol", 1e-9);
        bool ok = std::abs(value - target) <= tol;
        checks[key] =
            ordered_json{{"value", value}, {"target", target}, {"tol", tol}, {"pass", ok}};
        if (!ok) check_failed = true;
    }

    PonceletConfig family() {
        return find_family(cfg.conic("outer"), cfg.conic("inner"), cfg.integer_or("n", 3),
                           cfg.integer_or("k", 1), cfg.number_or("tol", 1e-9));
    }

    std::vector<Polygon> sample_sheet(const PonceletConfig& pc, int count) {
        std::vector<Polygon> polys;
        for (int i = 0; i < count; ++i)
            polys.push_back(sample_family(pc, static_cast<double>(i) / count));
        return polys;
    }

    void run() {
        const std::string kind = cfg.get("experiment");
        const int m = cfg.integer_or("samples", 50);
        if (kind == "find-family") run_find_family(m);
        else if (kind == "locus") run_locus(m);
        else if (kind == "area-product") run_area_product(m);
        else if (kind == "degenerate") run_degenerate();
        else if (kind == "quad-tests") run_quad(m);
        else run_spherical(m);
    }

    void run_find_family(int m) {
        PonceletConfig pc = family();
        Ellipse inner = Ellipse::from_conic(pc.inner);
        results["inner"] = ordered_json{{"a", inner.a}, {"b", inner.b}, {"cx", inner.cx},
                                        {"cy", inner.cy}, {"angle", inner.angle}};
        double rho = rotation_number(pc.outer, pc.inner, 64 * pc.n);
        results["rotation_number"] = rho;
        csv << "t,closure_residual\n";
        double worst = 0.0;
        for (int i = 0; i < m; ++i) {
            double t = static_cast<double>(i) / m;
            double res = closure_residual(pc, real_flag_at(pc, 2 * std::numbers::pi * t));
            worst = std::max(worst, res);
            csv << fmt(t) << ',' << fmt(res) << '\n';
        }
        results["max_closure_residual"] = worst;
        expect_max("closure_max", worst);
        expect_equal("rotation_number", rho);
        if (want_svg)
            svg = emit_svg({sample_family(pc, 0.0)}, {pc.outer, pc.inner}, {});
    }

    void run_locus(int m) {
        PonceletConfig pc = family();
        CenterKind ck = cfg.get_or("center", "ccm") == "ccm" ? CenterKind::CCM : CenterKind::CM2;
        CenterLocus locus = center_locus(pc, ck, m);
        ConicFit fit = conic_fit(locus.points);
        results["skipped"] = locus.skipped;
        results["fit_residual"] = fit.residual;
        results["fit_degenerate"] = fit.degenerate;
        ordered_json coeffs = ordered_json::array();
        for (const cplx& c : fit.coeffs) coeffs.push_back({c.real(), c.imag()});
        results["fit_coeffs"] = coeffs;
        results["cubic_control_residual"] = conic_fit_cubic_control(locus.points);
        csv << "t,center_x_re,center_x_im,center_y_re,center_y_im\n";
        int j = 0;
        for (int i = 0; i < m; ++i) {
            Polygon p = sample_family(pc, static_cast<double>(i) / m);
            if (!p.affine() || area_is_zero(p, polygon_area(p))) continue;
            const CPoint& c = locus.points[static_cast<size_t>(j++)];
            csv << fmt(static_cast<double>(i) / m);
            csv_complex(csv, c.x);
            csv_complex(csv, c.y);
            csv << '\n';
        }
        expect_max("fit_residual", fit.residual);
        if (want_svg) svg = emit_svg({}, {pc.outer, pc.inner}, locus.points);
    }

    void run_area_product(int m) {
        PonceletConfig pc = family();
        ScanReport rep = area_product_scan(pc, m);
        results["mean"] = rep.mean;
        results["max_relative_deviation"] = rep.max_relative_deviation;
        results["skipped"] = rep.skipped;
        csv << "t,product\n";
        for (const auto& [t, v] : rep.samples) csv << fmt(t) << ',' << fmt(v) << '\n';
        expect_equal("mean", rep.mean);
        expect_max("max_deviation", rep.max_relative_deviation);
        if (want_svg) {
            Polygon p = sample_family(pc, 0.0);
            svg = emit_svg({p, tangent_polygon(p, pc.outer)}, {pc.outer, pc.inner}, {});
        }
    }

    void run_degenerate() {
        PonceletConfig pc = family();
        DegeneratePolygonReport rep = enumerate_degenerate(pc);
        results["count"] = rep.count;
        results["distinct"] = rep.polygons.size();
        results["structure_ok"] = rep.structure_ok;
        results["max_area_magnitude"] = rep.max_area_magnitude;
        if (!rep.structure_ok) check_failed = true;
        csv << "polygon,vertex,kind,x_re,x_im,y_re,y_im,finite\n";
        for (size_t pi = 0; pi < rep.polygons.size(); ++pi) {
            const DegeneratePolygon& dp = rep.polygons[pi];
            for (int i = 0; i < pc.n; ++i) {
                const char* k = dp.kinds[static_cast<size_t>(i)] == VertexKind::Bending
                                    ? "bending"
                                    : dp.kinds[static_cast<size_t>(i)] == VertexKind::Gluing
                                          ? "gluing"
                                          : "regular";
                const CPoint& v = dp.polygon.at(i);
                csv << pi << ',' << i << ',' << k;
                csv_complex(csv, v.x);
                csv_complex(csv, v.y);
                csv << ',' << (dp.finite ? 1 : 0) << '\n';
            }
        }
        expect_equal("count", rep.count);
        expect_max("max_area", rep.max_area_magnitude);
        if (want_svg) svg = emit_svg({}, {pc.outer, pc.inner}, {});
    }

    void run_quad(int m) {
        PonceletConfig pc = family();
        QuadDiagonalReport rep = quad_diagonal_tests(pc, m);
        results["samples"] = rep.samples;
        results["skipped"] = rep.skipped;
        results["bowtie_consistent"] = rep.bowtie_consistent;
        results["intersection_mean"] = json_point(rep.intersection_mean);
        results["intersection_spread"] = rep.intersection_spread;
        if (!rep.bowtie_consistent) check_failed = true;
        csv << "t,area_re,area_im\n";
        for (int i = 0; i < m; ++i) {
            Polygon p = sample_family(pc, static_cast<double>(i) / m);
            cplx a = polygon_area(p);
            csv << fmt(static_cast<double>(i) / m);
            csv_complex(csv, a);
            csv << '\n';
        }
        expect_max("spread", rep.intersection_spread);
        if (want_svg)
            svg = emit_svg(sample_sheet(pc, 8), {pc.outer, pc.inner}, {});
    }

    void run_spherical(int m) {
        PonceletConfig pc = family();
        SphericalLocusReport rep = spherical_locus_experiment(pc, m);
        results["residual"] = rep.residual;
        results["planar_residual"] = rep.planar_residual;
        results["skipped"] = rep.skipped;
        csv << "t,x_re,x_im,y_re,y_im\n";
        for (size_t i = 0; i < rep.locus.size(); ++i) {
            csv << fmt(static_cast<double>(i) / m);
            csv_complex(csv, rep.locus[i].x);
            csv_complex(csv, rep.locus[i].y);
            csv << '\n';
        }
        expect_min("residual_ratio",
                   rep.residual / std::max(rep.planar_residual, 1e-300));
        if (want_svg) svg = emit_svg({}, {pc.outer, pc.inner}, rep.locus);
    }
};

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, bool want_svg) {
    RunResult out;
    ordered_json report;
    report["config_hash"] = cfg.hash();
    report["tol"] = cfg.number_or("tol", 1e-9);
    report["config"] = cfg.entries;

    Runner runner{cfg, want_svg};
    try {
        validate_config(cfg);
        report["experiment"] = cfg.get("experiment");
        runner.run();
        report["results"] = runner.results;
        report["checks"] = runner.checks;
        out.check_failed = runner.check_failed;
    } catch (const ConfigError& e) {
        report["error"] = ordered_json{{"type", "ConfigError"}, {"message", e.what()}};
        out.input_error = true;
    } catch (const CountMismatch& e) {
        report["error"] = ordered_json{{"type", "CountMismatch"}, {"message", e.what()},
                                       {"found", e.found}, {"expected", e.expected}};
        out.check_failed = true;
    } catch (const GeometryError& e) {
        report["error"] = ordered_json{{"type", "GeometryError"}, {"message", e.what()}};
        out.check_failed = true;
    }
    out.report_json = report.dump(2) + "\n";
    out.csv = runner.csv.str();
    out.svg = std::move(runner.svg);
    return out;
}

}  // namespace poncelet
