#include "poncelet/invariants.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace poncelet {

namespace {

struct BoxFrame {
    double cx = 0.0, cy = 0.0, s = 1.0;  // u = (x - cx) / s, v = (y - cy) / s
};

BoxFrame bounding_frame(const std::vector<CPoint>& pts) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const CPoint& p : pts) {
        xlo = std::min(xlo, p.x.real());
        xhi = std::max(xhi, p.x.real());
        ylo = std::min(ylo, p.y.real());
        yhi = std::max(yhi, p.y.real());
    }
    BoxFrame f;
    f.cx = 0.5 * (xlo + xhi);
    f.cy = 0.5 * (ylo + yhi);
    f.s = 0.5 * std::max(xhi - xlo, yhi - ylo);
    // a point-like cloud carries no shape: do not magnify its rounding noise
    if (f.s < 1e-8 * (1.0 + std::hypot(f.cx, f.cy))) f.s = 1.0;
    return f;
}

using MatX = Eigen::MatrixXcd;

MatX design_matrix(const std::vector<CPoint>& pts, const BoxFrame& f, bool cubic_column) {
    const auto n = static_cast<Eigen::Index>(pts.size());
    MatX m(n, cubic_column ? 7 : 6);
    for (Eigen::Index i = 0; i < n; ++i) {
        cplx u = (pts[static_cast<size_t>(i)].x - f.cx) / f.s;
        cplx v = (pts[static_cast<size_t>(i)].y - f.cy) / f.s;
        m(i, 0) = u * u;
        m(i, 1) = v * v;
        m(i, 2) = u * v;
        m(i, 3) = u;
        m(i, 4) = v;
        m(i, 5) = 1.0;
        if (cubic_column) m(i, 6) = u * u * u;
    }
    return m;
}

}  // namespace

Conic ConicFit::conic() const {
    Mat3 m;
    m << coeffs[0], coeffs[2] / 2.0, coeffs[3] / 2.0,
         coeffs[2] / 2.0, coeffs[1], coeffs[4] / 2.0,
         coeffs[3] / 2.0, coeffs[4] / 2.0, coeffs[5];
    return Conic(m);
}

ConicFit conic_fit(const std::vector<CPoint>& points) {
    if (points.size() < 6) throw TooFewPoints("conic_fit needs at least 6 points");
    BoxFrame f = bounding_frame(points);
    MatX m = design_matrix(points, f, false);
    Eigen::JacobiSVD<MatX> svd(m, Eigen::ComputeFullV);

    ConicFit fit;
    fit.residual = svd.singularValues()(5) / std::sqrt(static_cast<double>(points.size()));
    Eigen::Vector<cplx, 6> w = svd.matrixV().col(5);

    // map A u^2 + B v^2 + C uv + D u + E v + F back through u = (x - cx)/s
    cplx A = w(0), B = w(1), C = w(2), D = w(3) * f.s, E = w(4) * f.s, F = w(5) * f.s * f.s;
    fit.coeffs[0] = A;
    fit.coeffs[1] = B;
    fit.coeffs[2] = C;
    fit.coeffs[3] = D - 2.0 * A * f.cx - C * f.cy;
    fit.coeffs[4] = E - 2.0 * B * f.cy - C * f.cx;
    fit.coeffs[5] = A * f.cx * f.cx + B * f.cy * f.cy + C * f.cx * f.cy - D * f.cx -
                    E * f.cy + F;

    double norm = 0.0;
    for (const cplx& c : fit.coeffs) norm += std::norm(c);
    norm = std::sqrt(norm);
    for (cplx& c : fit.coeffs) c /= norm;

    fit.degenerate = fit.conic().rank() < 3;
    return fit;
}

double conic_fit_cubic_control(const std::vector<CPoint>& points) {
    if (points.size() < 7) throw TooFewPoints("cubic control needs at least 7 points");
    BoxFrame f = bounding_frame(points);
    MatX m = design_matrix(points, f, true);
    Eigen::JacobiSVD<MatX> svd(m);
    return svd.singularValues()(6) / std::sqrt(static_cast<double>(points.size()));
}

CenterLocus center_locus(const PonceletConfig& config, CenterKind kind, int m) {
    CenterLocus locus;
    for (int i = 0; i < m; ++i) {
        Polygon p = sample_family(config, static_cast<double>(i) / m);
        if (!p.affine() || area_is_zero(p, polygon_area(p))) {
            ++locus.skipped;
            continue;
        }
        locus.points.push_back(polygon_center(p, kind));
    }
    if (locus.points.empty())
        throw AllSamplesDegenerate("center_locus: every sample had vanishing area");
    return locus;
}

Polygon tangent_polygon(const Polygon& p, const Conic& outer) {
    const int n = p.n();
    std::vector<HomLine> tangents;
    for (int i = 0; i < n; ++i) {
        const CPoint& v = p.at(i);
        tangents.push_back(tangent_at(outer, HomPoint(v.x, v.y, 1.0)));
    }
    Polygon q;
    for (int i = 0; i < n; ++i) {
        Vec3 w = normalize_max(meet(tangents[static_cast<size_t>(i)],
                                    tangents[static_cast<size_t>((i + 1) % n)])
                                   .v);
        if (std::abs(w(2)) < 1e-9) throw VertexAtInfinity(i);
        q.vertices.emplace_back(w(0) / w(2), w(1) / w(2));
    }
    return q;
}

ScanReport area_product_scan(const PonceletConfig& config, int m) {
    ScanReport rep;
    for (int i = 0; i < m; ++i) {
        double t = static_cast<double>(i) / m;
        Polygon p = sample_family(config, t);
        double prod;
        try {
            Polygon q = tangent_polygon(p, config.outer);
            prod = (polygon_area(p) * polygon_area(q)).real();
        } catch (const VertexAtInfinity&) {
            ++rep.skipped;
            continue;
        }
        rep.samples.emplace_back(t, prod);
        rep.mean += prod;
    }
    if (rep.samples.empty()) throw AllSamplesDegenerate("area_product_scan: no finite sample");
    rep.mean /= static_cast<double>(rep.samples.size());
    for (const auto& [t, v] : rep.samples)
        rep.max_relative_deviation =
            std::max(rep.max_relative_deviation, std::abs(v - rep.mean) / std::abs(rep.mean));
    return rep;
}

bool diagonals_parallel(const Polygon& quad, double tol) {
    CPoint d1 = quad.at(2) - quad.at(0), d2 = quad.at(3) - quad.at(1);
    cplx cross = d1.x * d2.y - d1.y * d2.x;
    return std::abs(cross) < tol * d1.norm() * d2.norm();
}

QuadDiagonalReport quad_diagonal_tests(const PonceletConfig& config, int m) {
    QuadDiagonalReport rep;
    std::vector<CPoint> meets;
    for (int i = 0; i < m; ++i) {
        Polygon p = sample_family(config, static_cast<double>(i) / m);
        ++rep.samples;
        rep.max_diameter = std::max(rep.max_diameter, p.diameter());
        cplx area = polygon_area(p);
        bool zero = area_is_zero(p, area);
        bool par = diagonals_parallel(p);
        if (zero != par) rep.bowtie_consistent = false;
        if (zero || par) {
            ++rep.skipped;
            continue;
        }
        HomLine d13 = join(HomPoint(p.at(0).x, p.at(0).y, 1.0),
                           HomPoint(p.at(2).x, p.at(2).y, 1.0));
        HomLine d24 = join(HomPoint(p.at(1).x, p.at(1).y, 1.0),
                           HomPoint(p.at(3).x, p.at(3).y, 1.0));
        Vec3 w = normalize_max(meet(d13, d24).v);
        meets.emplace_back(w(0) / w(2), w(1) / w(2));
        rep.intersection_mean = rep.intersection_mean + meets.back();
    }
    if (meets.empty()) throw AllSamplesDegenerate("quad_diagonal_tests: no transversal sample");
    rep.intersection_mean = rep.intersection_mean / static_cast<double>(meets.size());
    for (const CPoint& q : meets)
        rep.intersection_spread =
            std::max(rep.intersection_spread,
                     distance(q, rep.intersection_mean) / rep.max_diameter);
    return rep;
}

}  // namespace poncelet
