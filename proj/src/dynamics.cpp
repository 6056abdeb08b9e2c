#include "poncelet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace poncelet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_positive(double a) {
    a = std::fmod(a, kTwoPi);
    if (a <= 0.0) a += kTwoPi;
    return a;
}

CPoint dehomogenize(const HomPoint& p, bool* infinite = nullptr) {
    Vec3 v = normalize_max(p.v);
    if (std::abs(v(2)) < 1e-9) {
        if (infinite) { *infinite = true; return {v(0), v(1)}; }
        throw VertexAtInfinity(0);
    }
    if (infinite) *infinite = false;
    return {v(0) / v(2), v(1) / v(2)};
}

double real_angle_of(const Ellipse& e, const HomPoint& p) {
    bool inf = false;
    CPoint q = dehomogenize(p, &inf);
    if (inf || std::abs(q.x.imag()) > 1e-7 || std::abs(q.y.imag()) > 1e-7)
        throw NotRealNested("orbit left the real plane");
    return e.angle_of(q);
}

}  // namespace

Conic Ellipse::conic() const {
    double c = std::cos(angle), s = std::sin(angle);
    Eigen::Matrix2d rot;
    rot << c, -s, s, c;
    Eigen::Matrix2d q2 = rot * Eigen::Vector2d(1.0 / (a * a), 1.0 / (b * b)).asDiagonal() *
                         rot.transpose();
    Eigen::Vector2d ctr(cx, cy);
    Mat3 m = Mat3::Zero();
    m.topLeftCorner<2, 2>() = q2.cast<cplx>();
    Eigen::Vector2d mc = -(q2 * ctr);
    m(0, 2) = m(2, 0) = mc(0);
    m(1, 2) = m(2, 1) = mc(1);
    m(2, 2) = ctr.dot(q2 * ctr) - 1.0;
    return Conic(m);
}

CPoint Ellipse::point_at(double theta) const {
    double c = std::cos(angle), s = std::sin(angle);
    double u = a * std::cos(theta), v = b * std::sin(theta);
    return {cx + c * u - s * v, cy + s * u + c * v};
}

double Ellipse::angle_of(const CPoint& p) const {
    double c = std::cos(angle), s = std::sin(angle);
    double dx = p.x.real() - cx, dy = p.y.real() - cy;
    double u = (c * dx + s * dy) / a, v = (-s * dx + c * dy) / b;
    return wrap_positive(std::atan2(v, u));
}

Ellipse Ellipse::from_conic(const Conic& c) {
    // normalize the matrix phase via its largest entry; a real conic becomes
    // a real matrix
    int bi = 0, bj = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (std::abs(c.m(i, j)) > std::abs(c.m(bi, bj))) { bi = i; bj = j; }
    Mat3 m = c.m / c.m(bi, bj);
    if (m.imag().norm() > 1e-7 * m.real().norm())
        throw NotRealNested("conic is not real up to scale");
    Eigen::Matrix3d r = m.real();

    Eigen::Matrix2d q2 = r.topLeftCorner<2, 2>();
    Eigen::Vector2d b2(r(0, 2), r(1, 2));
    double detq = q2.determinant();
    if (std::abs(detq) < 1e-14) throw NotRealNested("conic has no center");
    Eigen::Vector2d ctr = q2.fullPivLu().solve(-b2);
    double val = r(2, 2) + b2.dot(ctr);  // f(center)

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(q2);
    Eigen::Vector2d ev = es.eigenvalues();
    if (ev(0) * ev(1) <= 0.0 || ev(0) * val >= 0.0)
        throw NotRealNested("conic is not a real ellipse");

    Ellipse e;
    e.a = std::sqrt(-val / ev(0));
    e.b = std::sqrt(-val / ev(1));
    Eigen::Vector2d axis = es.eigenvectors().col(0);
    e.angle = std::atan2(axis(1), axis(0));
    e.cx = ctr(0);
    e.cy = ctr(1);
    if (e.a < e.b) {  // keep the major axis first
        std::swap(e.a, e.b);
        e.angle += std::numbers::pi / 2.0;
    }
    return e;
}

void validate_flag(const PonceletConfig& config, const Flag& f, double tol) {
    if (config.outer.residual(f.point) > tol)
        throw InvalidFlag("flag point is not on the outer conic");
    Mat3 dual = adjugate(config.inner.m);
    cplx t = (f.line.v.transpose() * dual * f.line.v)(0);
    if (std::abs(t) / (dual.norm() * f.line.v.squaredNorm()) > tol)
        throw InvalidFlag("flag line is not tangent to the inner conic");
    if (std::abs(incidence(f.line, f.point)) / (f.line.v.norm() * f.point.v.norm()) > tol)
        throw InvalidFlag("flag point is not on the flag line");
}

Flag sigma(const PonceletConfig& config, const Flag& f) {
    auto [p1, p2] = line_conic_intersect(config.outer, f.line);
    double d1 = chordal(p1.v, f.point.v), d2 = chordal(p2.v, f.point.v);
    if (std::min(d1, d2) > 1e-5)
        throw InvalidFlag("sigma: flag point is not an intersection of line and outer conic");
    const HomPoint& far = (d1 >= d2) ? p1 : p2;
    if (chordal(far.v, f.point.v) < 1e-7) return f;  // tangency, fixed point
    // renormalize so long orbits cannot drift towards under/overflow
    return {HomPoint(normalize_max(far.v)), HomLine(normalize_max(f.line.v))};
}

Flag tau(const PonceletConfig& config, const Flag& f) {
    auto [l1, l2] = tangents_from(config.inner, f.point);
    double d1 = chordal(l1.v, f.line.v), d2 = chordal(l2.v, f.line.v);
    if (std::min(d1, d2) > 1e-5)
        throw InvalidFlag("tau: flag line is not a tangent from the flag point");
    const HomLine& far = (d1 >= d2) ? l1 : l2;
    if (chordal(far.v, f.line.v) < 1e-7) return f;  // double tangent, fixed line
    return {HomPoint(normalize_max(f.point.v)), HomLine(normalize_max(far.v))};
}

double closure_residual(const PonceletConfig& config, const Flag& start) {
    Flag f = start;
    for (int i = 0; i < config.n; ++i) f = poncelet_step(config, f);
    return chordal(f.point.v, start.point.v) + chordal(f.line.v, start.line.v);
}

Flag real_flag_at(const PonceletConfig& config, double theta) {
    Ellipse outer = Ellipse::from_conic(config.outer);
    CPoint p = outer.point_at(theta);
    HomPoint hp(p.x, p.y, 1.0);
    auto [l1, l2] = tangents_from(config.inner, hp);
    // deterministic orientation: the tangent whose first step advances
    // counterclockwise by the smaller angle
    Flag best{hp, l1};
    double best_adv = 10.0;
    for (const HomLine& l : {l1, l2}) {
        Flag cand{hp, l};
        double adv = wrap_positive(real_angle_of(outer, sigma(config, cand).point) - theta);
        if (adv < best_adv) {
            best_adv = adv;
            best = cand;
        }
    }
    return best;
}

Polygon trace_polygon(const PonceletConfig& config, const Flag& start) {
    Polygon poly;
    Flag f = start;
    for (int i = 0; i < config.n; ++i) {
        bool inf = false;
        poly.vertices.push_back(dehomogenize(f.point, &inf));
        if (inf) poly.infinite.push_back(i);
        f = poncelet_step(config, f);
    }
    return poly;
}

double rotation_number(const Conic& outer, const Conic& inner, int iterations) {
    Ellipse e = Ellipse::from_conic(outer);
    PonceletConfig cfg{outer, inner, 1, 1, 1e-9};
    Flag f = real_flag_at(cfg, 0.0);
    double prev = 0.0, total = 0.0;
    for (int i = 0; i < iterations; ++i) {
        f = poncelet_step(cfg, f);
        double th = real_angle_of(e, f.point);
        total += wrap_positive(th - prev);
        prev = th;
    }
    return total / (kTwoPi * iterations);
}

namespace {

// total angular advance of the n-step orbit minus the winding target
double angular_defect(const Conic& outer, const Conic& inner, int n, int k) {
    Ellipse e = Ellipse::from_conic(outer);
    PonceletConfig cfg{outer, inner, n, k, 1e-9};
    Flag f = real_flag_at(cfg, 0.0);
    double prev = 0.0, total = 0.0;
    for (int i = 0; i < n; ++i) {
        f = poncelet_step(cfg, f);
        double th = real_angle_of(e, f.point);
        total += wrap_positive(th - prev);
        prev = th;
    }
    return total - kTwoPi * k;
}

bool contained(const Conic& outer, const Ellipse& inner, double margin = 1e-9) {
    Ellipse oe = Ellipse::from_conic(outer);
    HomPoint ctr(oe.cx, oe.cy, 1.0);
    cplx at_center = outer.eval(ctr);
    for (int i = 0; i < 128; ++i) {
        CPoint p = inner.point_at(kTwoPi * i / 128.0);
        cplx v = outer.eval(HomPoint(p.x, p.y, 1.0));
        if ((v * at_center).real() <= margin) return false;
    }
    return true;
}

}  // namespace

PonceletConfig find_family(const Conic& outer, const Conic& inner_shape, int n, int k,
                           double tol) {
    if (n < 3 || k < 1 || std::gcd(n, k) != 1)
        throw BracketFailure("need n >= 3 and gcd(n, k) = 1");
    Ellipse base = Ellipse::from_conic(inner_shape);

    double s_lo = 1e-3, s_hi = 4.0;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (s_lo + s_hi);
        (contained(outer, base.scaled(mid)) ? s_lo : s_hi) = mid;
    }
    double s_max = s_lo;

    auto defect = [&](double s) -> double {
        return angular_defect(outer, base.scaled(s).conic(), n, k);
    };

    const int grid = 96;
    double prev_s = 0.0, prev_g = 0.0;
    bool have_prev = false, bracketed = false;
    double lo = 0.0, hi = 0.0, glo = 0.0;
    for (int i = 1; i <= grid; ++i) {
        double s = s_max * (0.02 + 0.978 * i / grid);
        double g;
        try {
            g = defect(s);
        } catch (const GeometryError&) {
            have_prev = false;
            continue;
        }
        if (have_prev && prev_g * g <= 0.0) {
            lo = prev_s; hi = s; glo = prev_g;
            bracketed = true;
            break;
        }
        prev_s = s; prev_g = g; have_prev = true;
    }
    if (!bracketed) throw BracketFailure("winding target not attained by inner scaling");

    for (int i = 0; i < 100 && hi - lo > 1e-16 * s_max; ++i) {
        double mid = 0.5 * (lo + hi);
        double g;
        try {
            g = defect(mid);
        } catch (const GeometryError&) {
            hi = mid;  // shrink towards the valid side
            continue;
        }
        if (g * glo <= 0.0) hi = mid;
        else { lo = mid; glo = g; }
    }

    PonceletConfig cfg{outer, base.scaled(0.5 * (lo + hi)).conic(), n, k, tol};
    double res = closure_residual(cfg, real_flag_at(cfg, 0.0));
    if (res > 1e-9) throw BracketFailure("bisection converged but the orbit does not close");
    return cfg;
}

Polygon sample_family(const PonceletConfig& config, double t) {
    return trace_polygon(config, real_flag_at(config, kTwoPi * t));
}

namespace {

bool same_polygon_up_to_relisting(const std::vector<HomPoint>& a,
                                  const std::vector<HomPoint>& b, double tol = 1e-6) {
    int n = static_cast<int>(a.size());
    if (static_cast<int>(b.size()) != n) return false;
    for (int shift = 0; shift < n; ++shift) {
        for (int dir : {1, -1}) {
            double worst = 0.0;
            for (int i = 0; i < n && worst < tol; ++i) {
                int j = ((shift + dir * i) % n + n) % n;
                worst = std::max(worst, chordal(a[static_cast<size_t>(i)].v,
                                                b[static_cast<size_t>(j)].v));
            }
            if (worst < tol) return true;
        }
    }
    return false;
}

std::vector<HomPoint> trace_hom(const PonceletConfig& config, Flag f) {
    std::vector<HomPoint> pts;
    for (int i = 0; i < config.n; ++i) {
        pts.push_back(f.point);
        f = poncelet_step(config, f);
    }
    return pts;
}

VertexKind classify_vertex(const PonceletConfig& config, const HomPoint& p,
                           const Mat3& inner_dual) {
    if (config.inner.residual(p) < 1e-6) return VertexKind::Bending;
    HomLine t(config.outer.m * p.v);
    cplx r = (t.v.transpose() * inner_dual * t.v)(0);
    if (std::abs(r) / (inner_dual.norm() * t.v.squaredNorm()) < 1e-6) return VertexKind::Gluing;
    return VertexKind::Regular;
}

}  // namespace

DegeneratePolygonReport enumerate_degenerate(const PonceletConfig& config) {
    const int n = config.n;
    Mat3 inner_dual = adjugate(config.inner.m);
    Mat3 outer_dual = adjugate(config.outer.m);

    std::vector<Flag> starts;
    for (const HomPoint& q : conic_conic_intersect(config.inner, config.outer))
        starts.push_back({q, HomLine(config.inner.m * q.v)});
    for (const HomPoint& lq :
         conic_conic_intersect(Conic(inner_dual), Conic(outer_dual))) {
        HomLine l(lq.v);
        starts.push_back({HomPoint(outer_dual * l.v), l});
    }

    DegeneratePolygonReport rep;
    for (const Flag& s : starts) {
        auto orbit = trace_hom(config, s);
        bool dup = false;
        for (const auto& seen : rep.polygons)
            if (same_polygon_up_to_relisting(orbit, seen.hom_vertices)) { dup = true; break; }
        if (dup) continue;

        DegeneratePolygon dp;
        dp.hom_vertices = orbit;
        for (const HomPoint& p : orbit) {
            bool inf = false;
            dp.polygon.vertices.push_back(dehomogenize(p, &inf));
            if (inf) {
                dp.polygon.infinite.push_back(static_cast<int>(dp.polygon.vertices.size()) - 1);
                dp.finite = false;
            }
            dp.kinds.push_back(classify_vertex(config, p, inner_dual));
        }
        if (dp.finite) {
            dp.area_magnitude = std::abs(polygon_area(dp.polygon));
            rep.max_area_magnitude = std::max(rep.max_area_magnitude, dp.area_magnitude);
        }
        rep.polygons.push_back(std::move(dp));
    }

    rep.count = static_cast<int>(rep.polygons.size()) * n;
    if (rep.count != 4 * n) throw CountMismatch(rep.count, 4 * n);

    // parity-dependent layout of the special vertices
    rep.structure_ok = true;
    for (const auto& dp : rep.polygons) {
        std::vector<int> bend, glue;
        for (int i = 0; i < n; ++i) {
            if (dp.kinds[static_cast<size_t>(i)] == VertexKind::Bending) bend.push_back(i);
            if (dp.kinds[static_cast<size_t>(i)] == VertexKind::Gluing) glue.push_back(i);
        }
        bool ok;
        if (n % 2 == 0) {
            bool bending_type = bend.size() == 2 && glue.empty() &&
                                (bend[1] - bend[0]) % (n / 2) == 0;
            // gluing type: two doubled vertices at antipodal listing positions
            std::vector<int> pair_starts;
            for (int i = 0; i < n; ++i)
                if (chordal(dp.hom_vertices[static_cast<size_t>(i)].v,
                            dp.hom_vertices[static_cast<size_t>((i + 1) % n)].v) < 1e-6)
                    pair_starts.push_back(i);
            bool gluing_type = glue.size() == 4 && bend.empty() && pair_starts.size() == 2 &&
                               (pair_starts[1] - pair_starts[0]) % (n / 2) == 0;
            ok = bending_type || gluing_type;
        } else {
            ok = bend.size() == 1 && glue.size() == 2;
            if (ok) {
                int d = ((glue[0] - bend[0]) % n + n) % n;
                int d2 = ((glue[1] - bend[0]) % n + n) % n;
                ok = (std::min(d, d2) == (n - 1) / 2) && (std::max(d, d2) == (n + 1) / 2);
            }
        }
        if (!ok) rep.structure_ok = false;
    }
    return rep;
}

}  // namespace poncelet
