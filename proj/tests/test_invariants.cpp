#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "poncelet/invariants.hpp"

using namespace poncelet;

namespace {

constexpr double kPi = std::numbers::pi;

std::mt19937 rng(20240);

std::vector<CPoint> circle_points(int m, double r = 1.0, double phase = 0.0) {
    std::vector<CPoint> pts;
    for (int i = 0; i < m; ++i) {
        double th = 2 * kPi * i / m + phase;
        pts.emplace_back(r * std::cos(th), r * std::sin(th));
    }
    return pts;
}

}  // namespace

TEST_CASE("conic_fit recovers the unit circle") {
    ConicFit fit = conic_fit(circle_points(8));
    CHECK(fit.residual < 1e-12);
    CHECK(!fit.degenerate);
    // coeffs proportional to (1, 1, 0, 0, 0, -1)
    cplx a = fit.coeffs[0];
    CHECK(std::abs(fit.coeffs[1] - a) < 1e-10);
    CHECK(std::abs(fit.coeffs[2]) < 1e-10);
    CHECK(std::abs(fit.coeffs[3]) < 1e-10);
    CHECK(std::abs(fit.coeffs[4]) < 1e-10);
    CHECK(std::abs(fit.coeffs[5] + a) < 1e-10);
    // the fitted conic evaluates to ~0 on fresh circle points
    for (const CPoint& p : circle_points(17, 1.0, 0.3))
        CHECK(fit.conic().residual(HomPoint(p.x, p.y, 1.0)) < 1e-10);
}

TEST_CASE("conic_fit on a line is degenerate but exact") {
    std::vector<CPoint> pts;
    for (int i = 0; i < 8; ++i) pts.emplace_back(0.3 * i - 1.0, 0.3 * i - 1.0);  // y = x
    ConicFit fit = conic_fit(pts);
    CHECK(fit.residual < 1e-12);
    CHECK(fit.degenerate);
}

TEST_CASE("conic_fit noise calibration") {
    std::uniform_real_distribution<double> d(-1e-2, 1e-2);
    std::vector<CPoint> pts = circle_points(50);
    for (CPoint& p : pts) p = p + CPoint(d(rng), d(rng));
    double res = conic_fit(pts).residual;
    CHECK(res > 1e-4);
    CHECK(res < 1e-1);
}

TEST_CASE("conic_fit rejects tiny point sets") {
    CHECK_THROWS_AS(conic_fit(circle_points(5)), TooFewPoints);
}

TEST_CASE("fit residual is invariant under rigid motions") {
    std::vector<CPoint> pts;
    Ellipse e{1.7, 0.6, 0, 0, 0};
    for (int i = 0; i < 24; ++i) pts.push_back(e.point_at(2 * kPi * i / 24));
    double r0 = conic_fit(pts).residual;
    double c = std::cos(0.8), s = std::sin(0.8);
    for (CPoint& p : pts)
        p = CPoint(c * p.x - s * p.y + 3.0, s * p.x + c * p.y - 2.0);
    CHECK(std::abs(conic_fit(pts).residual - r0) < 1e-12);
}

TEST_CASE("CCM locus of concentric circles is the common center") {
    PonceletConfig cfg = find_family(Conic::circle(0, 0, 1), Conic::circle(0, 0, 1), 3, 1);
    CenterLocus locus = center_locus(cfg, CenterKind::CCM, 40);
    CHECK(locus.skipped == 0);
    for (const CPoint& p : locus.points) CHECK(p.norm() < 1e-9);
}

TEST_CASE("center loci of offset families are conics") {
    Conic outer = Ellipse{2, 1, 0, 0, 0}.conic();
    for (int n : {3, 4}) {
        PonceletConfig cfg = find_family(outer, Conic::circle(0.2, 0.1, 1.0), n, 1);
        for (CenterKind kind : {CenterKind::CCM, CenterKind::CM2}) {
            CenterLocus locus = center_locus(cfg, kind, 50);
            REQUIRE(locus.points.size() >= 32);
            ConicFit fit = conic_fit(locus.points);
            CHECK(fit.residual < 1e-7);
            // a cubic column must not beat the conic model decisively
            double control = conic_fit_cubic_control(locus.points);
            CHECK((control > fit.residual / 10.0 || fit.residual < 1e-10));
        }
    }
}

TEST_CASE("tangent polygon of the inscribed square") {
    Conic circ = Conic::circle(0, 0, 1);
    double h = std::sqrt(0.5);
    Polygon p({{h, h}, {-h, h}, {-h, -h}, {h, -h}});
    Polygon q = tangent_polygon(p, circ);
    CHECK(std::abs(polygon_area(p) - 2.0) < 1e-12);
    CHECK(std::abs(polygon_area(q) - 4.0) < 1e-12);

    // regular hexagon: A(P) * A(Q) = (3 sqrt3 / 2) * (2 sqrt3) = 9
    Polygon hex(circle_points(6));
    Polygon hq = tangent_polygon(hex, circ);
    CHECK(std::abs(polygon_area(hex) * polygon_area(hq) - 9.0) < 1e-12);
}

TEST_CASE("antipodal consecutive vertices break the tangent polygon") {
    Polygon p({{1, 0}, {-1, 0}, {0, 1}});
    CHECK_THROWS_AS(tangent_polygon(p, Conic::circle(0, 0, 1)), VertexAtInfinity);
}

TEST_CASE("area product is invariant for even n") {
    Conic circ = Conic::circle(0, 0, 1);
    PonceletConfig hexcfg = find_family(circ, circ, 6, 1);
    ScanReport hex = area_product_scan(hexcfg, 64);
    CHECK(std::abs(hex.mean - 9.0) < 1e-9);
    CHECK(hex.max_relative_deviation < 1e-10);

    Conic outer = Ellipse{2, 1, 0, 0, 0}.conic();
    for (int n : {4, 6, 8}) {
        PonceletConfig cfg = find_family(outer, outer, n, 1);
        ScanReport rep = area_product_scan(cfg, 64);
        CHECK(rep.max_relative_deviation < 1e-8);
    }
    // a rotated, non-similar inner ellipse: the invariance is not an affine
    // symmetry artifact
    PonceletConfig rot = find_family(outer, Ellipse{1.2, 0.4, 0, 0, 0.9}.conic(), 4, 1);
    CHECK(area_product_scan(rot, 64).max_relative_deviation < 1e-8);
}

TEST_CASE("odd n has no area-product invariance") {
    Conic outer = Ellipse{2, 1, 0, 0, 0}.conic();
    PonceletConfig cfg = find_family(outer, Ellipse{1.2, 0.4, 0, 0, 0.9}.conic(), 5, 1);
    ScanReport rep = area_product_scan(cfg, 64);
    CHECK(rep.max_relative_deviation > 1e-2);
}

TEST_CASE("bowtie equivalence on random quadrilaterals") {
    std::uniform_real_distribution<double> d(-1, 1);
    int bowties = 0;
    for (int it = 0; it < 1000; ++it) {
        Polygon q({{d(rng), d(rng)}, {d(rng), d(rng)}, {d(rng), d(rng)}, {d(rng), d(rng)}});
        cplx a = polygon_area(q);
        bool zero = std::abs(a) < 1e-10 * q.diameter() * q.diameter();
        CHECK(zero == diagonals_parallel(q));
        bowties += zero;
    }
    // sanity: generic quads are not bowties
    CHECK(bowties < 10);

    Polygon bow({{0, 0}, {1, 1}, {1, 0}, {0, 1}});
    CHECK(diagonals_parallel(bow));
    CHECK(std::abs(polygon_area(bow)) < 1e-14);
    Polygon convex({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(!diagonals_parallel(convex));
}

TEST_CASE("diagonals of a concentric n=4 family meet at the center") {
    Conic outer = Ellipse{2, 1, 0, 0, 0}.conic();
    PonceletConfig cfg = find_family(outer, Conic::circle(0, 0, 1), 4, 1);
    QuadDiagonalReport rep = quad_diagonal_tests(cfg, 64);
    CHECK(rep.bowtie_consistent);
    CHECK(rep.intersection_mean.norm() < 1e-9);
    CHECK(rep.intersection_spread < 1e-10);
}

TEST_CASE("diagonal intersection is fixed for an offset n=4 family") {
    PonceletConfig cfg =
        find_family(Conic::circle(0, 0, 1), Conic::circle(0.15, 0, 1.0), 4, 1);
    QuadDiagonalReport rep = quad_diagonal_tests(cfg, 64);
    CHECK(rep.bowtie_consistent);
    CHECK(rep.intersection_spread < 1e-8);
}
