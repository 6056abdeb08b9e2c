#include <doctest.h>

#include <random>

#include "poncelet/cp2.hpp"

using namespace poncelet;

namespace {

Conic unit_circle() { return Conic::circle(0, 0, 1); }

std::mt19937 rng(12345);

cplx rand_cplx() {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    return {d(rng), d(rng)};
}

Conic random_conic() {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = rand_cplx();
    return Conic(m);
}

}  // namespace

TEST_CASE("join and meet of coordinate elements") {
    HomLine xaxis = join(HomPoint(0, 0, 1), HomPoint(1, 0, 1));
    CHECK(same_line(xaxis, HomLine(0, 1, 0)));

    HomPoint origin = meet(HomLine(0, 1, 0), HomLine(1, 0, 0));
    CHECK(same_point(origin, HomPoint(0, 0, 1)));

    CHECK_THROWS_AS(join(HomPoint(1, 1, 0), HomPoint(2, 2, 0)), DegenerateInput);
}

TEST_CASE("join/meet duality on non-collinear triples") {
    for (int it = 0; it < 100; ++it) {
        HomPoint p(rand_cplx(), rand_cplx(), rand_cplx());
        HomPoint q(rand_cplx(), rand_cplx(), rand_cplx());
        HomPoint r(rand_cplx(), rand_cplx(), rand_cplx());
        if (std::abs(incidence(join(p, q), r)) < 1e-3) continue;
        HomPoint back = meet(join(p, q), join(p, r));
        CHECK(same_point(back, p, 1e-9));
    }
}

TEST_CASE("tangent_at") {
    Conic circ = unit_circle();
    CHECK(same_line(tangent_at(circ, HomPoint(1, 0, 1)), HomLine(1, 0, -1)));

    // y = x^2 as x^2 - yz = 0, vertex tangent is y = 0
    Conic parab = Conic::from_coeffs(1, 0, 0, 0, -1, 0);
    CHECK(same_line(tangent_at(parab, HomPoint(0, 0, 1)), HomLine(0, 1, 0)));

    // tangent at a circular point is still incident to it
    HomPoint circpt(1, cplx(0, 1), 0);
    HomLine t = tangent_at(circ, circpt);
    CHECK(std::abs(incidence(t, circpt)) / (t.v.norm() * circpt.v.norm()) < 1e-12);

    CHECK_THROWS_AS(tangent_at(circ, HomPoint(2, 0, 1)), NotOnConic);
}

TEST_CASE("tangent incidence on random conic points") {
    for (int it = 0; it < 100; ++it) {
        Conic c = random_conic();
        if (c.rank() < 3) continue;
        // intersect with a random line to land on the conic
        HomLine l(rand_cplx(), rand_cplx(), rand_cplx());
        auto [p, q] = line_conic_intersect(c, l);
        HomLine t = tangent_at(c, p);
        CHECK(std::abs(incidence(t, p)) / (t.v.norm() * p.v.norm()) < 1e-12);
    }
}

TEST_CASE("line_conic_intersect") {
    Conic circ = unit_circle();

    auto [a, b] = line_conic_intersect(circ, HomLine(0, 1, 0));
    CHECK((same_point(a, HomPoint(1, 0, 1)) || same_point(a, HomPoint(-1, 0, 1))));
    CHECK((same_point(b, HomPoint(1, 0, 1)) || same_point(b, HomPoint(-1, 0, 1))));
    CHECK(!same_point(a, b));

    // tangency: x = 1 meets the circle in a double point
    auto [c, d] = line_conic_intersect(circ, HomLine(1, 0, -1));
    CHECK(same_point(c, HomPoint(1, 0, 1), 1e-6));
    CHECK(same_point(c, d));

    // line at infinity yields the circular points
    auto [e, f] = line_conic_intersect(circ, HomLine(0, 0, 1));
    HomPoint i1(1, cplx(0, 1), 0), i2(1, cplx(0, -1), 0);
    CHECK((same_point(e, i1) || same_point(e, i2)));
    CHECK(!same_point(e, f));
}

TEST_CASE("tangents_from") {
    Conic circ = unit_circle();

    SUBCASE("external real point") {
        auto [l1, l2] = tangents_from(circ, HomPoint(2, 0, 1));
        // contact points are (1/2, +-sqrt(3)/2)
        double s3 = std::sqrt(3.0) / 2.0;
        HomPoint c1(0.5, s3, 1), c2(0.5, -s3, 1);
        bool hit1 = std::abs(incidence(l1, c1)) / l1.v.norm() < 1e-9 ||
                    std::abs(incidence(l1, c2)) / l1.v.norm() < 1e-9;
        CHECK(hit1);
        CHECK(std::abs(incidence(l1, HomPoint(2, 0, 1))) / l1.v.norm() < 1e-9);
        CHECK(std::abs(incidence(l2, HomPoint(2, 0, 1))) / l2.v.norm() < 1e-9);
        CHECK(!same_line(l1, l2));
    }

    SUBCASE("point on the conic gives a double tangent") {
        auto [l1, l2] = tangents_from(circ, HomPoint(1, 0, 1));
        CHECK(same_line(l1, HomLine(1, 0, -1), 1e-6));
        CHECK(same_line(l1, l2, 1e-6));
    }

    SUBCASE("interior point gives complex tangents on the dual conic") {
        auto [l1, l2] = tangents_from(circ, HomPoint(0, 0, 1));
        Mat3 dual = dual_conic(circ).m;
        for (const HomLine& l : {l1, l2}) {
            cplx r = (l.v.transpose() * dual * l.v)(0);
            CHECK(std::abs(r) / (dual.norm() * l.v.squaredNorm()) < 1e-12);
        }
    }
}

TEST_CASE("contact points lie on conic and polar line") {
    for (int it = 0; it < 50; ++it) {
        Conic c = random_conic();
        if (c.rank() < 3) continue;
        HomPoint p(rand_cplx(), rand_cplx(), rand_cplx());
        HomLine polar(c.m * p.v);
        auto [k1, k2] = line_conic_intersect(c, polar);
        CHECK(c.residual(k1) < 1e-10);
        CHECK(std::abs(incidence(polar, k1)) / (polar.v.norm() * k1.v.norm()) < 1e-10);
    }
}

TEST_CASE("dual_conic") {
    Conic circ = unit_circle();
    CHECK(same_up_to_scale(dual_conic(circ).m.diagonal().eval(), Vec3(1, 1, -1)));

    Conic ell = Conic::from_coeffs(0.25, 1.0 / 9.0, 0, 0, 0, -1);
    Mat3 d = dual_conic(ell).m;
    Vec3 diag = d.diagonal().eval();
    CHECK(same_up_to_scale(diag, Vec3(4, 9, -1)));

    for (int it = 0; it < 50; ++it) {
        Conic c = random_conic();
        if (c.rank() < 3) continue;
        Mat3 dd = dual_conic(dual_conic(c)).m;
        cplx s = (c.m.conjugate().cwiseProduct(dd)).sum() / c.m.squaredNorm();
        CHECK((dd - s * c.m).norm() / dd.norm() < 1e-9);
    }

    Conic pair = Conic::from_coeffs(1, -1, 0, 0, 0, 0);  // x^2 - y^2 = 0
    CHECK_THROWS_AS(dual_conic(pair), SingularConic);
}

TEST_CASE("split_degenerate_conic recovers the two lines") {
    // xy = 0
    Conic c = Conic::from_coeffs(0, 0, 1, 0, 0, 0);
    auto [g, h] = split_degenerate_conic(c);
    bool ok = (same_line(g, HomLine(1, 0, 0), 1e-7) && same_line(h, HomLine(0, 1, 0), 1e-7)) ||
              (same_line(g, HomLine(0, 1, 0), 1e-7) && same_line(h, HomLine(1, 0, 0), 1e-7));
    CHECK(ok);

    // (x - z)^2 = 0, double line
    Conic dl = Conic::from_coeffs(1, 0, 0, -2, 0, 1);
    auto [g2, h2] = split_degenerate_conic(dl);
    CHECK(same_line(g2, HomLine(1, 0, -1), 1e-6));
    CHECK(same_line(h2, HomLine(1, 0, -1), 1e-6));
}

TEST_CASE("conic_conic_intersect") {
    Conic circ = unit_circle();

    SUBCASE("two overlapping circles") {
        Conic c2 = Conic::circle(1, 0, 1);
        auto pts = conic_conic_intersect(circ, c2);
        REQUIRE(pts.size() == 4);
        double s3 = std::sqrt(3.0) / 2.0;
        int found_real = 0, found_circ = 0;
        for (auto& p : pts) {
            if (same_point(p, HomPoint(0.5, s3, 1), 1e-7) ||
                same_point(p, HomPoint(0.5, -s3, 1), 1e-7))
                ++found_real;
            if (same_point(p, HomPoint(1, cplx(0, 1), 0), 1e-6) ||
                same_point(p, HomPoint(1, cplx(0, -1), 0), 1e-6))
                ++found_circ;
        }
        CHECK(found_real == 2);
        CHECK(found_circ == 2);
        CHECK(general_position_check(circ, c2));
    }

    SUBCASE("internal tangency at the poles") {
        Conic ell = Conic::from_coeffs(0.25, 1, 0, 0, 0, -1);
        auto pts = conic_conic_intersect(circ, ell);
        REQUIRE(pts.size() == 4);
        for (auto& p : pts) {
            bool pole = same_point(p, HomPoint(0, 1, 1), 1e-4) ||
                        same_point(p, HomPoint(0, -1, 1), 1e-4);
            CHECK(pole);
        }
        CHECK(!general_position_check(circ, ell));
    }

    SUBCASE("four symmetric real points") {
        Conic ell = Conic::from_coeffs(0.25, 1, 0, 0, 0, -1);
        Conic c2 = Conic::circle(0, 0, 1.1);
        auto pts = conic_conic_intersect(ell, c2);
        REQUIRE(pts.size() == 4);
        for (auto& p : pts) {
            CHECK(ell.residual(p) < 1e-9);
            CHECK(c2.residual(p) < 1e-9);
            Vec3 n = normalize_max(p.v);
            CHECK(std::abs(n(0).imag()) < 1e-8);
            CHECK(std::abs(n(1).imag()) < 1e-8);
            // reflected partners present
            bool refl = false;
            for (auto& q : pts)
                if (same_point(q, HomPoint(-n(0), n(1), n(2)), 1e-6)) refl = true;
            CHECK(refl);
        }
        CHECK(general_position_check(ell, c2));
    }

    SUBCASE("identical conics are rejected") {
        Conic scaled(circ.m * cplx(2.5, 0.5));
        CHECK_THROWS_AS(conic_conic_intersect(circ, scaled), IdenticalConics);
    }
}

TEST_CASE("conic_conic_intersect residuals on random rank-3 pairs") {
    int done = 0;
    for (int it = 0; it < 200 && done < 50; ++it) {
        Conic a = random_conic(), b = random_conic();
        if (a.rank() < 3 || b.rank() < 3) continue;
        auto pts = conic_conic_intersect(a, b);
        REQUIRE(pts.size() == 4);
        for (auto& p : pts) {
            CHECK(a.residual(p) < 1e-9);
            CHECK(b.residual(p) < 1e-9);
        }
        ++done;
    }
    CHECK(done == 50);
}
