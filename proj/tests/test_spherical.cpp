#include <doctest.h>

#include <cmath>
#include <random>

#include "poncelet/spherical.hpp"

using namespace poncelet;

namespace {

std::mt19937 rng(909);

SpherePoint random_northern() {
    std::uniform_real_distribution<double> d(-1, 1);
    while (true) {
        Eigen::Vector3d v(d(rng), d(rng), std::abs(d(rng)) + 0.05);
        if (v.norm() > 0.1) return SpherePoint(v);
    }
}

// off-center ellipse/circle triangle family, scaled by s about the origin;
// asymmetric enough that the lifted center locus bends visibly
PonceletConfig fig_family(double s) {
    return find_family(Ellipse{2 * s, s, 0, 0, 0}.conic(),
                       Conic::circle(0.3 * s, 0.2 * s, s), 3, 1);
}

}  // namespace

TEST_CASE("central projection and lift") {
    CHECK(distance(central_project(SpherePoint(0, 0, 1)), {0, 0}) < 1e-15);
    SpherePoint l = lift({1, 0});
    CHECK((l.v - Eigen::Vector3d(1, 0, 1) / std::sqrt(2.0)).norm() < 1e-15);
    CHECK_THROWS_AS(central_project(SpherePoint(1, 0, -0.5)), SouthernPoint);

    for (int it = 0; it < 100; ++it) {
        SpherePoint p = random_northern();
        CHECK((lift(central_project(p)).v - p.v).norm() < 1e-14);
    }
}

TEST_CASE("spherical center of mass") {
    SpherePoint cm = spherical_cm({1, 0, 0}, {0, 1, 0}, {0, 0, 1});
    CHECK((cm.v - Eigen::Vector3d(1, 1, 1) / std::sqrt(3.0)).norm() < 1e-15);

    // clustered triangle near the pole stays near the pole
    SpherePoint near_pole =
        spherical_cm({0.01, 0, 1}, {0, 0.02, 1}, {-0.01, -0.01, 1});
    CHECK((near_pole.v - Eigen::Vector3d(0, 0, 1)).norm() < 0.03);

    double s3 = std::sqrt(3.0) / 2;
    CHECK_THROWS_AS(
        spherical_cm({1, 0, 0}, {-0.5, s3, 0}, {-0.5, -s3, 0}),
        AntipodalDegeneracy);
}

TEST_CASE("spherical cm lies on all three medians") {
    for (int it = 0; it < 100; ++it) {
        SpherePoint a = random_northern(), b = random_northern(), c = random_northern();
        SpherePoint cm = spherical_cm(a, b, c);
        // median great circle: plane spanned by a vertex and the opposite
        // midpoint; the cm must lie in each such plane
        const SpherePoint* v[3] = {&a, &b, &c};
        for (int i = 0; i < 3; ++i) {
            Eigen::Vector3d mid = (v[(i + 1) % 3]->v + v[(i + 2) % 3]->v).normalized();
            Eigen::Vector3d normal = v[i]->v.cross(mid);
            if (normal.norm() < 1e-6) continue;
            CHECK(std::abs(normal.normalized().dot(cm.v)) < 1e-10);
        }
    }
}

TEST_CASE("spherical cm is rotation equivariant") {
    Eigen::Matrix3d r =
        Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
    for (int it = 0; it < 25; ++it) {
        SpherePoint a = random_northern(), b = random_northern(), c = random_northern();
        SpherePoint cm = spherical_cm(a, b, c);
        SpherePoint cmr = spherical_cm(SpherePoint(r * a.v), SpherePoint(r * b.v),
                                       SpherePoint(r * c.v));
        CHECK((cmr.v - r * cm.v).norm() < 1e-12);
    }
}

TEST_CASE("collinear points lift onto one great circle") {
    std::uniform_real_distribution<double> d(-1, 1);
    for (int it = 0; it < 50; ++it) {
        CPoint p(d(rng), d(rng));
        CPoint dir(d(rng), d(rng));
        Eigen::Vector3d a = lift(p).v, b = lift(p + dir).v, c = lift(p + dir * 2.3).v;
        // coplanar with the origin: triple product vanishes
        CHECK(std::abs(a.cross(b).dot(c)) < 1e-12);
    }
}

TEST_CASE("projected spherical locus is not a conic") {
    SphericalLocusReport rep = spherical_locus_experiment(fig_family(1.0), 50);
    CHECK(rep.skipped == 0);
    CHECK(rep.planar_residual < 1e-7);
    CHECK(rep.residual > 1e-3);
    CHECK(rep.residual > 1e3 * rep.planar_residual);
}

TEST_CASE("flat limit: shrinking the configuration restores conicity") {
    double prev = 1e300;
    for (double s : {1.0, 0.5, 0.25}) {
        SphericalLocusReport rep = spherical_locus_experiment(fig_family(s), 50);
        CHECK(rep.residual < prev);
        prev = rep.residual;
    }
}

TEST_CASE("concentric control collapses to a single point") {
    PonceletConfig cfg = find_family(Conic::circle(0, 0, 1), Conic::circle(0, 0, 1), 3, 1);
    SphericalLocusReport rep = spherical_locus_experiment(cfg, 50);
    for (const CPoint& p : rep.locus) CHECK(p.norm() < 1e-9);
    CHECK(rep.residual < 1e-9);
}
