#pragma once

// Spherical side of the story: central projection between the northern
// hemisphere and the plane z = 1, the spherical triangle center of mass, and
// the experiment showing its projected locus is not a conic.

#include <Eigen/Dense>

#include "poncelet/invariants.hpp"

namespace poncelet {

// Unit vector on the sphere; the northern hemisphere (z > 0) is the domain of
// the central projection.
struct SpherePoint {
    Eigen::Vector3d v;

    explicit SpherePoint(const Eigen::Vector3d& w) : v(w.normalized()) {}
    SpherePoint(double x, double y, double z) : SpherePoint(Eigen::Vector3d(x, y, z)) {}
};

// (x, y, z) -> (x/z, y/z); throws SouthernPoint unless z > 0.
CPoint central_project(const SpherePoint& p);

// (x, y) -> (x, y, 1) / norm; requires a real affine point.
SpherePoint lift(const CPoint& q);

// Center of mass of a spherical triangle: the normalized vertex sum, which is
// also where the three medians meet. Throws AntipodalDegeneracy when the sum
// vanishes.
SpherePoint spherical_cm(const SpherePoint& a, const SpherePoint& b, const SpherePoint& c);

struct SphericalLocusReport {
    std::vector<CPoint> locus;     // projected spherical centers over the t-grid
    double residual = 0.0;         // conic-fit residual of the projected locus
    double planar_residual = 0.0;  // control: planar CM2 locus on the same grid
    int skipped = 0;               // degenerate-area samples
};

// For each family sample: lift the triangle, take the spherical center,
// project back, and fit a conic to the resulting locus; the planar CM2 locus
// serves as the noise-floor control.
SphericalLocusReport spherical_locus_experiment(const PonceletConfig& config, int m = 50);

}  // namespace poncelet
