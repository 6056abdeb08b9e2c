#pragma once

// Projective primitives over the complexified plane: homogeneous points and
// lines, conics as symmetric 3x3 complex matrices, incidence, tangency,
// duality and the four kinds of intersection used by the Poncelet engine.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "poncelet/errors.hpp"

namespace poncelet {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3cd;

inline constexpr double kScaleTol = 1e-9;  // homogeneous equality tolerance

struct HomPoint {
    Vec3 v;
    HomPoint() : v(Vec3::Zero()) {}
    explicit HomPoint(Vec3 u) : v(std::move(u)) {}
    HomPoint(cplx x, cplx y, cplx z) : v(x, y, z) {}
};

struct HomLine {
    Vec3 v;
    HomLine() : v(Vec3::Zero()) {}
    explicit HomLine(Vec3 u) : v(std::move(u)) {}
    HomLine(cplx a, cplx b, cplx c) : v(a, b, c) {}
};

// Distance between projective classes [u], [w]: |u x w| / (|u||w|).
// Zero exactly when the two are scale-equivalent; the cross product here is
// the bilinear one (no conjugation), which is what incidence algebra needs.
double chordal(const Vec3& u, const Vec3& w);

bool same_up_to_scale(const Vec3& u, const Vec3& w, double tol = kScaleTol);

inline bool same_point(const HomPoint& p, const HomPoint& q, double tol = kScaleTol) {
    return same_up_to_scale(p.v, q.v, tol);
}
inline bool same_line(const HomLine& l, const HomLine& m, double tol = kScaleTol) {
    return same_up_to_scale(l.v, m.v, tol);
}

// Divide by the coordinate of largest magnitude; canonical representative
// used for printing and componentwise comparisons.
Vec3 normalize_max(const Vec3& v);

// Plain bilinear sum, no conjugation.
inline cplx incidence(const HomLine& l, const HomPoint& p) {
    return l.v.cwiseProduct(p.v).sum();
}

struct Conic {
    Mat3 m;  // symmetric, up to scale

    Conic() : m(Mat3::Zero()) {}
    explicit Conic(const Mat3& mat) : m(0.5 * (mat + mat.transpose())) {}

    cplx eval(const HomPoint& p) const { return (p.v.transpose() * m * p.v)(0); }
    // |p^T C p| after normalizing both the matrix and the point.
    double residual(const HomPoint& p) const;
    int rank(double tol = 1e-9) const;

    // Affine conic A x^2 + B y^2 + C xy + D x + E y + F = 0.
    static Conic from_coeffs(cplx A, cplx B, cplx C, cplx D, cplx E, cplx F);
    // Circle (x-cx)^2 + (y-cy)^2 = r^2.
    static Conic circle(cplx cx, cplx cy, cplx r);
};

HomLine join(const HomPoint& p, const HomPoint& q);
HomPoint meet(const HomLine& l, const HomLine& m);

HomLine tangent_at(const Conic& c, const HomPoint& p, double on_tol = 1e-7);

// Both intersection points of l with C; a tangency is reported as the same
// point twice.
std::pair<HomPoint, HomPoint> line_conic_intersect(const Conic& c, const HomLine& l);

// Both tangents from p to C; for p on C the tangent at p is returned twice.
std::pair<HomLine, HomLine> tangents_from(const Conic& c, const HomPoint& p);

Conic dual_conic(const Conic& c);
Mat3 adjugate(const Mat3& m);

// Four intersection points, with multiplicity, via a degenerate member of the
// pencil c1 + lambda c2 split into a line pair.
std::vector<HomPoint> conic_conic_intersect(const Conic& c1, const Conic& c2);

// Splits a rank<=2 conic into its two lines (equal lines for rank 1).
std::pair<HomLine, HomLine> split_degenerate_conic(const Conic& c);

bool general_position_check(const Conic& c1, const Conic& c2, double tol = 1e-5);

namespace detail {
// Roots of a z^2 + b z + c with complex coefficients, one Newton polish step.
std::pair<cplx, cplx> solve_quadratic(cplx a, cplx b, cplx c);
// All roots of a z^3 + b z^2 + c z + d (a != 0), Cardano plus polish.
std::array<cplx, 3> solve_cubic(cplx a, cplx b, cplx c, cplx d);
}  // namespace detail

}  // namespace poncelet
