#include "poncelet/cp2.hpp"

#include <algorithm>
#include <cmath>

namespace poncelet {

namespace {

Vec3 cross(const Vec3& u, const Vec3& w) {
    return Vec3(u(1) * w(2) - u(2) * w(1),
                u(2) * w(0) - u(0) * w(2),
                u(0) * w(1) - u(1) * w(0));
}

int argmax_abs(const Vec3& v) {
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(v(i)) > std::abs(v(best))) best = i;
    return best;
}

}  // namespace

double chordal(const Vec3& u, const Vec3& w) {
    double nu = u.norm(), nw = w.norm();
    if (nu == 0.0 || nw == 0.0) throw DegenerateInput("zero homogeneous vector");
    return cross(u, w).norm() / (nu * nw);
}

bool same_up_to_scale(const Vec3& u, const Vec3& w, double tol) {
    return chordal(u, w) < tol;
}

Vec3 normalize_max(const Vec3& v) {
    int i = argmax_abs(v);
    if (std::abs(v(i)) == 0.0) throw DegenerateInput("zero homogeneous vector");
    return v / v(i);
}

double Conic::residual(const HomPoint& p) const {
    double nm = m.norm();
    double np = p.v.squaredNorm();
    if (nm == 0.0 || np == 0.0) throw DegenerateInput("zero conic or point");
    return std::abs(eval(p)) / (nm * np);
}

int Conic::rank(double tol) const {
    Eigen::JacobiSVD<Mat3> svd(m);
    auto sv = svd.singularValues();
    if (sv(0) == 0.0) return 0;
    int r = 0;
    for (int i = 0; i < 3; ++i)
        if (sv(i) > tol * sv(0)) ++r;
    return r;
}

Conic Conic::from_coeffs(cplx A, cplx B, cplx C, cplx D, cplx E, cplx F) {
    Mat3 m;
    m << A, C / 2.0, D / 2.0,
         C / 2.0, B, E / 2.0,
         D / 2.0, E / 2.0, F;
    return Conic(m);
}

Conic Conic::circle(cplx cx, cplx cy, cplx r) {
    return from_coeffs(1, 1, 0, -2.0 * cx, -2.0 * cy, cx * cx + cy * cy - r * r);
}

HomLine join(const HomPoint& p, const HomPoint& q) {
    if (same_point(p, q)) throw DegenerateInput("join of coincident points");
    return HomLine(cross(p.v, q.v));
}

HomPoint meet(const HomLine& l, const HomLine& m) {
    if (same_line(l, m)) throw DegenerateInput("meet of coincident lines");
    return HomPoint(cross(l.v, m.v));
}

HomLine tangent_at(const Conic& c, const HomPoint& p, double on_tol) {
    if (c.residual(p) > on_tol) throw NotOnConic("tangent_at: point not on conic");
    return HomLine(c.m * p.v);
}

namespace detail {

std::pair<cplx, cplx> solve_quadratic(cplx a, cplx b, cplx c) {
    cplx disc = b * b - 4.0 * a * c;
    cplx sq = std::sqrt(disc);
    // pick the sign that avoids cancellation in b + sq
    if (std::abs(b + sq) < std::abs(b - sq)) sq = -sq;
    cplx q = -0.5 * (b + sq);
    cplx r1 = q / a;
    cplx r2 = (std::abs(q) > 0.0) ? c / q : -b / a - r1;
    auto polish = [&](cplx z) {
        cplx f = (a * z + b) * z + c;
        cplx df = 2.0 * a * z + b;
        if (std::abs(df) > 0.0) z -= f / df;
        return z;
    };
    return {polish(r1), polish(r2)};
}

std::array<cplx, 3> solve_cubic(cplx a, cplx b, cplx c, cplx d) {
    // depressed cubic t^3 + p t + q, z = t - b/(3a)
    cplx inv_a = 1.0 / a;
    cplx B = b * inv_a, C = c * inv_a, D = d * inv_a;
    cplx shift = B / 3.0;
    cplx p = C - B * B / 3.0;
    cplx q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
    std::array<cplx, 3> roots;
    cplx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    cplx u3 = -q / 2.0 + disc;
    if (std::abs(u3) < std::abs(-q / 2.0 - disc)) u3 = -q / 2.0 - disc;
    cplx u = std::pow(u3, 1.0 / 3.0);
    const cplx omega(-0.5, std::sqrt(3.0) / 2.0);
    for (int k = 0; k < 3; ++k) {
        cplx uk = u * std::pow(omega, k);
        cplx t = (std::abs(uk) > 0.0) ? uk - p / (3.0 * uk) : cplx(0);
        roots[k] = t - shift;
    }
    for (auto& z : roots) {  // Newton polish
        for (int it = 0; it < 2; ++it) {
            cplx f = ((a * z + b) * z + c) * z + d;
            cplx df = (3.0 * a * z + 2.0 * b) * z + c;
            if (std::abs(df) > 0.0) z -= f / df;
        }
    }
    return roots;
}

}  // namespace detail

std::pair<HomPoint, HomPoint> line_conic_intersect(const Conic& c, const HomLine& l) {
    // span the line by its two largest cross products with basis vectors
    Vec3 cand[3];
    for (int i = 0; i < 3; ++i) {
        Vec3 e = Vec3::Zero();
        e(i) = 1.0;
        cand[i] = cross(l.v, e);
    }
    std::sort(cand, cand + 3, [](const Vec3& u, const Vec3& w) { return u.norm() > w.norm(); });
    Vec3 p0 = cand[0], p1 = cand[1];
    // the two largest can still be near-parallel; fall back to the third
    if (chordal(p0, p1) < 1e-6) p1 = cand[2];

    cplx c00 = (p0.transpose() * c.m * p0)(0);
    cplx c01 = (p0.transpose() * c.m * p1)(0);
    cplx c11 = (p1.transpose() * c.m * p1)(0);
    // homogeneous quadratic c11 s^2 + 2 c01 s t + c00 t^2 in [s:t], point = s p1 + t p0
    cplx s1, t1, s2, t2;
    if (std::abs(c11) >= std::abs(c00)) {
        auto [r1, r2] = detail::solve_quadratic(c11, 2.0 * c01, c00);
        s1 = r1; t1 = 1.0; s2 = r2; t2 = 1.0;
    } else {
        auto [r1, r2] = detail::solve_quadratic(c00, 2.0 * c01, c11);
        s1 = 1.0; t1 = r1; s2 = 1.0; t2 = r2;
    }
    HomPoint q1(s1 * p1 + t1 * p0), q2(s2 * p1 + t2 * p0);
    // double root: report the same point twice
    if (same_point(q1, q2, 1e-7)) q2 = q1;
    return {q1, q2};
}

std::pair<HomLine, HomLine> tangents_from(const Conic& c, const HomPoint& p) {
    HomLine polar(c.m * p.v);
    if (polar.v.norm() == 0.0) throw DegenerateInput("tangents_from: point annihilated by conic");
    auto [c1, c2] = line_conic_intersect(c, polar);
    return {HomLine(c.m * c1.v), HomLine(c.m * c2.v)};
}

Mat3 adjugate(const Mat3& m) {
    Mat3 a;
    a(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    a(0, 1) = -(m(0, 1) * m(2, 2) - m(0, 2) * m(2, 1));
    a(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
    a(1, 0) = -(m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0));
    a(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
    a(1, 2) = -(m(0, 0) * m(1, 2) - m(0, 2) * m(1, 0));
    a(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
    a(2, 1) = -(m(0, 0) * m(2, 1) - m(0, 1) * m(2, 0));
    a(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return a.transpose();
}

Conic dual_conic(const Conic& c) {
    if (c.rank() < 3) throw SingularConic("dual of a degenerate conic");
    return Conic(adjugate(c.m));
}

std::pair<HomLine, HomLine> split_degenerate_conic(const Conic& c) {
    Mat3 A = c.m / c.m.norm();
    Mat3 B = adjugate(A);
    int bi = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(B(i, i)) > std::abs(B(bi, bi))) bi = i;

    Mat3 C = A;
    if (std::abs(B(bi, bi)) > 1e-14) {
        // rank 2: recover the singular point and reduce A to rank 1
        cplx beta = std::sqrt(-B(bi, bi));
        Vec3 p = B.col(bi) / beta;
        Mat3 Mp;
        Mp << 0, p(2), -p(1),
              -p(2), 0, p(0),
              p(1), -p(0), 0;
        C = A + Mp;
    }
    // C = g h^T: take the largest entry's row and column
    int ri = 0, cj = 0;
    double best = -1.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (std::abs(C(i, j)) > best) { best = std::abs(C(i, j)); ri = i; cj = j; }
    if (best < 1e-12) throw PencilSplitFailure("degenerate conic split produced zero matrix");
    return {HomLine(C.row(ri).transpose()), HomLine(C.col(cj))};
}

std::vector<HomPoint> conic_conic_intersect(const Conic& c1, const Conic& c2) {
    Mat3 M1 = c1.m / c1.m.norm();
    Mat3 M2 = c2.m / c2.m.norm();
    {
        // scale-equivalence of the matrices themselves
        cplx s = (M2.conjugate().cwiseProduct(M1)).sum() / M2.squaredNorm();
        if ((M1 - s * M2).norm() < 1e-10)
            throw IdenticalConics("conic_conic_intersect: identical conics");
    }

    // det(M1 + t M2) as a cubic in t, coefficients by interpolation at 4 nodes
    auto det_at = [&](cplx t) { return (M1 + t * M2).determinant(); };
    cplx d0 = det_at(0.0), d1 = det_at(1.0), dm1 = det_at(-1.0), d2 = det_at(2.0);
    // d(t) = a t^3 + b t^2 + c t + d
    cplx d = d0;
    cplx b = (d1 + dm1) / 2.0 - d0;
    cplx a = (d2 - 4.0 * b - d0 - d1 + dm1) / 6.0;
    cplx c = (d1 - dm1) / 2.0 - a;

    // candidate degenerate members: cubic roots plus lambda = infinity (M2)
    struct Cand { Mat3 m; double score; };
    std::vector<Cand> cands;
    auto add = [&](const Mat3& m) {
        Mat3 n = m / m.norm();
        cands.push_back({n, std::abs(n.determinant())});
    };
    if (std::abs(a) > 1e-14 * std::max({std::abs(b), std::abs(c), std::abs(d)})) {
        for (cplx t : detail::solve_cubic(a, b, c, d)) add(M1 + t * M2);
    } else {
        auto [t1, t2] = detail::solve_quadratic(b, c, d);
        add(M1 + t1 * M2);
        add(M1 + t2 * M2);
    }
    add(M2);
    add(M1);
    std::sort(cands.begin(), cands.end(),
              [](const Cand& x, const Cand& y) { return x.score < y.score; });
    if (cands.front().score > 1e-6)
        throw PencilSplitFailure("no numerically degenerate member in the pencil");

    auto [g, h] = split_degenerate_conic(Conic(cands.front().m));

    // intersect both lines with the less-degenerate original conic
    const Conic& base = (std::abs(M1.determinant()) >= std::abs(M2.determinant())) ? c1 : c2;
    const Conic& other = (&base == &c1) ? c2 : c1;
    std::vector<HomPoint> pts;
    auto [p1, p2] = line_conic_intersect(base, g);
    auto [p3, p4] = line_conic_intersect(base, h);
    pts = {p1, p2, p3, p4};

    // Newton polish on the pair of conic equations in an affine chart
    for (auto& p : pts) {
        for (int it = 0; it < 4; ++it) {
            Vec3 v = p.v / p.v.norm();
            int fix = argmax_abs(v);
            int u0 = (fix + 1) % 3, u1 = (fix + 2) % 3;
            cplx f1 = (v.transpose() * base.m * v)(0) / base.m.norm();
            cplx f2 = (v.transpose() * other.m * v)(0) / other.m.norm();
            Vec3 g1 = 2.0 * (base.m * v) / base.m.norm();
            Vec3 g2 = 2.0 * (other.m * v) / other.m.norm();
            Eigen::Matrix2cd J;
            J << g1(u0), g1(u1), g2(u0), g2(u1);
            Eigen::FullPivLU<Eigen::Matrix2cd> lu(J);
            if (!lu.isInvertible()) break;  // tangential intersection; leave as is
            Eigen::Vector2cd step = lu.solve(Eigen::Vector2cd(f1, f2));
            if (!step.allFinite() || step.norm() > 0.5) break;
            v(u0) -= step(0);
            v(u1) -= step(1);
            p.v = v;
        }
    }
    return pts;
}

bool general_position_check(const Conic& c1, const Conic& c2, double tol) {
    if (c1.rank() < 3 || c2.rank() < 3)
        throw SingularConic("general_position_check needs rank-3 conics");
    auto pts = conic_conic_intersect(c1, c2);
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            if (same_point(pts[i], pts[j], tol)) return false;
    return true;
}

}  // namespace poncelet
