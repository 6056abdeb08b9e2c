#include "poncelet/spherical.hpp"

namespace poncelet {

CPoint central_project(const SpherePoint& p) {
    if (p.v(2) <= 1e-12) throw SouthernPoint("central projection needs z > 0");
    return {p.v(0) / p.v(2), p.v(1) / p.v(2)};
}

SpherePoint lift(const CPoint& q) {
    if (std::abs(q.x.imag()) > 1e-9 || std::abs(q.y.imag()) > 1e-9)
        throw NotRealNested("lift needs a real affine point");
    return {q.x.real(), q.y.real(), 1.0};
}

SpherePoint spherical_cm(const SpherePoint& a, const SpherePoint& b, const SpherePoint& c) {
    Eigen::Vector3d s = a.v + b.v + c.v;
    if (s.norm() < 1e-12) throw AntipodalDegeneracy("vertex sum vanishes");
    return SpherePoint(s);
}

SphericalLocusReport spherical_locus_experiment(const PonceletConfig& config, int m) {
    if (config.n != 3) throw DegenerateInput("spherical locus experiment expects n = 3");
    SphericalLocusReport rep;
    std::vector<CPoint> planar;
    for (int i = 0; i < m; ++i) {
        Polygon p = sample_family(config, static_cast<double>(i) / m);
        if (!p.affine() || area_is_zero(p, polygon_area(p))) {
            ++rep.skipped;
            continue;
        }
        rep.locus.push_back(
            central_project(spherical_cm(lift(p.at(0)), lift(p.at(1)), lift(p.at(2)))));
        planar.push_back(cm2(p));
    }
    if (rep.locus.empty())
        throw AllSamplesDegenerate("spherical locus: every sample degenerate");
    rep.residual = conic_fit(rep.locus).residual;
    rep.planar_residual = conic_fit(planar).residual;
    return rep;
}

}  // namespace poncelet
