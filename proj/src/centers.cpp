#include "poncelet/centers.hpp"

#include <algorithm>
#include <cmath>
#include <list>

namespace poncelet {

namespace {

cplx sq(const CPoint& p) { return p.x * p.x + p.y * p.y; }  // bilinear, no conjugation

// A_i * C_i for a triangle, evaluated as a bounded product: the 2x2
// circumcenter system has determinant 8 A_i, so adj(M) rhs / 8 stays finite
// as the triangle flattens.
CPoint weighted_circumcenter_term(const CPoint& a, const CPoint& b, const CPoint& c) {
    cplx m00 = 2.0 * (b.x - a.x), m01 = 2.0 * (b.y - a.y);
    cplx m10 = 2.0 * (c.x - a.x), m11 = 2.0 * (c.y - a.y);
    cplx r0 = sq(b) - sq(a), r1 = sq(c) - sq(a);
    return {(m11 * r0 - m01 * r1) / 8.0, (-m10 * r0 + m00 * r1) / 8.0};
}

}  // namespace

double Polygon::diameter() const {
    double d = 0.0;
    for (size_t i = 0; i < vertices.size(); ++i)
        for (size_t j = i + 1; j < vertices.size(); ++j)
            d = std::max(d, distance(vertices[i], vertices[j]));
    return d;
}

cplx polygon_area(const Polygon& p) {
    cplx a = 0.0;
    int n = p.n();
    for (int i = 0; i < n; ++i) {
        const CPoint& u = p.at(i);
        const CPoint& v = p.at(i + 1);
        a += u.x * v.y - v.x * u.y;
    }
    return 0.5 * a;
}

cplx triangle_area(const CPoint& a, const CPoint& b, const CPoint& c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

bool area_is_zero(const Polygon& p, cplx area) {
    double d = p.diameter();
    return std::abs(area) < 1e-12 * d * d;
}

CPoint circumcenter(const CPoint& a, const CPoint& b, const CPoint& c) {
    cplx det = 8.0 * triangle_area(a, b, c);
    double scale = std::max({(b - a).norm(), (c - a).norm(), (c - b).norm()});
    if (std::abs(det) < 1e-12 * scale * scale)
        throw CollinearPoints("circumcenter of collinear points");
    CPoint w = weighted_circumcenter_term(a, b, c);
    return w / (det / 8.0);
}

CPoint centroid(const CPoint& a, const CPoint& b, const CPoint& c) {
    return (a + b + c) / 3.0;
}

CPoint degenerate_centroid(const CPoint& vi, const CPoint& vj) {
    return (vi * 2.0 + vj) / 3.0;
}

CPoint ccm(const Polygon& p) {
    cplx a = polygon_area(p);
    if (area_is_zero(p, a)) throw ZeroArea("ccm of zero-area polygon");
    int n = p.n();
    cplx sx = 0.0, sy = 0.0;
    for (int i = 0; i < n; ++i) {
        cplx w = sq(p.at(i - 1)) - sq(p.at(i + 1));
        sx += p.at(i).y * w;
        sy += -p.at(i).x * w;
    }
    return CPoint(sx, sy) / (4.0 * a);
}

CPoint cm2(const Polygon& p) {
    cplx a = polygon_area(p);
    if (area_is_zero(p, a)) throw ZeroArea("cm2 of zero-area polygon");
    int n = p.n();
    cplx sx = 0.0, sy = 0.0;
    for (int i = 0; i < n; ++i) {
        const CPoint& u = p.at(i);
        const CPoint& v = p.at(i + 1);
        cplx w = u.x * v.y - v.x * u.y;
        sx += w * (u.x + v.x);
        sy += w * (u.y + v.y);
    }
    return CPoint(sx, sy) / (6.0 * a);
}

CPoint ccm_from_triangulation(const Polygon& p, const Triangulation& t) {
    cplx a = polygon_area(p);
    if (area_is_zero(p, a)) throw ZeroArea("ccm of zero-area polygon");
    CPoint sum;
    for (const Triangle& tri : t)
        sum = sum + weighted_circumcenter_term(p.at(tri[0]), p.at(tri[1]), p.at(tri[2]));
    return sum / a;
}

CPoint cm2_from_triangulation(const Polygon& p, const Triangulation& t) {
    cplx a = polygon_area(p);
    if (area_is_zero(p, a)) throw ZeroArea("cm2 of zero-area polygon");
    CPoint sum;
    for (const Triangle& tri : t) {
        cplx ai = triangle_area(p.at(tri[0]), p.at(tri[1]), p.at(tri[2]));
        sum = sum + centroid(p.at(tri[0]), p.at(tri[1]), p.at(tri[2])) * ai;
    }
    return sum / a;
}

Triangulation fan_triangulation(int n, int apex) {
    Triangulation t;
    for (int i = 1; i + 1 < n; ++i)
        t.push_back({apex, (apex + i) % n, (apex + i + 1) % n});
    return t;
}

Triangulation zigzag_triangulation(int n) {
    Triangulation t;
    int lo = 0, hi = n - 1;
    bool from_lo = true;
    while (hi - lo > 1) {
        if (from_lo) {
            t.push_back({lo, lo + 1, hi});
            ++lo;
        } else {
            t.push_back({lo, hi - 1, hi});
            --hi;
        }
        from_lo = !from_lo;
    }
    return t;
}

Triangulation collapse_triangulation(const Polygon& p, const std::vector<int>& labels) {
    int n = p.n();
    if (static_cast<int>(labels.size()) != n)
        throw InvalidPairing("label count does not match polygon size");

    std::vector<int> active(n);
    for (int i = 0; i < n; ++i) active[i] = i;

    auto two_equal = [&](int a, int b, int c) {
        int eq = (labels[a] == labels[b]) + (labels[b] == labels[c]) + (labels[a] == labels[c]);
        return eq == 1;
    };

    Triangulation t;
    while (active.size() > 3) {
        int m = static_cast<int>(active.size());
        int pick = -1;
        // prefer "bending" ears (outer labels equal) over consecutive pairs
        for (int pass = 0; pass < 2 && pick < 0; ++pass) {
            for (int i = 0; i < m; ++i) {
                int a = active[(i + m - 1) % m], b = active[i], c = active[(i + 1) % m];
                if (!two_equal(a, b, c)) continue;
                if (pass == 0 && labels[a] != labels[c]) continue;
                pick = i;
                break;
            }
        }
        if (pick < 0) throw InvalidPairing("no collapse-compatible ear found");
        int a = active[(pick + m - 1) % m], b = active[pick], c = active[(pick + 1) % m];
        t.push_back({a, b, c});
        active.erase(active.begin() + pick);
    }
    if (!two_equal(active[0], active[1], active[2]))
        throw InvalidPairing("final triangle does not collapse to a segment");
    t.push_back({active[0], active[1], active[2]});
    return t;
}

CPoint polygon_center(const Polygon& p, CenterKind kind) {
    return kind == CenterKind::CCM ? ccm(p) : cm2(p);
}

std::vector<double> default_t_sequence() {
    std::vector<double> ts;
    for (int j = 0; j <= 10; ++j) ts.push_back(1e-2 * std::pow(2.0, -j));
    return ts;
}

std::vector<int> collapse_labels(const FamilySampler& sampler, const std::vector<double>& ts,
                                 double cluster_tol) {
    double t1 = ts[ts.size() - 2], t2 = ts.back();
    Polygon p1 = sampler(t1), p2 = sampler(t2);
    int n = p1.n();
    std::vector<CPoint> limits(n);
    for (int i = 0; i < n; ++i) {
        // linear extrapolation of W(t) = V + k t to t = 0
        limits[i] = (p2.vertices[i] * t1 - p1.vertices[i] * t2) / (t1 - t2);
    }
    double d = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) d = std::max(d, distance(limits[i], limits[j]));
    std::vector<int> labels(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        if (labels[i] >= 0) continue;
        labels[i] = next;
        for (int j = i + 1; j < n; ++j)
            if (labels[j] < 0 && distance(limits[i], limits[j]) < cluster_tol * d) labels[j] = next;
        ++next;
    }
    return labels;
}

CenterLimitReport center_limit(const FamilySampler& sampler, CenterKind kind,
                               const std::vector<double>& ts) {
    CenterLimitReport rep;
    std::vector<CPoint> centers;
    centers.reserve(ts.size());
    for (double t : ts) centers.push_back(polygon_center(sampler(t), kind));

    for (size_t k = 1; k < centers.size(); ++k)
        rep.cauchy.push_back(distance(centers[k], centers[k - 1]));

    int increasing = 0;
    for (size_t k = 1; k < rep.cauchy.size(); ++k) {
        double ratio = rep.cauchy[k] / rep.cauchy[k - 1];
        rep.cauchy_ratio.push_back(ratio);
        double expected = ts[k + 1] / ts[k];
        rep.max_ratio_error = std::max(rep.max_ratio_error,
                                       std::abs(ratio - expected) / expected);
        if (ratio > 1.0) ++increasing;
    }
    if (increasing > static_cast<int>(rep.cauchy_ratio.size()) / 2)
        throw NonConvergent("center differences are not decreasing");

    // Richardson extrapolation assuming error proportional to t
    double r = ts.back() / ts[ts.size() - 2];
    CPoint last = centers.back(), prev = centers[centers.size() - 2];
    rep.limit = last + (last - prev) * (r / (1.0 - r));

    // collapse triangulation and per-triangle linear area decay
    std::vector<int> labels = collapse_labels(sampler, ts);
    Triangulation tri = collapse_triangulation(sampler(ts.front()), labels);
    for (const Triangle& T : tri) {
        double stt = 0.0;
        cplx sat = 0.0;
        std::vector<cplx> areas;
        for (double t : ts) {
            Polygon p = sampler(t);
            cplx a = triangle_area(p.at(T[0]), p.at(T[1]), p.at(T[2]));
            areas.push_back(a);
            stt += t * t;
            sat += a * t;
        }
        cplx slope = sat / stt;
        double worst = 0.0;
        for (size_t k = 0; k < ts.size(); ++k)
            worst = std::max(worst, std::abs(areas[k] - slope * ts[k]));
        rep.area_fit_residual = std::max(rep.area_fit_residual,
                                         worst / (std::abs(slope) * ts.front()));
    }

    rep.converged = rep.max_ratio_error < 0.5;
    return rep;
}

DegenerationJet fit_degeneration_jet(const FamilySampler& sampler, int index,
                                     const std::vector<double>& ts, int partner) {
    DegenerationJet jet;
    jet.index = index;

    size_t m = ts.size();
    double s1 = 0.0, st = 0.0, stt = 0.0;
    for (double t : ts) { s1 += 1.0; st += t; stt += t * t; }
    double det = s1 * stt - st * st;

    auto fit_line = [&](const std::vector<cplx>& ys) {
        cplx sy = 0.0, sty = 0.0;
        for (size_t k = 0; k < m; ++k) { sy += ys[k]; sty += ts[k] * ys[k]; }
        cplx b = (stt * sy - st * sty) / det;   // intercept
        cplx a = (s1 * sty - st * sy) / det;    // slope
        return std::pair<cplx, cplx>(b, a);
    };

    std::vector<cplx> xs(m), ys(m), px(m), py(m);
    for (size_t k = 0; k < m; ++k) {
        Polygon p = sampler(ts[k]);
        xs[k] = p.vertices[static_cast<size_t>(index)].x;
        ys[k] = p.vertices[static_cast<size_t>(index)].y;
        if (partner >= 0) {
            px[k] = p.vertices[static_cast<size_t>(partner)].x;
            py[k] = p.vertices[static_cast<size_t>(partner)].y;
        }
    }
    auto [bx, ax] = fit_line(xs);
    auto [by, ay] = fit_line(ys);
    jet.base = {bx, by};
    jet.direction = {ax, ay};

    double worst = 0.0;
    for (size_t k = 0; k < m; ++k) {
        CPoint model = jet.base + jet.direction * ts[k];
        worst = std::max(worst, distance(model, CPoint(xs[k], ys[k])));
    }
    jet.residual = worst / (jet.direction.norm() * ts.front());

    if (partner >= 0) {
        auto [pbx, pax] = fit_line(px);
        auto [pby, pay] = fit_line(py);
        // lambda with k_partner = lambda * k_index
        cplx num = std::conj(ax) * pax + std::conj(ay) * pay;
        cplx den = std::conj(ax) * ax + std::conj(ay) * ay;
        jet.lambda = num / den;
        jet.has_lambda = true;
        (void)pbx; (void)pby;
    }
    return jet;
}

}  // namespace poncelet
