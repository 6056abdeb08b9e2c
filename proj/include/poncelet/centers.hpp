#pragma once

// Areas and centers of (possibly complex) polygons: the shoelace area, the
// Circumcenter of Mass and the lamina center of mass in both coordinate and
// triangulated form, plus the collapse machinery used to study center limits
// at degenerate polygons.

#include <array>
#include <functional>
#include <vector>

#include "poncelet/cp2.hpp"

namespace poncelet {

// Affine point of the complexified plane.
struct CPoint {
    cplx x{}, y{};

    CPoint() = default;
    CPoint(cplx xx, cplx yy) : x(xx), y(yy) {}

    CPoint operator+(const CPoint& o) const { return {x + o.x, y + o.y}; }
    CPoint operator-(const CPoint& o) const { return {x - o.x, y - o.y}; }
    CPoint operator*(cplx s) const { return {x * s, y * s}; }
    CPoint operator/(cplx s) const { return {x / s, y / s}; }
    double norm() const { return std::sqrt(std::norm(x) + std::norm(y)); }
};

inline double distance(const CPoint& a, const CPoint& b) { return (a - b).norm(); }

struct Polygon {
    std::vector<CPoint> vertices;
    std::vector<int> infinite;  // indices whose vertex escaped to infinity

    Polygon() = default;
    explicit Polygon(std::vector<CPoint> vs) : vertices(std::move(vs)) {}

    int n() const { return static_cast<int>(vertices.size()); }
    bool affine() const { return infinite.empty(); }
    const CPoint& at(int i) const {  // cyclic indexing
        int k = i % n();
        if (k < 0) k += n();
        return vertices[static_cast<size_t>(k)];
    }
    double diameter() const;
};

using Triangle = std::array<int, 3>;
using Triangulation = std::vector<Triangle>;

cplx polygon_area(const Polygon& p);
cplx triangle_area(const CPoint& a, const CPoint& b, const CPoint& c);

// Scale-aware zero test used wherever a center divides by the area.
bool area_is_zero(const Polygon& p, cplx area);

CPoint circumcenter(const CPoint& a, const CPoint& b, const CPoint& c);
CPoint centroid(const CPoint& a, const CPoint& b, const CPoint& c);
// Centroid of a triangle with a doubled vertex: (2 V_i + V_j) / 3.
CPoint degenerate_centroid(const CPoint& vi, const CPoint& vj);

// Coordinate formulas.
CPoint ccm(const Polygon& p);
CPoint cm2(const Polygon& p);

// Triangulated equivalents; any combinatorial triangulation of the index
// cycle gives the same result.
CPoint ccm_from_triangulation(const Polygon& p, const Triangulation& t);
CPoint cm2_from_triangulation(const Polygon& p, const Triangulation& t);

Triangulation fan_triangulation(int n, int apex = 0);
Triangulation zigzag_triangulation(int n);

// Triangulation adapted to a collapse: `labels[i]` names the limit vertex of
// vertex i, and every produced triangle has exactly two vertices with equal
// labels.
Triangulation collapse_triangulation(const Polygon& p, const std::vector<int>& labels);

enum class CenterKind { CCM, CM2 };

CPoint polygon_center(const Polygon& p, CenterKind kind);

using FamilySampler = std::function<Polygon(double)>;

struct CenterLimitReport {
    CPoint limit;
    std::vector<double> cauchy;        // |c_k - c_{k-1}|
    std::vector<double> cauchy_ratio;  // successive quotients
    double max_ratio_error = 0.0;      // worst |ratio - t_ratio| / t_ratio
    double area_fit_residual = 0.0;    // worst linear-fit residual over collapse triangles
    bool converged = false;
};

// Evaluates the chosen center along ts (descending towards 0), checks Cauchy
// decay against the t-ratio, extrapolates the limit, and verifies that each
// collapse-triangle area vanishes linearly in t.
CenterLimitReport center_limit(const FamilySampler& sampler, CenterKind kind,
                               const std::vector<double>& ts);

// Default geometric t-sequence 1e-2 * 2^-j, j = 0..10.
std::vector<double> default_t_sequence();

// Cluster the extrapolated vertex limits of a collapsing family into labels
// usable by collapse_triangulation.
std::vector<int> collapse_labels(const FamilySampler& sampler, const std::vector<double>& ts,
                                 double cluster_tol = 1e-4);

struct DegenerationJet {
    int index = 0;
    CPoint base;       // V_i
    CPoint direction;  // k_i
    cplx lambda{1.0};  // multiplier of the paired vertex, if any
    bool has_lambda = false;
    double residual = 0.0;  // max linear-model misfit over the sample range
};

// Least-squares fit of W_i(t) = V_i + k_i t over ts; when `partner` >= 0 also
// fits the multiplier lambda of the partner vertex against k_i.
DegenerationJet fit_degeneration_jet(const FamilySampler& sampler, int index,
                                     const std::vector<double>& ts, int partner = -1);

}  // namespace poncelet
