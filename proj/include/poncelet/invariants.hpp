#pragma once

// Experiment harness over the Poncelet engine: center loci with conic
// fitting, the tangent-polygon area product, and quadrilateral diagonal
// tests.

#include <utility>
#include <vector>

#include "poncelet/centers.hpp"
#include "poncelet/dynamics.hpp"

namespace poncelet {

struct ConicFit {
    // A x^2 + B y^2 + C xy + D x + E y + F = 0, unit-norm coefficient vector
    std::array<cplx, 6> coeffs{};
    double residual = 0.0;  // smallest singular value of the design matrix / sqrt(N)
    bool degenerate = false;  // fitted conic matrix has rank < 3

    Conic conic() const;
};

// Least-squares conic through >= 6 points; the design matrix is built after
// bounding-box normalization and the coefficients are mapped back to the
// input frame. Throws TooFewPoints.
ConicFit conic_fit(const std::vector<CPoint>& points);

// Residual of the same fit with an extra x^3 column; an honest conic locus
// gains little from it.
double conic_fit_cubic_control(const std::vector<CPoint>& points);

struct CenterLocus {
    std::vector<CPoint> points;
    int skipped = 0;  // samples whose polygon area was below threshold
};

// m centers over the uniform t-grid of the family. Throws
// AllSamplesDegenerate when no sample survives.
CenterLocus center_locus(const PonceletConfig& config, CenterKind kind, int m);

// Polygon cut out by the tangents to `outer` at the vertices of p; vertex j
// is the meet of the tangents at V_j and V_{j+1}. Throws VertexAtInfinity
// when consecutive tangents are parallel.
Polygon tangent_polygon(const Polygon& p, const Conic& outer);

struct ScanReport {
    std::vector<std::pair<double, double>> samples;  // (t, A(P)*A(Q))
    double mean = 0.0;
    double max_relative_deviation = 0.0;
    int skipped = 0;  // tangent polygon had a vertex at infinity
};

// A(P_t) * A(Q_t) over m uniform family samples.
ScanReport area_product_scan(const PonceletConfig& config, int m = 64);

// Scale-normalized parallelism of the diagonals V1 V3 and V2 V4.
bool diagonals_parallel(const Polygon& quad, double tol = 1e-10);

struct QuadDiagonalReport {
    int samples = 0;
    int skipped = 0;                // degenerate-area samples
    bool bowtie_consistent = true;  // per sample: area ~ 0 iff diagonals parallel
    CPoint intersection_mean;
    double intersection_spread = 0.0;  // max offset from the mean, relative to diameter
    double max_diameter = 0.0;
};

// Diagonal statistics over an n = 4 family.
QuadDiagonalReport quad_diagonal_tests(const PonceletConfig& config, int m = 64);

}  // namespace poncelet
