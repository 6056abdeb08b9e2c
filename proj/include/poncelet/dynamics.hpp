#pragma once

// The Poncelet map on flags (point on the outer conic, tangent line to the
// inner conic), closure detection, rotation-number based family search,
// family sampling and the constructive enumeration of degenerate polygons.

#include <vector>

#include "poncelet/centers.hpp"
#include "poncelet/cp2.hpp"

namespace poncelet {

// Real ellipse in axis/center/rotation form; bridge between conic matrices
// and the angular parameterization used for real families.
struct Ellipse {
    double a = 1.0, b = 1.0;   // semi-axes
    double cx = 0.0, cy = 0.0;
    double angle = 0.0;        // rotation of the major-axis frame, radians

    Conic conic() const;
    CPoint point_at(double theta) const;
    double angle_of(const CPoint& p) const;
    Ellipse scaled(double s) const { return {a * s, b * s, cx, cy, angle}; }

    static Ellipse from_conic(const Conic& c);  // throws NotRealNested
};

struct Flag {
    HomPoint point;  // on the outer conic
    HomLine line;    // tangent to the inner conic, through the point
};

struct PonceletConfig {
    Conic outer, inner;
    int n = 3;
    int k = 1;
    double tol = 1e-9;
};

// Throws InvalidFlag unless point-on-outer, line-tangent-to-inner and
// incidence all hold within tol.
void validate_flag(const PonceletConfig& config, const Flag& f, double tol = 1e-6);

// sigma keeps the line and swaps the point for the other intersection with
// the outer conic; at a tangency the point is fixed.
Flag sigma(const PonceletConfig& config, const Flag& f);
// tau keeps the point and swaps the line for the other tangent to the inner
// conic; at a double tangent the line is fixed.
Flag tau(const PonceletConfig& config, const Flag& f);

inline Flag poncelet_step(const PonceletConfig& config, const Flag& f) {
    return tau(config, sigma(config, f));
}

// Distance between the start flag and its n-step image.
double closure_residual(const PonceletConfig& config, const Flag& start);

// Flag at outer-ellipse angle theta, with the tangent chosen so the first
// step advances counterclockwise by less than pi.
Flag real_flag_at(const PonceletConfig& config, double theta);

// n vertices along the orbit of `start`, de-homogenized; a vertex at
// infinity is flagged in Polygon::infinite (its stored value is the
// direction [x:y]).
Polygon trace_polygon(const PonceletConfig& config, const Flag& start);

// Average angular advance per step divided by 2*pi over a real orbit.
double rotation_number(const Conic& outer, const Conic& inner, int iterations);

// Scales `inner_shape` about its center until the n-step orbit closes with
// winding k; bisection on the angular defect. Throws BracketFailure.
PonceletConfig find_family(const Conic& outer, const Conic& inner_shape, int n, int k,
                           double tol = 1e-9);

// Poncelet polygon at family parameter t in [0,1) (outer-ellipse angle
// 2*pi*t, deterministic tangent orientation).
Polygon sample_family(const PonceletConfig& config, double t);

enum class VertexKind { Regular, Bending, Gluing };

struct DegeneratePolygon {
    std::vector<HomPoint> hom_vertices;
    Polygon polygon;
    std::vector<VertexKind> kinds;
    bool finite = true;
    double area_magnitude = 0.0;  // only meaningful when finite
};

struct DegeneratePolygonReport {
    std::vector<DegeneratePolygon> polygons;  // distinct geometric polygons
    int count = 0;                            // labeled count: polygons * n
    double max_area_magnitude = 0.0;          // over finite polygons
    bool structure_ok = false;                // parity-dependent vertex-kind layout
};

// Traces the orbits through all four points of (inner ∩ outer) and all four
// common tangents, deduplicates, classifies vertex kinds and checks the
// expected 4n labeled count. Throws CountMismatch on a wrong count.
DegeneratePolygonReport enumerate_degenerate(const PonceletConfig& config);

}  // namespace poncelet
