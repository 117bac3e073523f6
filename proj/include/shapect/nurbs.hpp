#pragma once

#include <vector>

#include "shapect/geometry.hpp"

namespace shapect::nurbs {

/// Ordered breakpoints t_1 <= ... <= t_K spanning [0, 1]. The periodic
/// uniform flavor used throughout is strictly increasing with spacing
/// 1/(K-1).
struct KnotVector {
    std::vector<double> knots;

    static KnotVector periodic_uniform(int count);

    int size() const { return static_cast<int>(knots.size()); }
    double operator[](int i) const { return knots[static_cast<std::size_t>(i)]; }

    /// Non-decreasing, first 0, last 1; throws Error otherwise.
    void validate() const;
    bool is_uniform(double tol = 1e-12) const;
};

/// Control point in polar coordinates (about the grid center, for curves
/// living in a raster frame) with a non-negative rational weight.
struct ControlPoint {
    double r = 0.0;
    double theta = 0.0;
    double weight = 1.0;

    Vec2 cartesian() const { return {r * std::cos(theta), r * std::sin(theta)}; }
    static ControlPoint from_cartesian(Vec2 p, double weight = 1.0);
};

/// Rational spline curve over a periodic uniform knot vector. A closed curve
/// cyclically extends its control list by the first `degree` points; with
/// n+1 original points the knot vector then has n + 2*degree + 2 entries and
/// the user parameter t in [0,1] maps affinely onto the knot span where all
/// original points act, so S(0) = S(1).
struct NurbsCurve {
    int degree = 3;
    std::vector<ControlPoint> points;
    KnotVector knots;
    bool closed = true;

    /// Closed curve on a periodic uniform knot vector, the default
    /// construction everywhere in this library.
    static NurbsCurve closed_uniform(std::vector<ControlPoint> pts, int degree = 3);

    int point_count() const { return static_cast<int>(points.size()); }
    /// Number of basis functions: point_count() + degree when closed.
    int extended_count() const;
    /// Control point for an extended index (cyclic for closed curves).
    const ControlPoint& extended_point(int i) const;

    void validate() const;
};

/// Cox-de Boor basis N_{i,p}(t) on the raw knot domain, 0 <= t <= 1.
/// Zero-degree pieces are half-open ([t_i, t_{i+1})) and any 0/0 term
/// contributes 0. Throws Error for an out-of-range index or parameter.
double basis(int i, int p, double t, const KnotVector& knots);

/// Rational basis R_{i,p}(t) of the curve at user parameter t in [0,1];
/// i indexes the (extended) control list. Throws Error when the weighted
/// denominator vanishes.
double rational_basis(int i, int p, double t, const NurbsCurve& curve);

/// Curve point at user parameter t in [0, 1].
Vec2 eval_curve(const NurbsCurve& curve, double t);

/// S(k/m) for k = 0..m-1; m >= 3. A closed polyline approximating the curve.
std::vector<Vec2> sample_polyline(const NurbsCurve& curve, int m);

/// Precomputed rational-basis weights for repeatedly sampling closed curves
/// that share a point count, degree and sample count. For each sample the
/// extended-basis values are folded back onto the original control indices,
/// so the table works for any control positions and weights.
class BasisTable {
public:
    static BasisTable make(int point_count, int degree, int samples);

    /// Polyline of the closed curve through `pts` (size must match).
    std::vector<Vec2> sample(const std::vector<ControlPoint>& pts) const;

    int samples() const { return samples_; }
    int point_count() const { return point_count_; }
    int degree() const { return degree_; }

private:
    int point_count_ = 0;
    int degree_ = 0;
    int samples_ = 0;
    std::vector<double> folded_; // samples x point_count, row-major
};

} // namespace shapect::nurbs
