#include "shapect/nurbs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shapect/error.hpp"

namespace shapect::nurbs {

KnotVector KnotVector::periodic_uniform(int count) {
    if (count < 2) throw Error("KnotVector: need at least 2 knots, got " + std::to_string(count));
    KnotVector kv;
    kv.knots.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        kv.knots[static_cast<std::size_t>(i)] = static_cast<double>(i) / (count - 1);
    kv.knots.front() = 0.0;
    kv.knots.back() = 1.0;
    return kv;
}

void KnotVector::validate() const {
    if (knots.size() < 2) throw Error("KnotVector: fewer than 2 knots");
    if (knots.front() != 0.0 || knots.back() != 1.0)
        throw Error("KnotVector: must start at 0 and end at 1");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (knots[i] < knots[i - 1]) throw Error("KnotVector: knots must be non-decreasing");
}

bool KnotVector::is_uniform(double tol) const {
    if (knots.size() < 2) return false;
    const double h = 1.0 / (static_cast<double>(knots.size()) - 1.0);
    for (std::size_t i = 0; i < knots.size(); ++i)
        if (std::abs(knots[i] - static_cast<double>(i) * h) > tol) return false;
    return true;
}

ControlPoint ControlPoint::from_cartesian(Vec2 p, double weight) {
    ControlPoint cp;
    cp.r = norm(p);
    cp.theta = (cp.r == 0.0) ? 0.0 : std::atan2(p.y, p.x);
    cp.weight = weight;
    return cp;
}

NurbsCurve NurbsCurve::closed_uniform(std::vector<ControlPoint> pts, int degree) {
    NurbsCurve c;
    c.degree = degree;
    c.points = std::move(pts);
    c.closed = true;
    const int n1 = c.point_count();
    c.knots = KnotVector::periodic_uniform(n1 + 2 * degree + 1);
    c.validate();
    return c;
}

int NurbsCurve::extended_count() const {
    return point_count() + (closed ? degree : 0);
}

const ControlPoint& NurbsCurve::extended_point(int i) const {
    return points[static_cast<std::size_t>(i % point_count())];
}

void NurbsCurve::validate() const {
    if (degree < 1) throw Error("NurbsCurve: degree must be >= 1");
    if (point_count() < 3) throw Error("NurbsCurve: need at least 3 control points");
    knots.validate();
    const int expected = extended_count() + degree + 1;
    if (knots.size() != expected)
        throw Error("NurbsCurve: knot count " + std::to_string(knots.size()) +
                    ", expected " + std::to_string(expected));
    for (const ControlPoint& p : points) {
        if (!(p.r >= 0.0) || !std::isfinite(p.r)) throw Error("NurbsCurve: control radius must be finite and >= 0");
        if (!(p.weight >= 0.0)) throw Error("NurbsCurve: control weight must be >= 0");
    }
}

namespace {

// Direct Cox-de Boor recursion. `seed_span` pins the zero-degree case to one
// span instead of interval membership; that evaluates the polynomial piece of
// that span, which is how the closing value at the right end of the valid
// range is obtained.
double basis_recursive(int i, int p, double t, const KnotVector& kv, int seed_span) {
    if (p == 0) {
        if (seed_span >= 0) return i == seed_span ? 1.0 : 0.0;
        return (kv[i] <= t && t < kv[i + 1]) ? 1.0 : 0.0;
    }
    double acc = 0.0;
    const double dl = kv[i + p] - kv[i];
    if (dl > 0.0) acc += (t - kv[i]) / dl * basis_recursive(i, p - 1, t, kv, seed_span);
    const double dr = kv[i + p + 1] - kv[i + 1];
    if (dr > 0.0) acc += (kv[i + p + 1] - t) / dr * basis_recursive(i + 1, p - 1, t, kv, seed_span);
    return acc;
}

// Index of the span [t_j, t_{j+1}) containing t, clamped to [lo, hi].
int find_span(const KnotVector& kv, double t, int lo, int hi) {
    int j = lo;
    while (j < hi && !(t < kv[j + 1])) ++j;
    return j;
}

struct SpanContext {
    int span = 0;        // pinned span index
    double t = 0.0;      // raw knot-domain parameter
};

// Maps user parameter s in [0,1] onto the raw range [t_p, t_{m-p}] where all
// control points act (m = last knot index); the span is clamped so s = 1
// evaluates the final polynomial piece at its right end.
SpanContext map_parameter(const NurbsCurve& c, double s) {
    const int p = c.degree;
    const int m = c.knots.size() - 1;
    const double lo = c.knots[p];
    const double hi = c.knots[m - p];
    SpanContext ctx;
    ctx.t = lo + s * (hi - lo);
    ctx.span = find_span(c.knots, ctx.t, p, m - p - 1);
    return ctx;
}

} // namespace

double basis(int i, int p, double t, const KnotVector& knots) {
    knots.validate();
    if (p < 0) throw Error("basis: negative degree");
    if (i < 0 || i + p + 1 > knots.size() - 1)
        throw Error("basis: index " + std::to_string(i) + " out of range for degree " +
                    std::to_string(p) + " and " + std::to_string(knots.size()) + " knots");
    if (!(t >= 0.0 && t <= 1.0)) throw Error("basis: parameter " + std::to_string(t) + " outside [0,1]");
    return basis_recursive(i, p, t, knots, -1);
}

double rational_basis(int i, int p, double t, const NurbsCurve& curve) {
    curve.validate();
    if (p != curve.degree) throw Error("rational_basis: degree mismatch");
    if (i < 0 || i >= curve.extended_count())
        throw Error("rational_basis: index " + std::to_string(i) + " out of range");
    if (!(t >= 0.0 && t <= 1.0)) throw Error("rational_basis: parameter outside [0,1]");

    const SpanContext ctx = map_parameter(curve, t);
    double denom = 0.0;
    double numer = 0.0;
    for (int j = ctx.span - p; j <= ctx.span; ++j) {
        const double nj = basis_recursive(j, p, ctx.t, curve.knots, ctx.span);
        const double w = curve.extended_point(j).weight * nj;
        denom += w;
        if (j == i) numer = w;
    }
    if (!(denom > 0.0)) throw Error("rational_basis: degenerate weights (zero denominator)");
    if (i < ctx.span - p || i > ctx.span) return 0.0;
    return numer / denom;
}

Vec2 eval_curve(const NurbsCurve& curve, double t) {
    curve.validate();
    if (!(t >= 0.0 && t <= 1.0)) throw Error("eval_curve: parameter outside [0,1]");
    const int p = curve.degree;
    const SpanContext ctx = map_parameter(curve, t);
    double denom = 0.0;
    Vec2 acc{0.0, 0.0};
    for (int j = ctx.span - p; j <= ctx.span; ++j) {
        const ControlPoint& cp = curve.extended_point(j);
        const double w = cp.weight * basis_recursive(j, p, ctx.t, curve.knots, ctx.span);
        acc = acc + w * cp.cartesian();
        denom += w;
    }
    if (!(denom > 0.0)) throw Error("eval_curve: degenerate weights (zero denominator)");
    return (1.0 / denom) * acc;
}

std::vector<Vec2> sample_polyline(const NurbsCurve& curve, int m) {
    if (m < 3) throw Error("sample_polyline: need m >= 3, got " + std::to_string(m));
    curve.validate();
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k)
        pts.push_back(eval_curve(curve, static_cast<double>(k) / m));
    return pts;
}

BasisTable BasisTable::make(int point_count, int degree, int samples) {
    if (samples < 3) throw Error("BasisTable: need samples >= 3");
    std::vector<ControlPoint> unit(static_cast<std::size_t>(point_count));
    NurbsCurve ref = NurbsCurve::closed_uniform(unit, degree); // geometry irrelevant, knots matter

    BasisTable table;
    table.point_count_ = point_count;
    table.degree_ = degree;
    table.samples_ = samples;
    table.folded_.assign(static_cast<std::size_t>(samples) * point_count, 0.0);

    for (int k = 0; k < samples; ++k) {
        const double s = static_cast<double>(k) / samples;
        const SpanContext ctx = map_parameter(ref, s);
        double* row = table.folded_.data() + static_cast<std::size_t>(k) * point_count;
        for (int j = ctx.span - degree; j <= ctx.span; ++j) {
            const double nj = basis_recursive(j, degree, ctx.t, ref.knots, ctx.span);
            row[j % point_count] += nj;
        }
    }
    return table;
}

std::vector<Vec2> BasisTable::sample(const std::vector<ControlPoint>& pts) const {
    if (static_cast<int>(pts.size()) != point_count_)
        throw Error("BasisTable: control point count mismatch");
    std::vector<Vec2> out(static_cast<std::size_t>(samples_));
    for (int k = 0; k < samples_; ++k) {
        const double* row = folded_.data() + static_cast<std::size_t>(k) * point_count_;
        double denom = 0.0;
        double x = 0.0, y = 0.0;
        for (int j = 0; j < point_count_; ++j) {
            const ControlPoint& cp = pts[static_cast<std::size_t>(j)];
            const double w = cp.weight * row[j];
            if (w != 0.0) {
                x += w * cp.r * std::cos(cp.theta);
                y += w * cp.r * std::sin(cp.theta);
            }
            denom += w;
        }
        if (!(denom > 0.0)) throw Error("BasisTable: degenerate weights (zero denominator)");
        out[static_cast<std::size_t>(k)] = {x / denom, y / denom};
    }
    return out;
}

} // namespace shapect::nurbs
