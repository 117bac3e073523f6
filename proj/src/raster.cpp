#include "shapect/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shapect/error.hpp"

namespace shapect {

std::vector<double> ShapeParams::to_flat() const {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(flat_size()));
    for (int i = 0; i < point_count(); ++i) {
        v.push_back(radii[static_cast<std::size_t>(i)]);
        v.push_back(angles[static_cast<std::size_t>(i)]);
    }
    v.push_back(c);
    return v;
}

ShapeParams ShapeParams::from_flat(const std::vector<double>& v) {
    if (v.size() < 3 || v.size() % 2 == 0)
        throw Error("ShapeParams: flat vector must have odd length 2n+3 >= 3, got " +
                    std::to_string(v.size()));
    ShapeParams p;
    const std::size_t n1 = (v.size() - 1) / 2;
    p.radii.resize(n1);
    p.angles.resize(n1);
    for (std::size_t i = 0; i < n1; ++i) {
        p.radii[i] = v[2 * i];
        p.angles[i] = v[2 * i + 1];
    }
    p.c = v.back();
    return p;
}

std::vector<nurbs::ControlPoint> ShapeParams::control_points() const {
    std::vector<nurbs::ControlPoint> pts(static_cast<std::size_t>(point_count()));
    for (int i = 0; i < point_count(); ++i) {
        pts[static_cast<std::size_t>(i)].r = radii[static_cast<std::size_t>(i)];
        pts[static_cast<std::size_t>(i)].theta = angles[static_cast<std::size_t>(i)];
        pts[static_cast<std::size_t>(i)].weight = 1.0;
    }
    return pts;
}

std::vector<Vec2> ShapeParams::control_polygon() const {
    std::vector<Vec2> poly(static_cast<std::size_t>(point_count()));
    for (int i = 0; i < point_count(); ++i)
        poly[static_cast<std::size_t>(i)] = {radii[static_cast<std::size_t>(i)] * std::cos(angles[static_cast<std::size_t>(i)]),
                                             radii[static_cast<std::size_t>(i)] * std::sin(angles[static_cast<std::size_t>(i)])};
    return poly;
}

void ShapeParams::validate() const {
    if (radii.size() != angles.size()) throw Error("ShapeParams: radii/angles size mismatch");
    if (point_count() < 3) throw Error("ShapeParams: need at least 3 control points");
    if (!(c >= 0.0) || !std::isfinite(c)) throw Error("ShapeParams: attenuation must be finite and >= 0");
    for (double r : radii)
        if (!(r >= 0.0) || !std::isfinite(r)) throw Error("ShapeParams: radii must be finite and >= 0");
}

RasterImage RasterImage::zeros(int side) {
    RasterImage img;
    img.side = side;
    img.values.assign(static_cast<std::size_t>(side) * side, 0.0);
    return img;
}

Vec2 pixel_center(int row, int col, int side) {
    return {col + 0.5, side - row - 0.5};
}

int polyline_samples_for(int point_count) {
    return std::max(720, 20 * point_count);
}

bool point_in_curve(Vec2 q, const std::vector<Vec2>& polyline) {
    const std::size_t n = polyline.size();
    bool inside = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = polyline[i];
        const Vec2 b = polyline[(i + 1) % n];
        if (on_segment(q, a, b)) return true; // boundary counts as inside
        if ((a.y > q.y) != (b.y > q.y)) {
            const double cx = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (q.x < cx) inside = !inside;
        }
    }
    return inside;
}

RasterImage fill_polyline(const std::vector<Vec2>& poly, int side, double value) {
    if (side <= 0) throw Error("fill_polyline: side must be positive");
    RasterImage img = RasterImage::zeros(side);
    if (poly.size() < 3) return img;

    std::vector<double> crossings;
    crossings.reserve(16);
    const std::size_t n = poly.size();
    for (int row = 0; row < side; ++row) {
        const double y = side - row - 0.5;
        crossings.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 a = poly[i];
            const Vec2 b = poly[(i + 1) % n];
            if ((a.y > y) != (b.y > y))
                crossings.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
        }
        if (crossings.empty()) continue;
        std::sort(crossings.begin(), crossings.end());
        const std::size_t total = crossings.size();
        std::size_t idx = 0;
        for (int col = 0; col < side; ++col) {
            const double x = col + 0.5;
            while (idx < total && crossings[idx] < x) ++idx;
            const bool on_edge = idx < total && crossings[idx] == x;
            if (on_edge || ((total - idx) % 2 == 1)) img.at(row, col) = value;
        }
    }
    return img;
}

std::vector<Vec2> shape_polyline(const ShapeParams& v, int side, int degree, int samples) {
    const nurbs::NurbsCurve curve = nurbs::NurbsCurve::closed_uniform(v.control_points(), degree);
    std::vector<Vec2> poly = nurbs::sample_polyline(curve, samples);
    const Vec2 center{side / 2.0, side / 2.0};
    for (Vec2& p : poly) p = p + center;
    return poly;
}

RasterImage rasterize(const ShapeParams& v, int side, int degree) {
    v.validate();
    if (side < 8) throw Error("rasterize: side must be >= 8, got " + std::to_string(side));
    const int m = polyline_samples_for(v.point_count());
    return fill_polyline(shape_polyline(v, side, degree, m), side, v.c);
}

RasterImage rasterize(const ShapeParams& v, int side, const nurbs::BasisTable& table) {
    if (side < 8) throw Error("rasterize: side must be >= 8, got " + std::to_string(side));
    std::vector<Vec2> poly = table.sample(v.control_points());
    const Vec2 center{side / 2.0, side / 2.0};
    for (Vec2& p : poly) p = p + center;
    return fill_polyline(poly, side, v.c);
}

RasterImage rasterize_scaled(const ShapeParams& v, int params_side, int out_side, int degree) {
    ShapeParams scaled = v;
    const double s = static_cast<double>(out_side) / params_side;
    for (double& r : scaled.radii) r *= s;
    return rasterize(scaled, out_side, degree);
}

RasterImage downsample_pointwise(const RasterImage& img, int out_side) {
    if (out_side <= 0 || out_side > img.side)
        throw Error("downsample_pointwise: bad output side " + std::to_string(out_side));
    RasterImage out = RasterImage::zeros(out_side);
    const double scale = static_cast<double>(img.side) / out_side;
    for (int i = 0; i < out_side; ++i) {
        const int src_row = std::min(img.side - 1, static_cast<int>((i + 0.5) * scale));
        for (int j = 0; j < out_side; ++j) {
            const int src_col = std::min(img.side - 1, static_cast<int>((j + 0.5) * scale));
            out.at(i, j) = img.at(src_row, src_col);
        }
    }
    return out;
}

} // namespace shapect
