#pragma once

#include <vector>

#include "shapect/geometry.hpp"
#include "shapect/nurbs.hpp"

namespace shapect {

/// Boundary-plus-attenuation parameter vector. Flat layout
/// [r_0, theta_0, ..., r_n, theta_n, c], length 2n+3. Radii are in pixel
/// units of the raster the shape is drawn on; angles in radians about the
/// grid center.
struct ShapeParams {
    std::vector<double> radii;
    std::vector<double> angles;
    double c = 0.0;

    int point_count() const { return static_cast<int>(radii.size()); }
    int flat_size() const { return 2 * point_count() + 1; }

    std::vector<double> to_flat() const;
    static ShapeParams from_flat(const std::vector<double>& v);

    /// Control points (equal unit weights) about the polar origin.
    std::vector<nurbs::ControlPoint> control_points() const;
    /// Cartesian control polygon about the polar origin.
    std::vector<Vec2> control_polygon() const;

    void validate() const;
};

/// Square pixel image; row 0 is the top row.
struct RasterImage {
    int side = 0;
    std::vector<double> values;

    static RasterImage zeros(int side);
    double& at(int row, int col) { return values[static_cast<std::size_t>(row) * side + col]; }
    double at(int row, int col) const { return values[static_cast<std::size_t>(row) * side + col]; }
};

/// Center of pixel (row, col) in the raster frame: origin at the image's
/// lower-left corner, x right, y up; one pixel is one unit.
Vec2 pixel_center(int row, int col, int side);

/// Polyline density used for containment tests: max(720, 20*(n+1)).
int polyline_samples_for(int point_count);

/// Even-odd containment against a closed polyline. A point exactly on an
/// edge counts as inside.
bool point_in_curve(Vec2 q, const std::vector<Vec2>& polyline);

/// Scanline even-odd fill: pixels whose center lies inside the closed
/// polyline get `value`, the rest 0. Same parity rule as point_in_curve.
RasterImage fill_polyline(const std::vector<Vec2>& poly, int side, double value);

/// Pixel image of the shape: attenuation c inside the closed NURBS boundary
/// through the control points (polar origin at the grid center), 0 outside.
RasterImage rasterize(const ShapeParams& v, int side, int degree = 3);

/// Hot-path variant reusing a precomputed basis table (same point count).
RasterImage rasterize(const ShapeParams& v, int side, const nurbs::BasisTable& table);

/// Boundary polyline of the shape in pixel units of `side`, already shifted
/// to the grid center.
std::vector<Vec2> shape_polyline(const ShapeParams& v, int side, int degree, int samples);

/// Renders the shape on a raster of different resolution: radii given in
/// units of `params_side` pixels are scaled onto `out_side`.
RasterImage rasterize_scaled(const ShapeParams& v, int params_side, int out_side, int degree = 3);

/// Pixel-center downsampling (point sampling, no averaging).
RasterImage downsample_pointwise(const RasterImage& img, int out_side);

} // namespace shapect
