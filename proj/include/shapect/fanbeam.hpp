#pragma once

#include <memory>
#include <vector>

#include "shapect/geometry.hpp"
#include "shapect/raster.hpp"

namespace shapect {

/// Fan-beam acquisition geometry. The pixel square spans [0, image_side]^2
/// in working length units with the rotation center at its middle; the
/// source sits on a circle of radius source_radius about that center and the
/// rays fan uniformly over detector_span radians around the source-to-center
/// axis. All distances share the working unit, so one geometry serves both a
/// fine data grid and a coarse reconstruction grid.
struct FanBeamGeometry {
    int num_views = 6;
    double image_side = 64.0;
    double source_radius = 128.0;
    double detector_radius = 128.0;
    int num_detector_bins = 96;
    double detector_span = 0.0; // radians, full fan opening

    /// Source at distance 2L, fan circumscribing the image disc with 10%
    /// margin, ceil(1.5 L) detector bins.
    static FanBeamGeometry standard(int num_views, double image_side);

    std::vector<double> view_angles() const; // 2*pi*k/num_views
    void validate() const;

    struct Ray {
        Vec2 origin;
        Vec2 dir; // unit
    };
    /// Ray of (view, bin) in the grid frame (origin at the square's
    /// lower-left corner).
    Ray ray(int view, int bin) const;

    bool operator==(const FanBeamGeometry&) const = default;
};

/// Sparse ray-in-pixel intersection-length matrix. Row index is
/// view * num_detector_bins + bin; column index is the row-major pixel
/// index of the raster. Lengths are in working units.
class SystemMatrix {
public:
    struct Entry {
        int col;
        double length;
    };

    SystemMatrix(int rows, int side);

    int rows() const { return static_cast<int>(rows_.size()); }
    int cols() const { return side_ * side_; }
    int side() const { return side_; }
    int views() const { return views_; }
    int bins() const { return bins_; }
    void set_layout(int views, int bins) { views_ = views; bins_ = bins; }

    std::vector<Entry>& row(int i) { return rows_[static_cast<std::size_t>(i)]; }
    const std::vector<Entry>& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }

    double row_sum(int i) const;

    /// y = A x (x indexed like RasterImage::values).
    void apply(const double* x, double* y) const;
    std::vector<double> apply(const std::vector<double>& x) const;
    /// x = A^T y.
    std::vector<double> apply_transpose(const std::vector<double>& y) const;

private:
    int side_;
    int views_ = 0;
    int bins_ = 0;
    std::vector<std::vector<Entry>> rows_;
};

/// Stacked projection measurements, view-major.
struct Sinogram {
    int views = 0;
    int bins = 0;
    std::vector<double> values;

    int size() const { return views * bins; }
    double& at(int view, int bin) { return values[static_cast<std::size_t>(view) * bins + bin]; }
    double at(int view, int bin) const { return values[static_cast<std::size_t>(view) * bins + bin]; }
    static Sinogram zeros(int views, int bins);
};

/// Intersection lengths of one ray with the side x side grid over
/// [0, L]^2, in traversal order. dir must be unit length.
std::vector<SystemMatrix::Entry> trace_ray(Vec2 origin, Vec2 dir, int side, double L);

/// Builds the full pencil-beam matrix. Rays missing the grid give empty rows.
SystemMatrix build_matrix(const FanBeamGeometry& geom, int side);

/// m = A vec(img).
Sinogram project(const SystemMatrix& A, const RasterImage& img);

/// Explicit cache of built matrices keyed by (geometry, side).
class SystemMatrixCache {
public:
    std::shared_ptr<const SystemMatrix> get(const FanBeamGeometry& geom, int side);

private:
    struct Item {
        FanBeamGeometry geom;
        int side;
        std::shared_ptr<const SystemMatrix> matrix;
    };
    std::vector<Item> items_;
};

/// Full forward model A(B(v)) on an N x N grid, reusing the cached matrix.
Sinogram forward(const ShapeParams& v, const FanBeamGeometry& geom, int side,
                 SystemMatrixCache& cache, int degree = 3);

} // namespace shapect
