#include "shapect/fanbeam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shapect/error.hpp"

namespace shapect {

FanBeamGeometry FanBeamGeometry::standard(int num_views, double image_side) {
    FanBeamGeometry g;
    g.num_views = num_views;
    g.image_side = image_side;
    g.source_radius = 2.0 * image_side;
    g.detector_radius = 2.0 * image_side;
    g.num_detector_bins = static_cast<int>(std::ceil(1.5 * image_side));
    const double disc = 1.1 * image_side / std::sqrt(2.0); // image disc + 10% margin
    g.detector_span = 2.0 * std::asin(std::min(1.0, disc / g.source_radius));
    g.validate();
    return g;
}

std::vector<double> FanBeamGeometry::view_angles() const {
    std::vector<double> a(static_cast<std::size_t>(num_views));
    for (int k = 0; k < num_views; ++k)
        a[static_cast<std::size_t>(k)] = kTwoPi * k / num_views;
    return a;
}

void FanBeamGeometry::validate() const {
    if (num_views < 1) throw Error("FanBeamGeometry: num_views must be >= 1");
    if (num_detector_bins < 1) throw Error("FanBeamGeometry: num_detector_bins must be >= 1");
    if (!(image_side > 0.0)) throw Error("FanBeamGeometry: image_side must be positive");
    if (!(detector_span > 0.0 && detector_span < kPi))
        throw Error("FanBeamGeometry: detector_span must be in (0, pi)");
    if (!(source_radius > image_side / std::sqrt(2.0)))
        throw Error("FanBeamGeometry: source must lie outside the image disc");
}

FanBeamGeometry::Ray FanBeamGeometry::ray(int view, int bin) const {
    const double phi = kTwoPi * view / num_views;
    const Vec2 center{image_side / 2.0, image_side / 2.0};
    const Vec2 src = center + source_radius * Vec2{std::cos(phi), std::sin(phi)};
    // fan angle of this bin relative to the central (source -> center) axis
    const double gamma = -detector_span / 2.0 + (bin + 0.5) * detector_span / num_detector_bins;
    const double dir_angle = phi + kPi + gamma;
    return {src, {std::cos(dir_angle), std::sin(dir_angle)}};
}

SystemMatrix::SystemMatrix(int rows, int side) : side_(side), rows_(static_cast<std::size_t>(rows)) {}

double SystemMatrix::row_sum(int i) const {
    double s = 0.0;
    for (const Entry& e : rows_[static_cast<std::size_t>(i)]) s += e.length;
    return s;
}

void SystemMatrix::apply(const double* x, double* y) const {
    const int r = rows();
    for (int i = 0; i < r; ++i) {
        double acc = 0.0;
        for (const Entry& e : rows_[static_cast<std::size_t>(i)]) acc += e.length * x[e.col];
        y[i] = acc;
    }
}

std::vector<double> SystemMatrix::apply(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != cols())
        throw Error("SystemMatrix::apply: expected " + std::to_string(cols()) + " values, got " +
                    std::to_string(x.size()));
    std::vector<double> y(static_cast<std::size_t>(rows()));
    apply(x.data(), y.data());
    return y;
}

std::vector<double> SystemMatrix::apply_transpose(const std::vector<double>& y) const {
    if (static_cast<int>(y.size()) != rows())
        throw Error("SystemMatrix::apply_transpose: expected " + std::to_string(rows()) +
                    " values, got " + std::to_string(y.size()));
    std::vector<double> x(static_cast<std::size_t>(cols()), 0.0);
    for (int i = 0; i < rows(); ++i)
        for (const Entry& e : rows_[static_cast<std::size_t>(i)])
            x[static_cast<std::size_t>(e.col)] += e.length * y[static_cast<std::size_t>(i)];
    return x;
}

Sinogram Sinogram::zeros(int views, int bins) {
    Sinogram s;
    s.views = views;
    s.bins = bins;
    s.values.assign(static_cast<std::size_t>(views) * bins, 0.0);
    return s;
}

std::vector<SystemMatrix::Entry> trace_ray(Vec2 origin, Vec2 dir, int side, double L) {
    std::vector<SystemMatrix::Entry> out;
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // Clip the parametric line origin + t*dir to [0,L]^2 (slab method).
    double tmin = 0.0;
    double tmax = kInf;
    const double o[2] = {origin.x, origin.y};
    const double d[2] = {dir.x, dir.y};
    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) {
            if (o[axis] < 0.0 || o[axis] > L) return out;
        } else {
            double t0 = (0.0 - o[axis]) / d[axis];
            double t1 = (L - o[axis]) / d[axis];
            if (t0 > t1) std::swap(t0, t1);
            tmin = std::max(tmin, t0);
            tmax = std::min(tmax, t1);
        }
    }
    if (!(tmin < tmax)) return out;

    const double h = L / side;
    const double x0 = origin.x + tmin * dir.x;
    const double y0 = origin.y + tmin * dir.y;
    int ix = std::clamp(static_cast<int>(std::floor(x0 / h)), 0, side - 1);
    int iy = std::clamp(static_cast<int>(std::floor(y0 / h)), 0, side - 1);

    const int step_x = dir.x > 0.0 ? 1 : -1;
    const int step_y = dir.y > 0.0 ? 1 : -1;
    const double t_delta_x = dir.x != 0.0 ? h / std::abs(dir.x) : kInf;
    const double t_delta_y = dir.y != 0.0 ? h / std::abs(dir.y) : kInf;
    double t_max_x = kInf;
    double t_max_y = kInf;
    if (dir.x != 0.0) t_max_x = ((dir.x > 0.0 ? ix + 1 : ix) * h - origin.x) / dir.x;
    if (dir.y != 0.0) t_max_y = ((dir.y > 0.0 ? iy + 1 : iy) * h - origin.y) / dir.y;

    double t = tmin;
    while (true) {
        const double tn = std::min({t_max_x, t_max_y, tmax});
        if (tn > t) {
            const int row = side - 1 - iy;
            out.push_back({row * side + ix, tn - t});
        }
        if (tn >= tmax) break;
        const bool advance_x = t_max_x <= t_max_y;
        const bool advance_y = t_max_y <= t_max_x;
        if (advance_x) {
            ix += step_x;
            t_max_x += t_delta_x;
        }
        if (advance_y) {
            iy += step_y;
            t_max_y += t_delta_y;
        }
        if (ix < 0 || ix >= side || iy < 0 || iy >= side) break;
        t = tn;
    }
    return out;
}

SystemMatrix build_matrix(const FanBeamGeometry& geom, int side) {
    geom.validate();
    if (side <= 0) throw Error("build_matrix: side must be positive");
    SystemMatrix A(geom.num_views * geom.num_detector_bins, side);
    A.set_layout(geom.num_views, geom.num_detector_bins);
    for (int v = 0; v < geom.num_views; ++v) {
        for (int b = 0; b < geom.num_detector_bins; ++b) {
            const FanBeamGeometry::Ray r = geom.ray(v, b);
            A.row(v * geom.num_detector_bins + b) = trace_ray(r.origin, r.dir, side, geom.image_side);
        }
    }
    return A;
}

Sinogram project(const SystemMatrix& A, const RasterImage& img) {
    if (img.side != A.side())
        throw Error("project: image side " + std::to_string(img.side) + " does not match matrix side " +
                    std::to_string(A.side()));
    Sinogram out = Sinogram::zeros(A.views(), A.bins());
    A.apply(img.values.data(), out.values.data());
    return out;
}

std::shared_ptr<const SystemMatrix> SystemMatrixCache::get(const FanBeamGeometry& geom, int side) {
    for (const Item& item : items_)
        if (item.side == side && item.geom == geom) return item.matrix;
    auto built = std::make_shared<SystemMatrix>(build_matrix(geom, side));
    items_.push_back({geom, side, built});
    return built;
}

Sinogram forward(const ShapeParams& v, const FanBeamGeometry& geom, int side,
                 SystemMatrixCache& cache, int degree) {
    const std::shared_ptr<const SystemMatrix> A = cache.get(geom, side);
    return project(*A, rasterize(v, side, degree));
}

} // namespace shapect
