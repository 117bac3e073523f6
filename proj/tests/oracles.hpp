// Independent reference implementations used only to check the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "shapect/fanbeam.hpp"
#include "shapect/geometry.hpp"
#include "shapect/raster.hpp"

namespace oracle {

using shapect::Vec2;

// Winding-number containment via summed signed angles.
inline bool winding_inside(Vec2 q, const std::vector<Vec2>& poly) {
    double total = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i] - q;
        const Vec2 b = poly[(i + 1) % n] - q;
        total += std::atan2(shapect::cross(a, b), shapect::dot(a, b));
    }
    return std::abs(total) > shapect::kPi; // ~2*pi inside, ~0 outside
}

inline double min_edge_distance(Vec2 q, const std::vector<Vec2>& poly) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i)
        best = std::min(best, shapect::point_segment_distance(q, poly[i], poly[(i + 1) % n]));
    return best;
}

// Liang-Barsky chord length of the line origin + t*dir (unit dir) through
// the square [0, L]^2.
inline double chord_length(Vec2 origin, Vec2 dir, double L) {
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    const double p[4] = {-dir.x, dir.x, -dir.y, dir.y};
    const double q[4] = {origin.x - 0.0, L - origin.x, origin.y - 0.0, L - origin.y};
    for (int k = 0; k < 4; ++k) {
        if (p[k] == 0.0) {
            if (q[k] < 0.0) return 0.0;
        } else {
            const double r = q[k] / p[k];
            if (p[k] < 0.0)
                t0 = std::max(t0, r);
            else
                t1 = std::min(t1, r);
        }
    }
    return std::max(0.0, t1 - t0);
}

// Exact intersection length of a unit-direction line with one pixel box.
inline double pixel_intersection(Vec2 origin, Vec2 dir, double x0, double y0, double h) {
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    const double p[4] = {-dir.x, dir.x, -dir.y, dir.y};
    const double q[4] = {origin.x - x0, x0 + h - origin.x, origin.y - y0, y0 + h - origin.y};
    for (int k = 0; k < 4; ++k) {
        if (p[k] == 0.0) {
            if (q[k] < 0.0) return 0.0;
        } else {
            const double r = q[k] / p[k];
            if (p[k] < 0.0)
                t0 = std::max(t0, r);
            else
                t1 = std::min(t1, r);
        }
    }
    return std::max(0.0, t1 - t0);
}

// O(rows * N^2) reference projector: clips every ray against every pixel.
inline shapect::Sinogram dense_project(const shapect::FanBeamGeometry& geom, int side,
                                       const shapect::RasterImage& img) {
    const double h = geom.image_side / side;
    shapect::Sinogram out = shapect::Sinogram::zeros(geom.num_views, geom.num_detector_bins);
    for (int v = 0; v < geom.num_views; ++v) {
        for (int b = 0; b < geom.num_detector_bins; ++b) {
            const auto ray = geom.ray(v, b);
            double acc = 0.0;
            for (int row = 0; row < side; ++row) {
                for (int col = 0; col < side; ++col) {
                    const double x0 = col * h;
                    const double y0 = (side - 1 - row) * h;
                    const double len = pixel_intersection(ray.origin, ray.dir, x0, y0, h);
                    if (len > 0.0) acc += len * img.at(row, col);
                }
            }
            out.at(v, b) = acc;
        }
    }
    return out;
}

// Directed Hausdorff distance from the points of `from` to the segments of
// the closed polyline `to`.
inline double hausdorff_to_polyline(const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
    double worst = 0.0;
    for (const Vec2& q : from) worst = std::max(worst, min_edge_distance(q, to));
    return worst;
}

// Effective sample size via the initial positive sequence estimator.
inline double effective_sample_size(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 10) return static_cast<double>(n);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double g0 = 0.0;
    for (double v : x) g0 += (v - mean) * (v - mean);
    g0 /= static_cast<double>(n);
    if (g0 == 0.0) return static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t lag = 1; lag + 1 < n; ++lag) {
        double g = 0.0;
        for (std::size_t i = lag; i < n; ++i) g += (x[i] - mean) * (x[i - lag] - mean);
        g /= static_cast<double>(n);
        if (g <= 0.0) break;
        acc += g;
    }
    const double tau = 1.0 + 2.0 * acc / g0;
    return static_cast<double>(n) / tau;
}

} // namespace oracle
