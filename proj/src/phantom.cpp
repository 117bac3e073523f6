#include "shapect/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shapect/error.hpp"
#include "shapect/rng.hpp"

namespace shapect {

PhantomLabel parse_phantom_label(const std::string& s) {
    if (s == "omega1" || s == "Omega1" || s == "O1") return PhantomLabel::Omega1;
    if (s == "omega2" || s == "Omega2" || s == "O2") return PhantomLabel::Omega2;
    throw Error("unknown phantom label '" + s + "' (expected omega1 or omega2)");
}

std::string to_string(PhantomLabel label) {
    return label == PhantomLabel::Omega1 ? "omega1" : "omega2";
}

namespace {

// One round of Chaikin corner cutting; preserves convexity.
std::vector<Vec2> chaikin(const std::vector<Vec2>& poly) {
    std::vector<Vec2> out;
    out.reserve(2 * poly.size());
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        out.push_back(0.75 * a + 0.25 * b);
        out.push_back(0.25 * a + 0.75 * b);
    }
    return out;
}

} // namespace

std::vector<Vec2> phantom_base_outline(double side) {
    const Vec2 c{side / 2.0, side / 2.0};
    // Irregular pentagon, vertices in CCW angular order; radii as fractions
    // of the side so the blob scale tracks the grid.
    const double ang[5] = {90.0, 162.0, 234.0, 306.0, 18.0};
    const double rad[5] = {0.40, 0.36, 0.42, 0.38, 0.35};
    std::vector<Vec2> poly(5);
    for (int i = 0; i < 5; ++i) {
        const double a = ang[i] * kPi / 180.0;
        poly[static_cast<std::size_t>(i)] = c + (rad[i] * side) * Vec2{std::cos(a), std::sin(a)};
    }
    for (int round = 0; round < 4; ++round) poly = chaikin(poly);
    return poly;
}

namespace {

// Polar sector {phi0 <= phi <= phi1, r >= r_in} as a polygon; the outer arc
// sits well outside the blob so the cut always reaches the boundary.
std::vector<Vec2> sector_polygon(Vec2 center, double scale, double phi0_deg, double phi1_deg,
                                 double r_in_frac) {
    const double r_out = 0.75 * scale;
    const double r_in = r_in_frac * scale;
    const int arc_steps = 12;
    std::vector<Vec2> poly;
    for (int k = 0; k <= arc_steps; ++k) { // outer arc, phi0 -> phi1
        const double a = (phi0_deg + (phi1_deg - phi0_deg) * k / arc_steps) * kPi / 180.0;
        poly.push_back(center + r_out * Vec2{std::cos(a), std::sin(a)});
    }
    for (int k = arc_steps; k >= 0; --k) { // inner arc, phi1 -> phi0
        const double a = (phi0_deg + (phi1_deg - phi0_deg) * k / arc_steps) * kPi / 180.0;
        poly.push_back(center + r_in * Vec2{std::cos(a), std::sin(a)});
    }
    return poly;
}

} // namespace

std::vector<std::vector<Vec2>> phantom_cavities(double side) {
    const Vec2 c{side / 2.0, side / 2.0};
    // Two wedges cut from opposite sides: one into the bottom edge, one into
    // the upper-left edge.
    return {sector_polygon(c, side, 248.0, 292.0, 0.16),
            sector_polygon(c, side, 93.0, 131.0, 0.19)};
}

Phantom make_phantom(PhantomLabel label, int side) {
    if (side < 16) throw Error("make_phantom: side must be >= 16");
    RasterImage img = fill_polyline(phantom_base_outline(side), side, kPhantomAttenuation);
    if (label == PhantomLabel::Omega2) {
        for (const std::vector<Vec2>& cavity : phantom_cavities(side)) {
            const RasterImage mask = fill_polyline(cavity, side, 1.0);
            for (std::size_t i = 0; i < img.values.size(); ++i)
                if (mask.values[i] > 0.0) img.values[i] = 0.0;
        }
    }
    return {std::move(img), label};
}

MeasurementData simulate_data(const Phantom& ph, const FanBeamGeometry& geom,
                              double noise_percent, std::uint64_t seed) {
    if (noise_percent < 0.0) throw Error("simulate_data: noise_percent must be >= 0");
    const SystemMatrix A = build_matrix(geom, ph.image.side);
    Sinogram clean = project(A, ph.image);

    double peak = 0.0;
    for (double v : clean.values) peak = std::max(peak, std::abs(v));
    const double sigma = noise_percent / 100.0 * peak;

    Rng rng(seed);
    for (double& v : clean.values) v += sigma * rng.normal();

    MeasurementData data;
    data.sinogram = std::move(clean);
    data.geometry = geom;
    data.noise_sigma = sigma;
    data.provenance = MeasurementData::Provenance::Simulated;
    return data;
}

Sinogram normalize_measured(const Sinogram& raw, double floor) {
    Sinogram out = raw;
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < raw.values.size(); ++i) {
        if (!(raw.values[i] > 0.0))
            throw Error("normalize_measured: non-positive intensity at bin " + std::to_string(i));
        max_log = std::max(max_log, std::log(raw.values[i]));
    }
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        double v = max_log - std::log(raw.values[i]);
        if (v < floor) v = 0.0;
        out.values[i] = v;
    }
    return out;
}

MeasurementData subsample_views(const MeasurementData& full, int keep) {
    const int total = full.sinogram.views;
    if (keep < 1 || total % keep != 0)
        throw Error("subsample_views: keep = " + std::to_string(keep) +
                    " must divide the view count " + std::to_string(total));
    const int stride = total / keep;

    MeasurementData out = full;
    out.sinogram = Sinogram::zeros(keep, full.sinogram.bins);
    for (int k = 0; k < keep; ++k)
        for (int b = 0; b < full.sinogram.bins; ++b)
            out.sinogram.at(k, b) = full.sinogram.at(k * stride, b);
    out.geometry.num_views = keep;
    return out;
}

} // namespace shapect
