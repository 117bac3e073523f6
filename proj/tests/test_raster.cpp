#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "shapect/error.hpp"
#include "shapect/raster.hpp"
#include "shapect/rng.hpp"

using namespace shapect;

namespace {

ShapeParams ring(int n_points, double radius, double c, double rot = 0.0) {
    ShapeParams v;
    v.radii.assign(static_cast<std::size_t>(n_points), radius);
    v.angles.resize(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i)
        v.angles[static_cast<std::size_t>(i)] = rot + kTwoPi * i / n_points;
    v.c = c;
    return v;
}

} // namespace

TEST_CASE("flat layout round-trips") {
    const ShapeParams v = ring(6, 20.0, 0.027);
    const std::vector<double> flat = v.to_flat();
    REQUIRE(flat.size() == 13);
    CHECK(flat[0] == 20.0);
    CHECK(flat[1] == 0.0);
    CHECK(flat.back() == 0.027);
    const ShapeParams back = ShapeParams::from_flat(flat);
    CHECK(back.radii == v.radii);
    CHECK(back.angles == v.angles);
    CHECK(back.c == v.c);
    CHECK_THROWS_AS(ShapeParams::from_flat({1.0, 2.0}), Error);
}

TEST_CASE("point_in_curve basics") {
    const std::vector<Vec2> square{{0.0, 0.0}, {4.0, 0.0}, {4.0, 4.0}, {0.0, 4.0}};
    CHECK(point_in_curve({2.0, 2.0}, square));
    CHECK_FALSE(point_in_curve({5.0, 2.0}, square)); // beyond max x
    CHECK_FALSE(point_in_curve({-1.0, 2.0}, square));
    CHECK(point_in_curve({4.0, 2.0}, square)); // exactly on an edge counts inside
    CHECK(point_in_curve({0.0, 0.0}, square)); // vertex
}

TEST_CASE("point_in_curve agrees with the winding-number oracle") {
    const ShapeParams v = ring(7, 18.0, 1.0);
    const std::vector<Vec2> poly = shape_polyline(v, 48, 3, 720);
    Rng rng(99);
    int checked = 0;
    for (int k = 0; k < 10000; ++k) {
        const Vec2 q{48.0 * rng.uniform01(), 48.0 * rng.uniform01()};
        if (oracle::min_edge_distance(q, poly) < 1e-9) continue; // boundary tie-break excluded
        CHECK(point_in_curve(q, poly) == oracle::winding_inside(q, poly));
        ++checked;
    }
    CHECK(checked > 9900);
}

TEST_CASE("scanline fill agrees with per-pixel containment") {
    const ShapeParams v = ring(5, 14.0, 2.5, 0.3);
    const int side = 40;
    const std::vector<Vec2> poly = shape_polyline(v, side, 3, 720);
    const RasterImage filled = fill_polyline(poly, side, 2.5);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) {
            const bool in = point_in_curve(pixel_center(i, j, side), poly);
            CHECK(filled.at(i, j) == (in ? 2.5 : 0.0));
        }
}

TEST_CASE("rasterize: zero attenuation and enclosing loop") {
    ShapeParams v = ring(6, 20.0, 0.0);
    const RasterImage zero = rasterize(v, 32);
    for (double val : zero.values) CHECK(val == 0.0);

    // giant loop far outside the grid encloses every pixel center
    ShapeParams giant = ring(6, 500.0, 3.0);
    const RasterImage all = rasterize(giant, 32);
    for (double val : all.values) CHECK(val == 3.0);
}

TEST_CASE("rasterize output is binary {0, c}") {
    const ShapeParams v = ring(6, 20.0, 0.027);
    const RasterImage img = rasterize(v, 64);
    std::set<double> levels(img.values.begin(), img.values.end());
    CHECK(levels.size() == 2);
    CHECK(levels.count(0.0) == 1);
    CHECK(levels.count(0.027) == 1);
}

TEST_CASE("degenerate curve rasterizes to an empty interior") {
    ShapeParams v;
    v.radii = {7.0, 7.0, 7.0, 7.0};
    v.angles = {0.1, 0.1, 0.1, 0.1}; // all control points coincide
    v.c = 1.0;
    const RasterImage img = rasterize(v, 32);
    for (double val : img.values) CHECK(val == 0.0);
}

TEST_CASE("near-circular interior area approaches the disc area") {
    // control radius chosen so the cubic spline through a regular hexagon has
    // curve radius R: a = 3R / (2 + cos(60 deg))
    const double R = 80.0;
    const int side = 256;
    const double a = 3.0 * R / (2.0 + std::cos(kTwoPi / 6.0));
    const ShapeParams v = ring(6, a, 1.0);
    const RasterImage img = rasterize(v, side);
    std::int64_t count = 0;
    for (double val : img.values) count += val > 0.0;
    const double disc = kPi * R * R;
    CHECK(std::abs(static_cast<double>(count) / disc - 1.0) < 0.02);
}

TEST_CASE("refinement: interior area estimate converges") {
    const ShapeParams v = ring(6, 0.35 * 64.0, 1.0);
    auto area_fraction = [&](int side) {
        ShapeParams scaled = v;
        for (double& r : scaled.radii) r *= side / 64.0;
        const RasterImage img = rasterize(scaled, side);
        std::int64_t count = 0;
        for (double val : img.values) count += val > 0.0;
        return static_cast<double>(count) / (static_cast<double>(side) * side);
    };
    const double a64 = area_fraction(64);
    const double a128 = area_fraction(128);
    const double a256 = area_fraction(256);
    CHECK(std::abs(a128 - a256) <= std::abs(a64 - a128) + 1e-12);
}

TEST_CASE("quarter-turn rotation of control angles rotates the image") {
    const int side = 64;
    ShapeParams v = ring(5, 17.0, 1.0, 0.25);
    v.radii = {17.0, 12.0, 20.0, 15.0, 13.0};
    const RasterImage base = rasterize(v, side);

    ShapeParams rotated = v;
    for (double& a : rotated.angles) a += kPi / 2.0;
    const RasterImage rot = rasterize(rotated, side);

    const std::vector<Vec2> poly = shape_polyline(v, side, 3, 720);
    // compare pixels farther than one pixel from the boundary; 90 degree
    // rotation about the grid center maps (row, col) -> (side-1-col, row)
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) {
            if (oracle::min_edge_distance(pixel_center(i, j, side), poly) <= 1.0) continue;
            CHECK(rot.at(side - 1 - j, i) == base.at(i, j));
        }
}

TEST_CASE("downsample_pointwise picks pixel centers") {
    RasterImage img = RasterImage::zeros(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) img.at(i, j) = i * 4 + j;
    const RasterImage half = downsample_pointwise(img, 2);
    // centers of the 2x2 grid land in source pixels (1,1), (1,3), (3,1), (3,3)
    CHECK(half.at(0, 0) == 5.0);
    CHECK(half.at(0, 1) == 7.0);
    CHECK(half.at(1, 0) == 13.0);
    CHECK(half.at(1, 1) == 15.0);
}

TEST_CASE("rasterize validation") {
    const ShapeParams v = ring(6, 10.0, 1.0);
    CHECK_THROWS_AS(rasterize(v, 4), Error);
    ShapeParams bad = v;
    bad.radii[0] = -1.0;
    CHECK_THROWS_AS(rasterize(bad, 64), Error);
}
