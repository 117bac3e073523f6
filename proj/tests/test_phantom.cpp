#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "shapect/error.hpp"
#include "shapect/phantom.hpp"

using namespace shapect;

namespace {

// Hull excess of the support: convex hull area / pixel count - 1.
double convexity_gap(const RasterImage& img) {
    std::vector<Vec2> support;
    std::int64_t count = 0;
    for (int i = 0; i < img.side; ++i)
        for (int j = 0; j < img.side; ++j)
            if (img.at(i, j) > 0.0) {
                support.push_back(pixel_center(i, j, img.side));
                ++count;
            }
    const std::vector<Vec2> hull = convex_hull(support);
    return polygon_area(hull) / static_cast<double>(count) - 1.0;
}

} // namespace

TEST_CASE("omega1 is binary {0, 0.027} with a sensible area") {
    const Phantom ph = make_phantom(PhantomLabel::Omega1, 256);
    const std::set<double> levels(ph.image.values.begin(), ph.image.values.end());
    CHECK(levels == std::set<double>{0.0, 0.027});

    std::int64_t count = 0;
    for (double v : ph.image.values) count += v > 0.0;
    const double fraction = static_cast<double>(count) / (256.0 * 256.0);
    CHECK(fraction > 0.05);
    CHECK(fraction < 0.8);

    // convex up to pixelization
    CHECK(convexity_gap(ph.image) < 0.02);
}

TEST_CASE("omega2 is non-convex with two cavities") {
    const Phantom ph = make_phantom(PhantomLabel::Omega2, 256);
    const std::set<double> levels(ph.image.values.begin(), ph.image.values.end());
    CHECK(levels == std::set<double>{0.0, 0.027});
    CHECK(convexity_gap(ph.image) >= 0.10);

    // strictly smaller than the convex base shape
    const Phantom base = make_phantom(PhantomLabel::Omega1, 256);
    std::int64_t count1 = 0, count2 = 0;
    for (double v : base.image.values) count1 += v > 0.0;
    for (double v : ph.image.values) count2 += v > 0.0;
    CHECK(count2 < count1);
}

TEST_CASE("unknown label") {
    CHECK_THROWS_AS(parse_phantom_label("omega3"), Error);
    CHECK(parse_phantom_label("omega1") == PhantomLabel::Omega1);
    CHECK(to_string(PhantomLabel::Omega2) == "omega2");
}

TEST_CASE("noiseless simulation reproduces the forward data") {
    const Phantom ph = make_phantom(PhantomLabel::Omega1, 128);
    const FanBeamGeometry g = FanBeamGeometry::standard(6, 64.0);
    const MeasurementData clean = simulate_data(ph, g, 0.0, 42);
    CHECK(clean.noise_sigma == 0.0);
    const Sinogram reference = project(build_matrix(g, 128), ph.image);
    CHECK(clean.sinogram.values == reference.values);
}

TEST_CASE("fixed seed reproduces the draw; seeds differ") {
    const Phantom ph = make_phantom(PhantomLabel::Omega1, 128);
    const FanBeamGeometry g = FanBeamGeometry::standard(6, 64.0);
    const MeasurementData a = simulate_data(ph, g, 0.1, 7);
    const MeasurementData b = simulate_data(ph, g, 0.1, 7);
    const MeasurementData c = simulate_data(ph, g, 0.1, 8);
    CHECK(a.sinogram.values == b.sinogram.values);
    CHECK(a.sinogram.values != c.sinogram.values);
}

TEST_CASE("noise level matches the requested sigma") {
    const Phantom ph = make_phantom(PhantomLabel::Omega1, 128);
    const FanBeamGeometry g = FanBeamGeometry::standard(6, 64.0);
    const MeasurementData clean = simulate_data(ph, g, 0.0, 1);
    const MeasurementData noisy = simulate_data(ph, g, 0.1, 1);

    double peak = 0.0;
    for (double v : clean.sinogram.values) peak = std::max(peak, std::abs(v));
    CHECK(noisy.noise_sigma == doctest::Approx(0.001 * peak).epsilon(1e-12));

    double ss = 0.0;
    const std::size_t n = clean.sinogram.values.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = noisy.sinogram.values[i] - clean.sinogram.values[i];
        ss += d * d;
    }
    const double sample_std = std::sqrt(ss / static_cast<double>(n));
    CHECK(std::abs(sample_std / noisy.noise_sigma - 1.0) < 0.05); // 6 x 96 draws
}

TEST_CASE("log-normalization") {
    Sinogram raw = Sinogram::zeros(1, 2);
    raw.values = {std::exp(2.0), std::exp(1.0)};
    const Sinogram out = normalize_measured(raw, 0.0);
    CHECK(out.values[0] == doctest::Approx(0.0));
    CHECK(out.values[1] == doctest::Approx(1.0));

    // constant raw data goes entirely to zero
    Sinogram flat = Sinogram::zeros(2, 3);
    for (double& v : flat.values) v = 123.0;
    for (double v : normalize_measured(flat).values) CHECK(v == 0.0);

    // 0.05 with floor 0.1 -> 0
    Sinogram small = Sinogram::zeros(1, 2);
    small.values = {1.0, std::exp(-0.05)};
    const Sinogram floored = normalize_measured(small, 0.1);
    CHECK(floored.values[0] == 0.0); // the max entry itself normalizes to 0
    CHECK(floored.values[1] == 0.0); // 0.05 < floor

    const Sinogram unfloored = normalize_measured(small, 0.0);
    CHECK(unfloored.values[1] == doctest::Approx(0.05).epsilon(1e-12));

    // scale invariance of the log difference
    Sinogram scaled = raw;
    for (double& v : scaled.values) v *= 77.0;
    const Sinogram out2 = normalize_measured(scaled, 0.0);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        CHECK(out2.values[i] == doctest::Approx(out.values[i]).epsilon(1e-12));

    Sinogram bad = Sinogram::zeros(1, 2);
    bad.values = {1.0, 0.0};
    CHECK_THROWS_WITH_AS(normalize_measured(bad), doctest::Contains("bin 1"), Error);
}

TEST_CASE("view subsampling") {
    MeasurementData full;
    full.geometry = FanBeamGeometry::standard(120, 64.0);
    full.sinogram = Sinogram::zeros(120, 4);
    for (int v = 0; v < 120; ++v)
        for (int b = 0; b < 4; ++b) full.sinogram.at(v, b) = v * 1000 + b;

    const MeasurementData six = subsample_views(full, 6);
    CHECK(six.sinogram.views == 6);
    CHECK(six.geometry.num_views == 6);
    for (int k = 0; k < 6; ++k)
        for (int b = 0; b < 4; ++b)
            CHECK(six.sinogram.at(k, b) == (k * 20) * 1000 + b); // views 0,20,...,100

    const MeasurementData same = subsample_views(full, 120);
    CHECK(same.sinogram.values == full.sinogram.values);

    CHECK_THROWS_AS(subsample_views(six, 4), Error); // 4 does not divide 6
}
