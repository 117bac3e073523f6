#pragma once

#include <cstdint>
#include <vector>

#include "shapect/fanbeam.hpp"
#include "shapect/raster.hpp"

namespace shapect {

inline constexpr double kPhantomAttenuation = 0.027;

enum class PhantomLabel { Omega1, Omega2 };

PhantomLabel parse_phantom_label(const std::string& s);
std::string to_string(PhantomLabel label);

/// Homogeneous test object: binary image with values {0, 0.027}. Omega1 is a
/// convex rounded-pentagon blob, Omega2 the same blob with two wedge cavities
/// cut from opposite sides. Both outlines are corner-cut polygons, not
/// spline curves, so reconstruction never inverts its own forward model.
struct Phantom {
    RasterImage image;
    PhantomLabel label;
};

Phantom make_phantom(PhantomLabel label, int side);

/// Convex base outline in pixel units of `side` (dense corner-cut polygon).
std::vector<Vec2> phantom_base_outline(double side);
/// Cavity polygons subtracted from the base outline for Omega2.
std::vector<std::vector<Vec2>> phantom_cavities(double side);

struct MeasurementData {
    enum class Provenance { Simulated, Measured };

    Sinogram sinogram;
    FanBeamGeometry geometry;
    double noise_sigma = 0.0;
    Provenance provenance = Provenance::Simulated;
};

/// Forward-projects the phantom on its own fine grid and adds i.i.d. Gaussian
/// noise with sigma = (noise_percent/100) * max |clean| (max-referenced,
/// see config). A fixed seed reproduces the draw exactly.
MeasurementData simulate_data(const Phantom& ph, const FanBeamGeometry& geom,
                              double noise_percent, std::uint64_t seed);

/// Log-normalization of measured intensities: out_i = max_j log(raw_j) -
/// log(raw_i); entries below `floor` are then zeroed (air background).
Sinogram normalize_measured(const Sinogram& raw, double floor = 0.1);

/// Keeps every (num_views/keep)-th view starting at view 0; keep must divide
/// the view count.
MeasurementData subsample_views(const MeasurementData& full, int keep);

} // namespace shapect
