#pragma once

#include <string>
#include <utility>
#include <vector>

#include "shapect/raster.hpp"

namespace shapect {

/// Gaussian soft prior around a reference shape plus hard feasibility
/// constraints. The Gaussian width is per-component (radii / angles / c have
/// different units); a scalar width is the special case of equal entries.
struct PriorSpec {
    ShapeParams center;
    std::vector<double> sigma;                           // length 2n+3
    double r_max = 0.0;                                  // radius cap
    std::vector<std::pair<double, double>> angle_windows; // per control point
    double osc_k = 2.0;                                  // edge-length ratio bound
    bool forbid_self_intersection = true;

    /// Reference at uniform angles, constant radius r_center, attenuation
    /// c_center; widths 10 px / pi/(n+1) / 0.05; windows tiling the circle.
    static PriorSpec standard(int point_count, double r_center, double c_center);

    void validate() const;
};

struct ConstraintViolation {
    char clause; // 'a' angle window/order, 'b' radius, 'c' oscillation, 'd' intersection
    int index;
    std::string detail;
};

struct ConstraintReport {
    std::vector<ConstraintViolation> violations;
    bool pass() const { return violations.empty(); }
};

/// Log of the unnormalized Gaussian prior density, angles differenced on the
/// circle. Zero at the reference shape.
double log_gaussian_prior(const ShapeParams& v, const PriorSpec& spec);

/// Classifies v against the hard constraints:
///   (a) cyclically, max{theta_{i-2}, window min} <= theta_i <= min{theta_{i+2}, window max}
///   (b) 0 <= r_i <= r_max
///   (c) each control-polygon edge at most osc_k times the edge two before it
///   (d) no two non-adjacent control-polygon edges intersect (when enabled)
/// Total function; the report names every violated clause and index.
ConstraintReport check_hard_constraints(const ShapeParams& v, const PriorSpec& spec, int degree);

/// -infinity when a hard constraint fails, otherwise log_gaussian_prior.
double log_prior(const ShapeParams& v, const PriorSpec& spec, int degree);

} // namespace shapect
