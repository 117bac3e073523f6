#include "shapect/prior.hpp"

#include <cmath>
#include <limits>

#include "shapect/error.hpp"

namespace shapect {

PriorSpec PriorSpec::standard(int point_count, double r_center, double c_center) {
    if (point_count < 3) throw Error("PriorSpec: need at least 3 control points");
    PriorSpec spec;
    const double slice = kTwoPi / point_count;
    spec.center.radii.assign(static_cast<std::size_t>(point_count), r_center);
    spec.center.angles.resize(static_cast<std::size_t>(point_count));
    for (int i = 0; i < point_count; ++i)
        spec.center.angles[static_cast<std::size_t>(i)] = slice * i;
    spec.center.c = c_center;

    spec.sigma.clear();
    for (int i = 0; i < point_count; ++i) {
        spec.sigma.push_back(10.0);       // radius, pixels
        spec.sigma.push_back(slice / 2.0); // angle, radians
    }
    spec.sigma.push_back(0.05); // attenuation

    spec.r_max = 2.0 * r_center;
    spec.angle_windows.resize(static_cast<std::size_t>(point_count));
    for (int i = 0; i < point_count; ++i) {
        const double a = spec.center.angles[static_cast<std::size_t>(i)];
        spec.angle_windows[static_cast<std::size_t>(i)] = {a - slice / 2.0, a + slice / 2.0};
    }
    spec.osc_k = 2.0;
    spec.forbid_self_intersection = true;
    spec.validate();
    return spec;
}

void PriorSpec::validate() const {
    center.validate();
    const int n1 = center.point_count();
    if (static_cast<int>(sigma.size()) != 2 * n1 + 1)
        throw Error("PriorSpec: sigma length must be 2n+3");
    for (double s : sigma)
        if (!(s > 0.0)) throw Error("PriorSpec: sigma entries must be positive");
    if (!(r_max > 0.0)) throw Error("PriorSpec: r_max must be positive");
    if (!(osc_k > 0.0)) throw Error("PriorSpec: oscillation constant must be positive");
    if (static_cast<int>(angle_windows.size()) != n1)
        throw Error("PriorSpec: need one angle window per control point");
    for (const auto& [lo, hi] : angle_windows)
        if (!(lo < hi)) throw Error("PriorSpec: angle window must have min < max");
}

double log_gaussian_prior(const ShapeParams& v, const PriorSpec& spec) {
    const int n1 = spec.center.point_count();
    if (v.point_count() != n1)
        throw Error("log_gaussian_prior: dimension mismatch");
    double acc = 0.0;
    for (int i = 0; i < n1; ++i) {
        const double dr = v.radii[static_cast<std::size_t>(i)] - spec.center.radii[static_cast<std::size_t>(i)];
        const double sr = spec.sigma[static_cast<std::size_t>(2 * i)];
        acc += dr * dr / (sr * sr);
        const double dt = wrap_angle(v.angles[static_cast<std::size_t>(i)] - spec.center.angles[static_cast<std::size_t>(i)]);
        const double st = spec.sigma[static_cast<std::size_t>(2 * i + 1)];
        acc += dt * dt / (st * st);
    }
    const double dc = v.c - spec.center.c;
    const double sc = spec.sigma.back();
    acc += dc * dc / (sc * sc);
    return -0.5 * acc;
}

ConstraintReport check_hard_constraints(const ShapeParams& v, const PriorSpec& spec, int degree) {
    (void)degree;
    ConstraintReport report;
    const int n1 = v.point_count();
    if (n1 != spec.center.point_count()) {
        report.violations.push_back({'a', -1, "dimension mismatch with prior"});
        return report;
    }

    // Each angle expressed as an offset from its own window center; neighbor
    // comparisons bridge the 0/2pi seam through the positive wrapped gap
    // between window centers, so the test only depends on the circular
    // arrangement, not on which point carries index 0.
    std::vector<double> wc(static_cast<std::size_t>(n1));
    std::vector<double> delta(static_cast<std::size_t>(n1));
    for (int i = 0; i < n1; ++i) {
        const auto& [lo, hi] = spec.angle_windows[static_cast<std::size_t>(i)];
        wc[static_cast<std::size_t>(i)] = 0.5 * (lo + hi);
        delta[static_cast<std::size_t>(i)] =
            wrap_angle(v.angles[static_cast<std::size_t>(i)] - wc[static_cast<std::size_t>(i)]);
    }
    auto positive_gap = [](double a) {
        double w = wrap_angle(a);
        if (w <= 0.0) w += kTwoPi;
        return w;
    };
    for (int i = 0; i < n1; ++i) {
        const auto& [wlo, whi] = spec.angle_windows[static_cast<std::size_t>(i)];
        const int im2 = ((i - 2) % n1 + n1) % n1;
        const int ip2 = (i + 2) % n1;
        const double gap_below = positive_gap(wc[static_cast<std::size_t>(i)] - wc[static_cast<std::size_t>(im2)]);
        const double gap_above = positive_gap(wc[static_cast<std::size_t>(ip2)] - wc[static_cast<std::size_t>(i)]);
        const double lower = std::max(delta[static_cast<std::size_t>(im2)] - gap_below,
                                      wlo - wc[static_cast<std::size_t>(i)]);
        const double upper = std::min(delta[static_cast<std::size_t>(ip2)] + gap_above,
                                      whi - wc[static_cast<std::size_t>(i)]);
        const double di = delta[static_cast<std::size_t>(i)];
        if (!(lower <= di && di <= upper))
            report.violations.push_back({'a', i, "angle outside [max(theta_{i-2}, window), min(theta_{i+2}, window)]"});
    }

    for (int i = 0; i < n1; ++i) {
        const double r = v.radii[static_cast<std::size_t>(i)];
        if (!(r >= 0.0 && r <= spec.r_max))
            report.violations.push_back({'b', i, "radius outside [0, r_max]"});
    }
    // attenuation sign, reported under the bound clause with index n+1
    if (!(v.c >= 0.0))
        report.violations.push_back({'b', n1, "attenuation must be >= 0"});

    const std::vector<Vec2> poly = v.control_polygon();
    for (int i = 0; i < n1; ++i) {
        const Vec2& a = poly[static_cast<std::size_t>(i)];
        const Vec2& b = poly[static_cast<std::size_t>((i + 1) % n1)];
        const Vec2& c = poly[static_cast<std::size_t>((i + 2) % n1)];
        const Vec2& d = poly[static_cast<std::size_t>((i + 3) % n1)];
        if (norm(d - c) > spec.osc_k * norm(b - a))
            report.violations.push_back({'c', i, "edge more than k times the edge two before it"});
    }

    if (spec.forbid_self_intersection) {
        for (int i = 0; i < n1; ++i) {
            for (int j = i + 2; j < n1; ++j) {
                if (i == 0 && j == n1 - 1) continue; // adjacent across the seam
                if (segments_intersect(poly[static_cast<std::size_t>(i)], poly[static_cast<std::size_t>((i + 1) % n1)],
                                       poly[static_cast<std::size_t>(j)], poly[static_cast<std::size_t>((j + 1) % n1)]))
                    report.violations.push_back({'d', i, "control polygon edges " + std::to_string(i) +
                                                             " and " + std::to_string(j) + " intersect"});
            }
        }
    }
    return report;
}

double log_prior(const ShapeParams& v, const PriorSpec& spec, int degree) {
    if (!check_hard_constraints(v, spec, degree).pass())
        return -std::numeric_limits<double>::infinity();
    return log_gaussian_prior(v, spec);
}

} // namespace shapect
