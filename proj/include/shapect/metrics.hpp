#pragma once

#include <string>

#include "shapect/raster.hpp"

namespace shapect {

/// Symmetric-difference area of the two supports relative to the truth
/// support, in percent: 100 * (|O \ O_rec| + |O_rec \ O|) / |O|. Supports
/// are the strictly positive pixels; both images must be binary.
double shape_error(const RasterImage& truth, const RasterImage& recon);

/// 100 * |c_est - c_true| / c_true.
double attenuation_error(double c_true, double c_est);

struct ErrorReport {
    std::string method;
    double shape_error_percent = 0.0;
    double attenuation_error_percent = 0.0;
    double runtime_seconds = 0.0;
};

} // namespace shapect
