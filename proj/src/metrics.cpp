#include "shapect/metrics.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <string>

#include "shapect/error.hpp"

namespace shapect {

namespace {
void require_binary(const RasterImage& img, const char* name) {
    std::set<double> levels;
    for (double v : img.values) {
        levels.insert(v);
        if (levels.size() > 2)
            throw Error(std::string("shape_error: ") + name + " image is not binary");
    }
}
} // namespace

double shape_error(const RasterImage& truth, const RasterImage& recon) {
    if (truth.side != recon.side)
        throw Error("shape_error: image sides differ (" + std::to_string(truth.side) + " vs " +
                    std::to_string(recon.side) + ")");
    require_binary(truth, "truth");
    require_binary(recon, "reconstruction");

    std::int64_t truth_area = 0;
    std::int64_t missed = 0;  // in truth, not in recon
    std::int64_t excess = 0;  // in recon, not in truth
    for (std::size_t i = 0; i < truth.values.size(); ++i) {
        const bool t = truth.values[i] > 0.0;
        const bool r = recon.values[i] > 0.0;
        truth_area += t;
        missed += (t && !r);
        excess += (!t && r);
    }
    if (truth_area == 0) throw Error("shape_error: truth support is empty");
    return 100.0 * static_cast<double>(missed + excess) / static_cast<double>(truth_area);
}

double attenuation_error(double c_true, double c_est) {
    if (!(c_true > 0.0)) throw Error("attenuation_error: true attenuation must be positive");
    return 100.0 * std::abs(c_est - c_true) / c_true;
}

} // namespace shapect
