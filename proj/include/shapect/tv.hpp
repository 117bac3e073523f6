#pragma once

#include <memory>
#include <vector>

#include "shapect/fanbeam.hpp"
#include "shapect/raster.hpp"

namespace shapect {

/// Pixel-basis reconstruction problem ||A x - m||^2 + alpha * TV(x),
/// optionally constrained to non-negative pixels.
struct TvProblem {
    std::shared_ptr<const SystemMatrix> A;
    Sinogram m;
    int side = 0;
    double alpha = 1.0;
    bool nonneg = true;

    void validate() const;
};

/// Anisotropic total variation: sum of absolute horizontal and vertical
/// neighbor differences.
double tv_value(const RasterImage& img);

struct TvResult {
    RasterImage image;
    double objective = 0.0;
    bool converged = false;
    int iterations = 0;
    /// Objective of the incumbent (best-so-far) iterate at each check; the
    /// underlying primal-dual iteration is not a descent method, so the
    /// incumbent is what the solver reports and returns.
    std::vector<double> objective_trace;
};

/// Primal-dual (Chambolle-Pock) minimization. Stops early once the relative
/// improvement of the incumbent objective over a trailing window falls below
/// tol; otherwise runs max_iter iterations and reports converged = false.
/// Deterministic for fixed inputs.
TvResult tv_reconstruct(const TvProblem& prob, double tol = 1e-6, int max_iter = 4000);

/// Binarization at level beta: values below beta become 0, the rest beta.
/// Requires 0 < beta <= max(img).
RasterImage threshold(const RasterImage& img, double beta);

/// Regularization / threshold sweep grid.
struct SweepGrid {
    std::vector<double> alphas;
    std::vector<double> betas;

    /// 30 log-spaced alphas over [1e-6, 100]; 21 linear betas over
    /// [0.01, 0.03].
    static SweepGrid standard();
    void validate() const;
};

struct SweepEntry {
    double alpha;
    double beta;
    double shape_error_percent;
};

struct SweepResult {
    double alpha = 0.0;
    double beta = 0.0;
    double error_percent = 0.0;
    std::vector<SweepEntry> table; // exhaustive, alphas x betas
    RasterImage best_reconstruction;
    RasterImage best_thresholded;
};

/// Reconstructs once per alpha, thresholds per beta, scores against the
/// binary truth, and returns the oracle-optimal pair (ties toward smaller
/// alpha, then smaller beta).
SweepResult optimal_sweep(const TvProblem& base, const SweepGrid& grid, const RasterImage& truth,
                          double tol = 1e-6, int max_iter = 4000);

} // namespace shapect
