#include "shapect/tv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shapect/error.hpp"
#include "shapect/metrics.hpp"

namespace shapect {

void TvProblem::validate() const {
    if (!A) throw Error("TvProblem: system matrix not set");
    if (side < 2) throw Error("TvProblem: side must be >= 2");
    if (A->side() != side) throw Error("TvProblem: matrix side mismatch");
    if (static_cast<int>(m.values.size()) != A->rows())
        throw Error("TvProblem: sinogram length does not match matrix rows");
    if (!(alpha > 0.0)) throw Error("TvProblem: alpha must be positive");
}

double tv_value(const RasterImage& img) {
    const int n = img.side;
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 1; j < n; ++j) acc += std::abs(img.at(i, j) - img.at(i, j - 1));
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += std::abs(img.at(i, j) - img.at(i - 1, j));
    return acc;
}

namespace {

// Power iteration for ||A|| with a fixed deterministic start.
double operator_norm(const SystemMatrix& A) {
    const int n = A.cols();
    std::vector<double> x(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    double s = 1.0;
    for (int it = 0; it < 40; ++it) {
        std::vector<double> y = A.apply(x);
        std::vector<double> z = A.apply_transpose(y);
        double zn = 0.0;
        for (double v : z) zn += v * v;
        zn = std::sqrt(zn);
        if (zn == 0.0) return 0.0;
        s = std::sqrt(zn);
        for (std::size_t i = 0; i < z.size(); ++i) x[i] = z[i] / zn;
    }
    return s;
}

// Forward differences; h has N*(N-1) entries, v has (N-1)*N.
void grad(const std::vector<double>& x, int n, std::vector<double>& h, std::vector<double>& v) {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j + 1 < n; ++j)
            h[static_cast<std::size_t>(i) * (n - 1) + j] =
                x[static_cast<std::size_t>(i) * n + j + 1] - x[static_cast<std::size_t>(i) * n + j];
    for (int i = 0; i + 1 < n; ++i)
        for (int j = 0; j < n; ++j)
            v[static_cast<std::size_t>(i) * n + j] =
                x[static_cast<std::size_t>(i + 1) * n + j] - x[static_cast<std::size_t>(i) * n + j];
}

// Adjoint of grad: out += D^T (h, v).
void grad_adjoint_add(const std::vector<double>& h, const std::vector<double>& v, int n,
                      std::vector<double>& out) {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j + 1 < n; ++j) {
            const double g = h[static_cast<std::size_t>(i) * (n - 1) + j];
            out[static_cast<std::size_t>(i) * n + j] -= g;
            out[static_cast<std::size_t>(i) * n + j + 1] += g;
        }
    for (int i = 0; i + 1 < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double g = v[static_cast<std::size_t>(i) * n + j];
            out[static_cast<std::size_t>(i) * n + j] -= g;
            out[static_cast<std::size_t>(i + 1) * n + j] += g;
        }
}

} // namespace

TvResult tv_reconstruct(const TvProblem& prob, double tol, int max_iter) {
    prob.validate();
    if (!(tol > 0.0)) throw Error("tv_reconstruct: tol must be positive");
    if (max_iter < 1) throw Error("tv_reconstruct: max_iter must be >= 1");

    const SystemMatrix& A = *prob.A;
    const int n = prob.side;
    const int np = n * n;
    const int nh = n * (n - 1);
    const int nv = (n - 1) * n;

    // step sizes: tau * sigma * ||K||^2 <= 1 with K = [A; D], ||D||^2 <= 8
    const double na = operator_norm(A);
    const double knorm = std::sqrt(na * na + 8.0);
    const double tau = 0.95 / knorm;
    const double sigma = 0.95 / knorm;

    std::vector<double> x(static_cast<std::size_t>(np), 0.0);
    std::vector<double> x_bar = x;
    std::vector<double> y(A.rows(), 0.0);        // dual of the data term
    std::vector<double> qh(static_cast<std::size_t>(nh), 0.0); // dual of horizontal diffs
    std::vector<double> qv(static_cast<std::size_t>(nv), 0.0); // dual of vertical diffs

    std::vector<double> ax(A.rows());
    std::vector<double> h(static_cast<std::size_t>(nh));
    std::vector<double> v(static_cast<std::size_t>(nv));

    RasterImage cur;
    cur.side = n;

    auto objective = [&](const std::vector<double>& img) {
        A.apply(img.data(), ax.data());
        double data = 0.0;
        for (int i = 0; i < A.rows(); ++i) {
            const double r = ax[static_cast<std::size_t>(i)] - prob.m.values[static_cast<std::size_t>(i)];
            data += r * r;
        }
        cur.values = img;
        return data + prob.alpha * tv_value(cur);
    };

    TvResult result;
    result.image.side = n;
    result.image.values = x;
    result.objective = objective(x);
    result.objective_trace.push_back(result.objective);

    const int check_every = 10;
    const int window = 20; // convergence window, in checks

    int iter = 0;
    for (; iter < max_iter; ++iter) {
        // dual ascent
        A.apply(x_bar.data(), ax.data());
        for (int i = 0; i < A.rows(); ++i) {
            const double yt = y[static_cast<std::size_t>(i)] + sigma * ax[static_cast<std::size_t>(i)];
            y[static_cast<std::size_t>(i)] = (yt - sigma * prob.m.values[static_cast<std::size_t>(i)]) / (1.0 + sigma / 2.0);
        }
        grad(x_bar, n, h, v);
        for (int i = 0; i < nh; ++i)
            qh[static_cast<std::size_t>(i)] = std::clamp(qh[static_cast<std::size_t>(i)] + sigma * h[static_cast<std::size_t>(i)],
                                                         -prob.alpha, prob.alpha);
        for (int i = 0; i < nv; ++i)
            qv[static_cast<std::size_t>(i)] = std::clamp(qv[static_cast<std::size_t>(i)] + sigma * v[static_cast<std::size_t>(i)],
                                                         -prob.alpha, prob.alpha);

        // primal descent with over-relaxation
        std::vector<double> kty(static_cast<std::size_t>(np), 0.0);
        const std::vector<double> aty = A.apply_transpose(y);
        for (int i = 0; i < np; ++i) kty[static_cast<std::size_t>(i)] = aty[static_cast<std::size_t>(i)];
        grad_adjoint_add(qh, qv, n, kty);
        for (int i = 0; i < np; ++i) {
            double xn = x[static_cast<std::size_t>(i)] - tau * kty[static_cast<std::size_t>(i)];
            if (prob.nonneg && xn < 0.0) xn = 0.0;
            x_bar[static_cast<std::size_t>(i)] = 2.0 * xn - x[static_cast<std::size_t>(i)];
            x[static_cast<std::size_t>(i)] = xn;
        }

        if ((iter + 1) % check_every == 0) {
            const double obj = objective(x);
            if (obj < result.objective) {
                result.objective = obj;
                result.image.values = x;
            }
            result.objective_trace.push_back(result.objective);
            const std::size_t nchecks = result.objective_trace.size();
            if (nchecks > static_cast<std::size_t>(window)) {
                const double prev = result.objective_trace[nchecks - 1 - window];
                const double scale = std::max(std::abs(prev), 1e-300);
                if ((prev - result.objective) / scale < tol) {
                    result.converged = true;
                    ++iter;
                    break;
                }
            }
        }
    }
    result.iterations = iter;
    return result;
}

RasterImage threshold(const RasterImage& img, double beta) {
    double peak = 0.0;
    for (double v : img.values) peak = std::max(peak, v);
    if (!(beta > 0.0 && beta <= peak))
        throw Error("threshold: beta = " + std::to_string(beta) + " outside (0, max] = (0, " +
                    std::to_string(peak) + "]");
    RasterImage out = img;
    for (double& v : out.values) v = v < beta ? 0.0 : beta;
    return out;
}

SweepGrid SweepGrid::standard() {
    SweepGrid g;
    const int na = 30;
    const double lo = std::log10(1e-6), hi = std::log10(100.0);
    for (int i = 0; i < na; ++i)
        g.alphas.push_back(std::pow(10.0, lo + (hi - lo) * i / (na - 1)));
    const int nb = 21;
    for (int i = 0; i < nb; ++i)
        g.betas.push_back(0.01 + (0.03 - 0.01) * i / (nb - 1));
    return g;
}

void SweepGrid::validate() const {
    if (alphas.empty() || betas.empty()) throw Error("SweepGrid: empty grid");
    for (double a : alphas)
        if (!(a > 0.0)) throw Error("SweepGrid: alphas must be positive");
    for (double b : betas)
        if (!(b > 0.0)) throw Error("SweepGrid: betas must be positive");
    if (!std::is_sorted(alphas.begin(), alphas.end()) || !std::is_sorted(betas.begin(), betas.end()))
        throw Error("SweepGrid: grids must be sorted ascending");
}

SweepResult optimal_sweep(const TvProblem& base, const SweepGrid& grid, const RasterImage& truth,
                          double tol, int max_iter) {
    grid.validate();
    SweepResult best;
    best.error_percent = std::numeric_limits<double>::infinity();
    best.table.reserve(grid.alphas.size() * grid.betas.size());

    for (double alpha : grid.alphas) {
        TvProblem prob = base;
        prob.alpha = alpha;
        const TvResult recon = tv_reconstruct(prob, tol, max_iter);
        for (double beta : grid.betas) {
            // the binarization rule itself is total; beta above the image max
            // just yields an empty support
            RasterImage thresholded = recon.image;
            for (double& v : thresholded.values) v = v < beta ? 0.0 : beta;
            const double err = shape_error(truth, thresholded);
            best.table.push_back({alpha, beta, err});
            if (err < best.error_percent) {
                best.error_percent = err;
                best.alpha = alpha;
                best.beta = beta;
                best.best_reconstruction = recon.image;
                best.best_thresholded = std::move(thresholded);
            }
        }
    }
    return best;
}

} // namespace shapect
