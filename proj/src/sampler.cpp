#include "shapect/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "shapect/error.hpp"
#include "shapect/rng.hpp"

namespace shapect {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
} // namespace

PosteriorProblem PosteriorProblem::build(MeasurementData data, int side, PriorSpec prior, int degree,
                                         SystemMatrixCache& cache, std::optional<double> sigma_override) {
    prior.validate();
    PosteriorProblem prob;
    prob.side = side;
    prob.degree = degree;
    prob.noise_sigma = sigma_override.value_or(data.noise_sigma);
    if (!(prob.noise_sigma > 0.0))
        throw Error("PosteriorProblem: noise sigma must be positive (got " +
                    std::to_string(prob.noise_sigma) + "); pass an override for noiseless data");
    prob.matrix = cache.get(data.geometry, side);
    prob.basis = nurbs::BasisTable::make(prior.center.point_count(), degree,
                                         polyline_samples_for(prior.center.point_count()));
    prob.prior = std::move(prior);
    prob.data = std::move(data);
    if (prob.matrix->rows() != prob.data.sinogram.size())
        throw Error("PosteriorProblem: sinogram layout does not match geometry");
    return prob;
}

double log_likelihood(const ShapeParams& v, const PosteriorProblem& prob) {
    ++prob.forward_evals;
    const RasterImage img = rasterize(v, prob.side, prob.basis);
    const std::vector<double>& m = prob.data.sinogram.values;
    std::vector<double> proj(m.size());
    prob.matrix->apply(img.values.data(), proj.data());
    double ss = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double r = proj[i] - m[i];
        ss += r * r;
    }
    return -ss / (2.0 * prob.noise_sigma * prob.noise_sigma);
}

double log_posterior(const ShapeParams& v, const PosteriorProblem& prob) {
    const double lp = log_prior(v, prob.prior, prob.degree);
    if (lp == kNegInf) return kNegInf; // never touch the forward model
    return lp + log_likelihood(v, prob);
}

void DramConfig::validate() const {
    if (n_iter < 1) throw Error("DramConfig: n_iter must be >= 1");
    if (n0 < 1) throw Error("DramConfig: n0 must be >= 1");
    if (adapt_interval < 1) throw Error("DramConfig: adapt_interval must be >= 1");
    if (dr_stages < 1) throw Error("DramConfig: dr_stages must be >= 1");
    if (!(dr_scale > 0.0 && dr_scale <= 1.0)) throw Error("DramConfig: dr_scale must be in (0, 1]");
    if (!(burn_in >= 0.0 && burn_in < 1.0)) throw Error("DramConfig: burn_in must be in [0, 1)");
    if (init.empty()) throw Error("DramConfig: initial state not set");
    if (init_step.size() != init.size()) throw Error("DramConfig: init_step size must match init");
    for (double s : init_step)
        if (!(s > 0.0)) throw Error("DramConfig: proposal steps must be positive");
}

std::vector<double> DramConfig::default_step(int point_count) {
    std::vector<double> step;
    for (int i = 0; i < point_count; ++i) {
        step.push_back(0.5);
        step.push_back(kPi / 180.0);
    }
    step.push_back(0.01);
    return step;
}

double Chain::acceptance_rate() const {
    if (samples.size() < 2) return 0.0;
    std::int64_t acc = 0;
    for (std::size_t i = 1; i < accepted_stage.size(); ++i)
        if (accepted_stage[i] > 0) ++acc;
    return static_cast<double>(acc) / static_cast<double>(accepted_stage.size() - 1);
}

namespace {

// Dense lower-triangular factor and solves; dimensions here are tiny
// (2n+3 <= a few dozen), so hand-rolled loops beat a library dependency.
class Cholesky {
public:
    // A is symmetric positive definite, row-major d x d. Returns false on
    // failure (keeps the previous factor usable).
    bool factor(const std::vector<double>& a, int d) {
        std::vector<double> l(static_cast<std::size_t>(d) * d, 0.0);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j <= i; ++j) {
                double s = a[static_cast<std::size_t>(i) * d + j];
                for (int k = 0; k < j; ++k)
                    s -= l[static_cast<std::size_t>(i) * d + k] * l[static_cast<std::size_t>(j) * d + k];
                if (i == j) {
                    if (!(s > 0.0)) return false;
                    l[static_cast<std::size_t>(i) * d + j] = std::sqrt(s);
                } else {
                    l[static_cast<std::size_t>(i) * d + j] = s / l[static_cast<std::size_t>(j) * d + j];
                }
            }
        }
        l_ = std::move(l);
        d_ = d;
        return true;
    }

    void set_diagonal(const std::vector<double>& std_devs) {
        d_ = static_cast<int>(std_devs.size());
        l_.assign(static_cast<std::size_t>(d_) * d_, 0.0);
        for (int i = 0; i < d_; ++i) l_[static_cast<std::size_t>(i) * d_ + i] = std_devs[static_cast<std::size_t>(i)];
    }

    // y += L z
    void add_mul(const std::vector<double>& z, std::vector<double>& y, double scale) const {
        for (int i = 0; i < d_; ++i) {
            double acc = 0.0;
            for (int j = 0; j <= i; ++j) acc += l_[static_cast<std::size_t>(i) * d_ + j] * z[static_cast<std::size_t>(j)];
            y[static_cast<std::size_t>(i)] += scale * acc;
        }
    }

    // || L^{-1} v ||^2 by forward substitution.
    double inv_quad(const std::vector<double>& v) const {
        double quad = 0.0;
        std::vector<double> u(static_cast<std::size_t>(d_));
        for (int i = 0; i < d_; ++i) {
            double s = v[static_cast<std::size_t>(i)];
            for (int j = 0; j < i; ++j) s -= l_[static_cast<std::size_t>(i) * d_ + j] * u[static_cast<std::size_t>(j)];
            u[static_cast<std::size_t>(i)] = s / l_[static_cast<std::size_t>(i) * d_ + i];
            quad += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
        }
        return quad;
    }

private:
    std::vector<double> l_;
    int d_ = 0;
};

// Running mean and scatter for adaptive Metropolis (Welford update).
class CovarianceTracker {
public:
    explicit CovarianceTracker(int d) : d_(d), mean_(static_cast<std::size_t>(d), 0.0),
                                        scatter_(static_cast<std::size_t>(d) * d, 0.0) {}

    void push(const std::vector<double>& x) {
        ++count_;
        std::vector<double> delta(static_cast<std::size_t>(d_));
        for (int i = 0; i < d_; ++i) delta[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - mean_[static_cast<std::size_t>(i)];
        for (int i = 0; i < d_; ++i) mean_[static_cast<std::size_t>(i)] += delta[static_cast<std::size_t>(i)] / count_;
        for (int i = 0; i < d_; ++i) {
            const double d2 = x[static_cast<std::size_t>(i)] - mean_[static_cast<std::size_t>(i)];
            for (int j = 0; j <= i; ++j)
                scatter_[static_cast<std::size_t>(i) * d_ + j] += delta[static_cast<std::size_t>(j)] * d2;
        }
    }

    // 2.4^2/d * (cov + ridge I), symmetric full matrix.
    std::vector<double> proposal_covariance(double ridge) const {
        std::vector<double> c(static_cast<std::size_t>(d_) * d_, 0.0);
        if (count_ < 2) return c;
        const double sd = 2.4 * 2.4 / d_;
        const double denom = static_cast<double>(count_ - 1);
        for (int i = 0; i < d_; ++i) {
            for (int j = 0; j <= i; ++j) {
                const double v = sd * scatter_[static_cast<std::size_t>(i) * d_ + j] / denom;
                c[static_cast<std::size_t>(i) * d_ + j] = v;
                c[static_cast<std::size_t>(j) * d_ + i] = v;
            }
            c[static_cast<std::size_t>(i) * d_ + i] += sd * ridge;
        }
        return c;
    }

    std::int64_t count() const { return count_; }

private:
    int d_;
    std::int64_t count_ = 0;
    std::vector<double> mean_;
    std::vector<double> scatter_;
};

// log(1 - exp(a)) for a <= 0.
double log1mexp(double a) {
    if (a >= 0.0) return kNegInf;
    if (a > -0.6931471805599453) return std::log(-std::expm1(a));
    return std::log1p(-std::exp(a));
}

// Recursive delayed-rejection acceptance (log). path holds the states
// x, y1, ..., yi of this DR episode with matching log densities; the
// stage-j proposal is Gaussian with covariance scale^{2(j-1)} L L^T, so the
// density constants cancel between the forward and reverse directions.
double log_dr_alpha(const std::vector<std::vector<double>>& path,
                    const std::vector<double>& logp,
                    const Cholesky& chol, double dr_scale) {
    const std::size_t i = path.size() - 1;
    if (logp[i] == kNegInf) return kNegInf;
    if (i == 1) return std::min(0.0, logp[1] - logp[0]);

    auto log_q = [&](const std::vector<double>& from, const std::vector<double>& to, std::size_t stage) {
        std::vector<double> diff(from.size());
        for (std::size_t k = 0; k < from.size(); ++k) diff[k] = to[k] - from[k];
        const double s = std::pow(dr_scale, static_cast<double>(stage - 1));
        return -0.5 * chol.inv_quad(diff) / (s * s);
    };

    double log_num = logp[i];
    double log_den = logp[0];
    for (std::size_t j = 1; j < i; ++j) {
        log_num += log_q(path[i], path[i - j], j);
        log_den += log_q(path[0], path[j], j);

        std::vector<std::vector<double>> rev(path.rbegin(), path.rbegin() + static_cast<std::ptrdiff_t>(j + 1));
        std::vector<double> rev_lp(logp.rbegin(), logp.rbegin() + static_cast<std::ptrdiff_t>(j + 1));
        const double a_rev = log_dr_alpha(rev, rev_lp, chol, dr_scale);
        if (a_rev >= 0.0) return kNegInf; // reverse path would have accepted earlier
        log_num += log1mexp(a_rev);

        std::vector<std::vector<double>> fwd(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(j + 1));
        std::vector<double> fwd_lp(logp.begin(), logp.begin() + static_cast<std::ptrdiff_t>(j + 1));
        const double a_fwd = log_dr_alpha(fwd, fwd_lp, chol, dr_scale);
        log_den += log1mexp(a_fwd); // a_fwd < 0: this stage was rejected
    }
    return std::min(0.0, log_num - log_den);
}

Chain run_chain(const LogTarget& target, const DramConfig& cfg, bool enable_dr, bool enable_adapt) {
    cfg.validate();
    const int d = static_cast<int>(cfg.init.size());
    const int stages = enable_dr ? cfg.dr_stages : 1;

    Chain chain;
    chain.seed = cfg.seed;
    chain.samples.reserve(static_cast<std::size_t>(cfg.n_iter));
    chain.log_posts.reserve(static_cast<std::size_t>(cfg.n_iter));
    chain.accepted_stage.reserve(static_cast<std::size_t>(cfg.n_iter));

    std::vector<double> x = cfg.init;
    double logp = target(x);
    ++chain.target_evals;
    if (logp == kNegInf) throw Error("sampler: initial state is infeasible (log posterior = -inf)");

    chain.samples.push_back(x);
    chain.log_posts.push_back(logp);
    chain.accepted_stage.push_back(1);

    Rng rng(cfg.seed);
    Cholesky chol;
    chol.set_diagonal(cfg.init_step);

    CovarianceTracker tracker(d);
    tracker.push(x);

    std::vector<double> z(static_cast<std::size_t>(d));
    for (std::int64_t iter = 1; iter < cfg.n_iter; ++iter) {
        std::vector<std::vector<double>> path{x};
        std::vector<double> logps{logp};
        int accepted = 0;

        for (int stage = 1; stage <= stages; ++stage) {
            for (int k = 0; k < d; ++k) z[static_cast<std::size_t>(k)] = rng.normal();
            std::vector<double> y = x;
            chol.add_mul(z, y, std::pow(cfg.dr_scale, stage - 1));

            const double logp_y = target(y);
            ++chain.target_evals;
            path.push_back(std::move(y));
            logps.push_back(logp_y);

            const double log_alpha = log_dr_alpha(path, logps, chol, cfg.dr_scale);
            const double u = rng.uniform01();
            if (std::log(u) <= log_alpha) {
                x = path.back();
                logp = logp_y;
                accepted = stage;
                break;
            }
        }

        chain.samples.push_back(x);
        chain.log_posts.push_back(logp);
        chain.accepted_stage.push_back(accepted);

        tracker.push(x);
        if (enable_adapt && iter >= cfg.n0 && iter % cfg.adapt_interval == 0) {
            double ridge = 1e-10;
            for (int attempt = 0; attempt < 6; ++attempt, ridge *= 10.0)
                if (chol.factor(tracker.proposal_covariance(ridge), d)) break;
        }
    }
    return chain;
}

} // namespace

Chain mh_sample_target(const LogTarget& target, const DramConfig& cfg) {
    return run_chain(target, cfg, /*enable_dr=*/false, /*enable_adapt=*/false);
}

Chain dram_sample_target(const LogTarget& target, const DramConfig& cfg) {
    return run_chain(target, cfg, /*enable_dr=*/true, cfg.adapt);
}

namespace {
LogTarget posterior_target(const PosteriorProblem& prob) {
    return [&prob](const std::vector<double>& flat) {
        return log_posterior(ShapeParams::from_flat(flat), prob);
    };
}
} // namespace

Chain mh_sample(const PosteriorProblem& prob, const DramConfig& cfg) {
    return mh_sample_target(posterior_target(prob), cfg);
}

Chain dram_sample(const PosteriorProblem& prob, const DramConfig& cfg) {
    return dram_sample_target(posterior_target(prob), cfg);
}

Chain discard_burn_in(const Chain& chain, double fraction) {
    if (!(fraction >= 0.0 && fraction < 1.0))
        throw Error("discard_burn_in: fraction must be in [0, 1)");
    const std::size_t skip = static_cast<std::size_t>(fraction * static_cast<double>(chain.size()));
    if (skip >= chain.size()) throw Error("discard_burn_in: no samples left");
    Chain out;
    out.seed = chain.seed;
    out.target_evals = chain.target_evals;
    out.samples.assign(chain.samples.begin() + static_cast<std::ptrdiff_t>(skip), chain.samples.end());
    out.log_posts.assign(chain.log_posts.begin() + static_cast<std::ptrdiff_t>(skip), chain.log_posts.end());
    out.accepted_stage.assign(chain.accepted_stage.begin() + static_cast<std::ptrdiff_t>(skip), chain.accepted_stage.end());
    return out;
}

std::vector<double> posterior_mean(const Chain& chain, double burn_in) {
    const Chain kept = discard_burn_in(chain, burn_in);
    if (kept.samples.empty()) throw Error("posterior_mean: empty chain");
    const int d = kept.dimension();
    std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
    for (const std::vector<double>& s : kept.samples)
        for (int i = 0; i < d; ++i) mean[static_cast<std::size_t>(i)] += s[static_cast<std::size_t>(i)];
    for (double& m : mean) m /= static_cast<double>(kept.samples.size());
    return mean;
}

ShapeParams cm_estimate(const Chain& chain, double burn_in, bool circular_angles) {
    const Chain kept = discard_burn_in(chain, burn_in);
    if (kept.samples.empty()) throw Error("cm_estimate: empty chain after burn-in");
    const int d = kept.dimension();
    if (d < 5 || d % 2 == 0) throw Error("cm_estimate: chain dimension is not a shape layout");
    const int n1 = (d - 1) / 2;

    std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
    std::vector<double> sin_acc(static_cast<std::size_t>(n1), 0.0);
    std::vector<double> cos_acc(static_cast<std::size_t>(n1), 0.0);
    for (const std::vector<double>& s : kept.samples) {
        for (int i = 0; i < d; ++i) mean[static_cast<std::size_t>(i)] += s[static_cast<std::size_t>(i)];
        for (int i = 0; i < n1; ++i) {
            sin_acc[static_cast<std::size_t>(i)] += std::sin(s[static_cast<std::size_t>(2 * i + 1)]);
            cos_acc[static_cast<std::size_t>(i)] += std::cos(s[static_cast<std::size_t>(2 * i + 1)]);
        }
    }
    for (double& m : mean) m /= static_cast<double>(kept.samples.size());

    ShapeParams est = ShapeParams::from_flat(mean);
    if (circular_angles)
        for (int i = 0; i < n1; ++i)
            est.angles[static_cast<std::size_t>(i)] =
                std::atan2(sin_acc[static_cast<std::size_t>(i)], cos_acc[static_cast<std::size_t>(i)]);
    return est;
}

namespace {
// Spectral density at frequency zero via Bartlett-windowed autocovariances.
double spectral_variance(const double* x, std::size_t n) {
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x[i];
    mean /= static_cast<double>(n);
    const std::size_t max_lag = std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::cbrt(static_cast<double>(n))));
    double s = 0.0;
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        double g = 0.0;
        for (std::size_t i = lag; i < n; ++i) g += (x[i] - mean) * (x[i - lag] - mean);
        g /= static_cast<double>(n);
        const double w = 1.0 - static_cast<double>(lag) / static_cast<double>(max_lag + 1);
        s += (lag == 0 ? 1.0 : 2.0 * w) * g;
    }
    return s;
}
} // namespace

double geweke_z(const Chain& chain, int component, double frac_a, double frac_b) {
    const std::size_t n = chain.size();
    if (!(frac_a > 0.0 && frac_b > 0.0 && frac_a + frac_b <= 1.0))
        throw Error("geweke_z: window fractions must be positive with frac_a + frac_b <= 1");
    const std::size_t na = static_cast<std::size_t>(frac_a * static_cast<double>(n));
    const std::size_t nb = static_cast<std::size_t>(frac_b * static_cast<double>(n));
    if (na < 2 || nb < 2) throw Error("geweke_z: chain too short for the requested windows");

    std::vector<double> a(na), b(nb);
    for (std::size_t i = 0; i < na; ++i) a[i] = chain.samples[i][static_cast<std::size_t>(component)];
    for (std::size_t i = 0; i < nb; ++i) b[i] = chain.samples[n - nb + i][static_cast<std::size_t>(component)];

    const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(na);
    const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(nb);
    const double sa = spectral_variance(a.data(), na);
    const double sb = spectral_variance(b.data(), nb);
    if (!(sa > 0.0) || !(sb > 0.0))
        throw Error("geweke_z: degenerate (zero-variance) window");
    return (mean_a - mean_b) / std::sqrt(sa / static_cast<double>(na) + sb / static_cast<double>(nb));
}

std::vector<std::vector<double>> top_posterior_states(const Chain& chain, int k) {
    if (k < 1) throw Error("top_posterior_states: k must be >= 1");
    if (static_cast<std::size_t>(k) > chain.size())
        throw Error("top_posterior_states: k exceeds chain length");
    std::vector<std::size_t> idx(chain.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return chain.log_posts[a] > chain.log_posts[b];
    });
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out.push_back(chain.samples[idx[static_cast<std::size_t>(i)]]);
    return out;
}

} // namespace shapect
