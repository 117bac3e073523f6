#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "shapect/fanbeam.hpp"
#include "shapect/phantom.hpp"
#include "shapect/prior.hpp"

namespace shapect {

/// Everything needed to evaluate the log-posterior of a shape: measurement,
/// geometry/grid, prior, and the noise level. Holds the cached system matrix
/// and a precomputed basis table so repeated evaluations stay cheap.
struct PosteriorProblem {
    MeasurementData data;
    int side = 64;
    PriorSpec prior;
    int degree = 3;
    double noise_sigma = 0.0;
    std::shared_ptr<const SystemMatrix> matrix;
    nurbs::BasisTable basis;
    mutable std::int64_t forward_evals = 0; // instrumentation

    static PosteriorProblem build(MeasurementData data, int side, PriorSpec prior, int degree,
                                  SystemMatrixCache& cache,
                                  std::optional<double> sigma_override = std::nullopt);
};

/// -||A(B(v)) - m||^2 / (2 sigma^2).
double log_likelihood(const ShapeParams& v, const PosteriorProblem& prob);

/// log_prior + log_likelihood; hard-constraint failures short-circuit to
/// -infinity without touching the forward model.
double log_posterior(const ShapeParams& v, const PosteriorProblem& prob);

struct DramConfig {
    std::int64_t n_iter = 100000;
    int n0 = 100;             // non-adaptation period
    int adapt_interval = 100; // iterations between covariance updates
    int dr_stages = 2;        // delayed-rejection stages (1 = plain MH)
    double dr_scale = 0.2;    // per-stage proposal shrink factor
    bool adapt = true;
    std::vector<double> init;      // flat initial state
    std::vector<double> init_step; // initial proposal std devs (diagonal)
    std::uint64_t seed = 1;
    double burn_in = 0.2;

    void validate() const;
    /// Proposal steps for a shape problem: 0.5 px radii, 1 degree angles,
    /// 0.01 attenuation.
    static std::vector<double> default_step(int point_count);
};

/// Ordered sample record. Entry k is the chain state after k transitions
/// (entry 0 is the initial state); accepted_stage is 0 for a rejected
/// proposal and the accepting DR stage otherwise.
struct Chain {
    std::vector<std::vector<double>> samples;
    std::vector<double> log_posts;
    std::vector<int> accepted_stage;
    std::uint64_t seed = 0;
    std::int64_t target_evals = 0; // posterior evaluations, DR stages included

    std::size_t size() const { return samples.size(); }
    int dimension() const { return samples.empty() ? 0 : static_cast<int>(samples.front().size()); }
    double acceptance_rate() const;
};

/// Log density of an arbitrary target; -infinity rejects outright.
using LogTarget = std::function<double(const std::vector<double>&)>;

/// Random-walk Metropolis, the textbook algorithm.
Chain mh_sample_target(const LogTarget& target, const DramConfig& cfg);

/// DRAM: delayed rejection (Mira's recursive acceptance, stage s proposing
/// from the stage-1 covariance shrunk by dr_scale^(s-1)) plus adaptive
/// Metropolis (proposal covariance 2.4^2/d times the running chain
/// covariance, refreshed every adapt_interval iterations after n0).
Chain dram_sample_target(const LogTarget& target, const DramConfig& cfg);

Chain mh_sample(const PosteriorProblem& prob, const DramConfig& cfg);
Chain dram_sample(const PosteriorProblem& prob, const DramConfig& cfg);

/// Drops the leading fraction of the chain.
Chain discard_burn_in(const Chain& chain, double fraction);

/// Plain component-wise mean of post-burn-in samples (order-invariant).
std::vector<double> posterior_mean(const Chain& chain, double burn_in);

/// Conditional-mean shape estimate. Angle components are averaged on the
/// circle (complex-argument mean) unless circular_angles is false, which
/// reproduces a raw component average.
ShapeParams cm_estimate(const Chain& chain, double burn_in, bool circular_angles = true);

/// Z-score comparing the means of the first frac_a and last frac_b of the
/// chain, with spectral-density (Bartlett window) variance estimates.
double geweke_z(const Chain& chain, int component, double frac_a = 0.1, double frac_b = 0.5);

/// The k stored states with the highest recorded log-posterior, descending.
std::vector<std::vector<double>> top_posterior_states(const Chain& chain, int k);

} // namespace shapect
