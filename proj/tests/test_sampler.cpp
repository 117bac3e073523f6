#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "shapect/error.hpp"
#include "shapect/rng.hpp"
#include "shapect/sampler.hpp"

using namespace shapect;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DramConfig stub_config(std::vector<double> init, std::vector<double> step, std::int64_t iters,
                       std::uint64_t seed) {
    DramConfig cfg;
    cfg.n_iter = iters;
    cfg.init = std::move(init);
    cfg.init_step = std::move(step);
    cfg.seed = seed;
    return cfg;
}

LogTarget gaussian2d(double mx, double my, double sd) {
    return [=](const std::vector<double>& x) {
        const double dx = (x[0] - mx) / sd;
        const double dy = (x[1] - my) / sd;
        return -0.5 * (dx * dx + dy * dy);
    };
}

PosteriorProblem small_problem(SystemMatrixCache& cache, int n_points = 6, int side = 32) {
    const Phantom ph = make_phantom(PhantomLabel::Omega1, 2 * side);
    const FanBeamGeometry geom = FanBeamGeometry::standard(6, side);
    const MeasurementData data = simulate_data(ph, geom, 0.1, 5);
    const PriorSpec prior = PriorSpec::standard(n_points, side / 2.0, 0.1);
    return PosteriorProblem::build(data, side, prior, 3, cache);
}

std::vector<double> component(const Chain& chain, int c) {
    std::vector<double> out(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i) out[i] = chain.samples[i][static_cast<std::size_t>(c)];
    return out;
}

} // namespace

TEST_CASE("likelihood: zero residual, sigma scaling, independent-path oracle") {
    SystemMatrixCache cache;
    PosteriorProblem prob = small_problem(cache);

    ShapeParams v = prob.prior.center;
    v.radii = {14.0, 12.0, 15.0, 13.0, 11.0, 14.5};
    v.c = 0.027;

    // data reproduced exactly -> log-likelihood 0
    PosteriorProblem exact = prob;
    exact.data.sinogram = project(*prob.matrix, rasterize(v, prob.side, prob.basis));
    CHECK(log_likelihood(v, exact) == 0.0);

    // halving sigma multiplies the value by 4
    PosteriorProblem half = prob;
    half.noise_sigma = prob.noise_sigma / 2.0;
    CHECK(log_likelihood(v, half) == doctest::Approx(4.0 * log_likelihood(v, prob)).epsilon(1e-12));

    // independent recomputation: fresh matrix, dense residual loop
    const SystemMatrix fresh = build_matrix(prob.data.geometry, prob.side);
    const RasterImage img = rasterize(v, prob.side, 3);
    const Sinogram proj = project(fresh, img);
    double ss = 0.0;
    for (std::size_t i = 0; i < proj.values.size(); ++i) {
        const double r = proj.values[i] - prob.data.sinogram.values[i];
        ss += r * r;
    }
    const double reference = -ss / (2.0 * prob.noise_sigma * prob.noise_sigma);
    CHECK(log_likelihood(v, prob) == doctest::Approx(reference).epsilon(1e-10));
}

TEST_CASE("posterior: short-circuit on infeasible states, composition, monotone in residual") {
    SystemMatrixCache cache;
    PosteriorProblem prob = small_problem(cache);

    ShapeParams bad = prob.prior.center;
    bad.radii[0] = -3.0;
    prob.forward_evals = 0;
    CHECK(log_posterior(bad, prob) == -kInf);
    CHECK(prob.forward_evals == 0); // hard constraints short-circuit

    ShapeParams good = prob.prior.center;
    good.c = 0.027;
    CHECK(log_posterior(good, prob) ==
          doctest::Approx(log_prior(good, prob.prior, 3) + log_likelihood(good, prob)).epsilon(1e-12));

    // moving c toward the data-consistent value increases the posterior
    ShapeParams far = good;
    far.c = 1.0;
    CHECK(log_posterior(good, prob) > log_posterior(far, prob));
}

TEST_CASE("infeasible init raises before sampling") {
    SystemMatrixCache cache;
    PosteriorProblem prob = small_problem(cache);
    DramConfig cfg;
    ShapeParams init = prob.prior.center;
    init.radii[1] = -1.0;
    cfg.init = init.to_flat();
    cfg.init_step = DramConfig::default_step(6);
    cfg.n_iter = 10;
    CHECK_THROWS_AS(mh_sample(prob, cfg), Error);
}

TEST_CASE("identical seeds give identical chains; tiny steps accept everything") {
    const LogTarget target = gaussian2d(1.0, -2.0, 1.0);
    const DramConfig cfg = stub_config({0.0, 0.0}, {0.3, 0.3}, 5000, 99);
    const Chain a = mh_sample_target(target, cfg);
    const Chain b = mh_sample_target(target, cfg);
    CHECK(a.samples == b.samples);
    CHECK(a.accepted_stage == b.accepted_stage);

    const Chain tiny = mh_sample_target(target, stub_config({0.0, 0.0}, {1e-9, 1e-9}, 2000, 7));
    CHECK(tiny.acceptance_rate() > 0.999);
}

TEST_CASE("2D gaussian stub: sample mean within 3 standard errors at 100k steps") {
    const double mx = 1.5, my = -0.7, sd = 2.0;
    DramConfig cfg = stub_config({0.0, 0.0}, {1.0, 1.0}, 100000, 2024);
    const Chain chain = dram_sample_target(gaussian2d(mx, my, sd), cfg);
    const std::vector<double> mean = posterior_mean(chain, 0.1);

    // batch-means standard error (20 batches) as the oracle scale
    for (int c = 0; c < 2; ++c) {
        const std::vector<double> xs = component(discard_burn_in(chain, 0.1), c);
        const int nb = 20;
        const std::size_t bs = xs.size() / nb;
        std::vector<double> bm(nb, 0.0);
        for (int b = 0; b < nb; ++b) {
            for (std::size_t k = 0; k < bs; ++k) bm[b] += xs[b * bs + k];
            bm[b] /= static_cast<double>(bs);
        }
        double bmean = 0.0;
        for (double v : bm) bmean += v;
        bmean /= nb;
        double bvar = 0.0;
        for (double v : bm) bvar += (v - bmean) * (v - bmean);
        bvar /= (nb - 1);
        const double se = std::sqrt(bvar / nb);
        const double target_mean = c == 0 ? mx : my;
        CHECK(std::abs(mean[c] - target_mean) < 3.0 * se);
    }
}

TEST_CASE("dram with one stage and no adaptation degenerates to plain MH bit-exactly") {
    SystemMatrixCache cache;
    PosteriorProblem prob = small_problem(cache);
    DramConfig cfg;
    cfg.init = prob.prior.center.to_flat();
    cfg.init.back() = 0.05;
    cfg.init_step = DramConfig::default_step(6);
    cfg.n_iter = 400;
    cfg.seed = 31;
    cfg.dr_stages = 1;
    cfg.adapt = false;

    const Chain mh = mh_sample(prob, cfg);
    const Chain dram = dram_sample(prob, cfg);
    REQUIRE(mh.size() == dram.size());
    CHECK(mh.samples == dram.samples); // bit-identical states
    CHECK(mh.log_posts == dram.log_posts);
    CHECK(mh.accepted_stage == dram.accepted_stage);
}

TEST_CASE("five-state stub: empirical stationary distribution within TV 0.02") {
    // piecewise-constant density on [-0.5, 4.5): state i on [i-0.5, i+0.5)
    const std::vector<double> target_probs{0.35, 0.05, 0.25, 0.15, 0.20};
    const LogTarget target = [&](const std::vector<double>& x) {
        const double v = x[0];
        if (v < -0.5 || v >= 4.5) return -kInf;
        const int state = static_cast<int>(std::floor(v + 0.5));
        return std::log(target_probs[static_cast<std::size_t>(state)]);
    };
    DramConfig cfg = stub_config({0.0}, {1.5}, 1000000, 11);
    const Chain chain = mh_sample_target(target, cfg);

    std::vector<double> occupancy(5, 0.0);
    for (const auto& s : chain.samples)
        occupancy[static_cast<std::size_t>(std::floor(s[0] + 0.5))] += 1.0;
    double tv_dist = 0.0;
    for (int k = 0; k < 5; ++k)
        tv_dist += std::abs(occupancy[k] / static_cast<double>(chain.size()) - target_probs[k]);
    tv_dist /= 2.0;
    CHECK(tv_dist < 0.02);

    // every stored state has finite log density (rejected -inf proposals
    // never enter the chain)
    for (std::size_t i = 0; i < chain.size(); ++i) CHECK(std::isfinite(chain.log_posts[i]));
}

TEST_CASE("banana stub: DRAM effective sample size beats plain MH at matched iterations") {
    // curved ridge: x2 follows x1^2
    const LogTarget banana = [](const std::vector<double>& x) {
        const double a = x[0] / 2.0;
        const double b = x[1] + 0.5 * (x[0] * x[0] - 4.0);
        return -0.5 * (a * a + b * b);
    };
    const std::int64_t iters = 30000;
    // deliberately poor fixed proposal for the plain sampler
    const Chain mh = mh_sample_target(banana, stub_config({0.0, 0.0}, {0.15, 0.15}, iters, 5));
    DramConfig cfg = stub_config({0.0, 0.0}, {0.15, 0.15}, iters, 5);
    const Chain dram = dram_sample_target(banana, cfg);

    const double ess_mh = oracle::effective_sample_size(component(discard_burn_in(mh, 0.2), 0));
    const double ess_dram = oracle::effective_sample_size(component(discard_burn_in(dram, 0.2), 0));
    CHECK(ess_dram >= ess_mh);
}

TEST_CASE("acceptance fraction lands in a healthy band after adaptation") {
    DramConfig cfg = stub_config({0.0, 0.0}, {5.0, 5.0}, 40000, 77);
    const Chain chain = dram_sample_target(gaussian2d(0.0, 0.0, 1.0), cfg);
    // post-adaptation window
    std::int64_t acc = 0, total = 0;
    for (std::size_t i = chain.size() / 2; i < chain.size(); ++i) {
        acc += chain.accepted_stage[i] > 0;
        ++total;
    }
    const double rate = static_cast<double>(acc) / static_cast<double>(total);
    CHECK(rate > 0.1);
    CHECK(rate < 0.6);
}

TEST_CASE("delayed rejection rescues oversized proposals") {
    // with huge stage-1 steps, stage 2 (shrunk by dr_scale) keeps the chain
    // moving; plain MH with the same steps accepts almost nothing
    const LogTarget target = gaussian2d(0.0, 0.0, 1.0);
    DramConfig big = stub_config({0.0, 0.0}, {40.0, 40.0}, 20000, 3);
    big.adapt = false;
    big.dr_scale = 0.02;
    const Chain mh = mh_sample_target(target, big);
    big.dr_stages = 2;
    const Chain dram = dram_sample_target(target, big);
    CHECK(dram.acceptance_rate() > 2.0 * mh.acceptance_rate());

    int stage2 = 0;
    for (int s : dram.accepted_stage) stage2 += s == 2;
    CHECK(stage2 > 0);
}

TEST_CASE("posterior_mean is order-invariant; cm_estimate averages angles circularly") {
    Chain chain;
    chain.samples = {{1.0, -0.1, 2.0, kPi - 0.2, 0.5}, {3.0, 0.1, 4.0, -kPi + 0.2, 0.7}};
    chain.log_posts = {0.0, 0.0};
    chain.accepted_stage = {1, 1};

    const std::vector<double> mean = posterior_mean(chain, 0.0);
    CHECK(mean[0] == doctest::Approx(2.0));
    CHECK(mean[4] == doctest::Approx(0.6));

    Chain swapped = chain;
    std::swap(swapped.samples[0], swapped.samples[1]);
    CHECK(posterior_mean(swapped, 0.0) == mean);

    // angles at +-(pi - 0.2) straddle the seam: circular mean is pi, not 0
    const ShapeParams est = cm_estimate(chain, 0.0, true);
    CHECK(std::abs(wrap_angle(est.angles[1] - kPi)) < 1e-12);
    CHECK(est.angles[0] == doctest::Approx(0.0).epsilon(1e-12));

    // raw mode reproduces the plain component average
    const ShapeParams raw = cm_estimate(chain, 0.0, false);
    CHECK(raw.angles[1] == doctest::Approx(0.0).epsilon(1e-12));

    // constant chain -> that constant
    Chain constant;
    constant.samples = {{2.0, 0.3, 0.9}, {2.0, 0.3, 0.9}};
    constant.log_posts = {0.0, 0.0};
    constant.accepted_stage = {1, 1};
    const ShapeParams c_est = cm_estimate(constant, 0.0);
    CHECK(c_est.radii[0] == 2.0);
    CHECK(c_est.c == 0.9);

    CHECK_THROWS_AS(cm_estimate(Chain{}, 0.0), Error);
}

TEST_CASE("two-angle circular mean example") {
    Chain chain;
    chain.samples = {{1.0, -0.1, 0.5}, {1.0, 0.1, 0.5}};
    chain.log_posts = {0.0, 0.0};
    chain.accepted_stage = {1, 1};
    const ShapeParams est = cm_estimate(chain, 0.0);
    CHECK(est.angles[0] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("geweke diagnostic") {
    // i.i.d. gaussian synthetic chains: |z| < 3 for almost all seeds
    int ok = 0;
    const int trials = 100;
    for (int seed = 0; seed < trials; ++seed) {
        Rng rng(static_cast<std::uint64_t>(seed) + 1000);
        Chain chain;
        for (int i = 0; i < 4000; ++i) {
            chain.samples.push_back({rng.normal()});
            chain.log_posts.push_back(0.0);
            chain.accepted_stage.push_back(1);
        }
        if (std::abs(geweke_z(chain, 0)) < 3.0) ++ok;
    }
    CHECK(ok >= 95);

    // strong linear trend: |z| > 2
    Rng rng(4);
    Chain trend;
    for (int i = 0; i < 4000; ++i) {
        trend.samples.push_back({rng.normal() + 5.0 * i / 4000.0});
        trend.log_posts.push_back(0.0);
        trend.accepted_stage.push_back(1);
    }
    CHECK(std::abs(geweke_z(trend, 0)) > 2.0);

    // constant chain: degenerate windows
    Chain constant;
    for (int i = 0; i < 1000; ++i) {
        constant.samples.push_back({1.0});
        constant.log_posts.push_back(0.0);
        constant.accepted_stage.push_back(1);
    }
    CHECK_THROWS_AS(geweke_z(constant, 0), Error);
}

TEST_CASE("top posterior states") {
    Chain chain;
    for (int i = 0; i < 50; ++i) {
        chain.samples.push_back({static_cast<double>(i)});
        chain.log_posts.push_back(std::sin(i * 0.7) * 10.0);
        chain.accepted_stage.push_back(1);
    }
    const auto top = top_posterior_states(chain, 5);
    REQUIRE(top.size() == 5);

    // agrees with a full-sort oracle and is non-increasing
    std::vector<double> sorted = chain.log_posts;
    std::sort(sorted.rbegin(), sorted.rend());
    for (int k = 0; k < 5; ++k) {
        const double lp = std::sin(top[k][0] * 0.7) * 10.0;
        CHECK(lp == doctest::Approx(sorted[k]));
        if (k > 0) CHECK(lp <= std::sin(top[k - 1][0] * 0.7) * 10.0 + 1e-12);
    }

    // k = 1 returns the argmax
    const auto best = top_posterior_states(chain, 1);
    CHECK(std::sin(best[0][0] * 0.7) * 10.0 == doctest::Approx(sorted[0]));

    CHECK_THROWS_AS(top_posterior_states(chain, 0), Error);
    CHECK_THROWS_AS(top_posterior_states(chain, 51), Error);
}
