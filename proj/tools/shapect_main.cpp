#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "shapect/config.hpp"
#include "shapect/error.hpp"
#include "shapect/experiment.hpp"
#include "shapect/io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace shapect;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<long long> iters;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config file");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "random seed override");
        cmd->add_option("--iters", iters, "MCMC iteration override");
    }

    ExperimentConfig load() const {
        ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (seed) cfg.seed = *seed;
        if (iters) cfg.iterations = *iters;
        return cfg;
    }
};

void print_reports(const ExperimentResult& r) {
    if (r.mcmc)
        std::printf("mcmc-nurbs:      shape error %7.3f %%   attenuation error %7.3f %%   (%.1f s, %lld evals)\n",
                    r.mcmc->shape_error_percent, r.mcmc->attenuation_error_percent,
                    r.mcmc->runtime_seconds, static_cast<long long>(r.posterior_evals));
    if (r.tv)
        std::printf("thresholded-tv:  shape error %7.3f %%   attenuation error %7.3f %%   (%.1f s)\n",
                    r.tv->shape_error_percent, r.tv->attenuation_error_percent,
                    r.tv->runtime_seconds);
    if (r.sweep)
        std::printf("tv optimum:      alpha %.6g   beta %.6g\n", r.sweep->alpha, r.sweep->beta);
}

int cmd_phantom(const std::string& label, int side, const std::string& out) {
    const Phantom ph = make_phantom(parse_phantom_label(label), side);
    fs::create_directories(out);
    io::write_pgm((fs::path(out) / (label + ".pgm")).string(), ph.image);
    io::write_image_csv((fs::path(out) / (label + ".csv")).string(), ph.image);
    std::printf("wrote %s.pgm / %s.csv (side %d)\n", label.c_str(), label.c_str(), side);
    return 0;
}

int cmd_simulate(const CommonOpts& opts) {
    ExperimentConfig cfg = opts.load();
    cfg.validate();
    const MeasurementData data = prepare_data(cfg);
    fs::create_directories(cfg.output_dir);
    const fs::path dir(cfg.output_dir);
    io::write_sinogram_csv((dir / "sinogram.csv").string(), data.sinogram);
    io::write_sinogram_bin((dir / "sinogram.bin").string(), data.sinogram);
    std::printf("wrote sinogram.csv / sinogram.bin: %d views x %d bins, sigma %.6g\n",
                data.sinogram.views, data.sinogram.bins, data.noise_sigma);
    return 0;
}

int cmd_reconstruct_mcmc(const CommonOpts& opts) {
    ExperimentConfig cfg = opts.load();
    cfg.run_tv = false;
    const ExperimentResult r = run_experiment(cfg);
    print_reports(r);
    return 0;
}

int cmd_reconstruct_tv(const CommonOpts& opts, double alpha, double beta) {
    ExperimentConfig cfg = opts.load();
    cfg.validate();
    const MeasurementData data = prepare_data(cfg);
    SystemMatrixCache cache;
    TvProblem prob;
    prob.A = cache.get(data.geometry, cfg.grid_side);
    prob.m = data.sinogram;
    prob.side = cfg.grid_side;
    prob.alpha = alpha;
    const TvResult res = tv_reconstruct(prob, cfg.tv_tol, cfg.tv_max_iter);
    fs::create_directories(cfg.output_dir);
    const fs::path dir(cfg.output_dir);
    io::write_pgm((dir / "recon_tv.pgm").string(), res.image);
    io::write_image_csv((dir / "recon_tv.csv").string(), res.image);
    if (beta > 0.0) {
        const RasterImage th = threshold(res.image, beta);
        io::write_pgm((dir / "recon_tv_thresholded.pgm").string(), th);
        io::write_image_csv((dir / "recon_tv_thresholded.csv").string(), th);
    }
    std::printf("tv objective %.6g after %d iterations (%s)\n", res.objective, res.iterations,
                res.converged ? "converged" : "budget exhausted");
    return 0;
}

int cmd_sweep(const CommonOpts& opts) {
    ExperimentConfig cfg = opts.load();
    cfg.validate();
    if (cfg.phantom.empty())
        throw Error("sweep: the oracle sweep needs a simulated phantom as ground truth");
    const MeasurementData data = prepare_data(cfg);
    const Phantom ph = make_phantom(parse_phantom_label(cfg.phantom), cfg.phantom_side);
    const RasterImage truth = downsample_pointwise(ph.image, cfg.grid_side);
    SystemMatrixCache cache;
    TvProblem base;
    base.A = cache.get(data.geometry, cfg.grid_side);
    base.m = data.sinogram;
    base.side = cfg.grid_side;
    const SweepResult sweep = optimal_sweep(base, cfg.make_sweep_grid(), truth, cfg.tv_tol, cfg.tv_max_iter);
    fs::create_directories(cfg.output_dir);
    const fs::path dir(cfg.output_dir);
    std::FILE* f = std::fopen((dir / "sweep.csv").string().c_str(), "w");
    if (!f) throw Error("cannot open sweep.csv");
    std::fprintf(f, "alpha,beta,shape_error_percent\n");
    for (const SweepEntry& e : sweep.table)
        std::fprintf(f, "%.17g,%.17g,%.17g\n", e.alpha, e.beta, e.shape_error_percent);
    std::fclose(f);
    io::write_pgm((dir / "recon_tv_thresholded.pgm").string(), sweep.best_thresholded);
    std::printf("optimal alpha %.6g beta %.6g shape error %.3f %%\n", sweep.alpha, sweep.beta,
                sweep.error_percent);
    return 0;
}

int cmd_report(const std::string& truth_path, const std::string& recon_path, double c_true, double c_est) {
    const RasterImage truth = io::read_image_csv(truth_path);
    const RasterImage recon = io::read_image_csv(recon_path);
    std::printf("shape_error_percent,%.6f\n", shape_error(truth, recon));
    if (c_true > 0.0) std::printf("attenuation_error_percent,%.6f\n", attenuation_error(c_true, c_est));
    return 0;
}

int cmd_run(const CommonOpts& opts, bool dry_run) {
    const ExperimentConfig cfg = opts.load();
    const ExperimentResult r = run_experiment(cfg, dry_run);
    if (!dry_run) print_reports(r);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary reconstruction from sparse fan-beam X-ray data"};
    app.require_subcommand(1);

    // phantom
    auto* phantom_cmd = app.add_subcommand("phantom", "generate a test phantom image");
    std::string ph_label = "omega1";
    int ph_side = 256;
    std::string ph_out = "out";
    phantom_cmd->add_option("--label", ph_label, "omega1 | omega2");
    phantom_cmd->add_option("--side", ph_side, "image side in pixels");
    phantom_cmd->add_option("--out", ph_out, "output directory");

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "synthesize noisy measurement data");
    CommonOpts sim_opts;
    sim_opts.attach(simulate_cmd);

    // reconstruct-mcmc
    auto* mcmc_cmd = app.add_subcommand("reconstruct-mcmc", "DRAM boundary reconstruction");
    CommonOpts mcmc_opts;
    mcmc_opts.attach(mcmc_cmd);

    // reconstruct-tv
    auto* tv_cmd = app.add_subcommand("reconstruct-tv", "single TV reconstruction");
    CommonOpts tv_opts;
    double tv_alpha = 1.0, tv_beta = 0.0;
    tv_opts.attach(tv_cmd);
    tv_cmd->add_option("--alpha", tv_alpha, "regularization parameter");
    tv_cmd->add_option("--beta", tv_beta, "threshold (0 = skip thresholding)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "oracle (alpha, beta) sweep for the TV baseline");
    CommonOpts sweep_opts;
    sweep_opts.attach(sweep_cmd);

    // report
    auto* report_cmd = app.add_subcommand("report", "error metrics between two binary images");
    std::string rp_truth, rp_recon;
    double rp_ctrue = 0.0, rp_cest = 0.0;
    report_cmd->add_option("--truth", rp_truth, "truth image CSV")->required();
    report_cmd->add_option("--recon", rp_recon, "reconstruction image CSV")->required();
    report_cmd->add_option("--c-true", rp_ctrue, "true attenuation");
    report_cmd->add_option("--c-est", rp_cest, "estimated attenuation");

    // run
    auto* run_cmd = app.add_subcommand("run", "full pipeline (MCMC + TV baseline + reports)");
    CommonOpts run_opts;
    bool dry_run = false;
    run_opts.attach(run_cmd);
    run_cmd->add_flag("--dry-run", dry_run, "validate config and build the matrix, write nothing");

    CLI11_PARSE(app, argc, argv);

    try {
        if (phantom_cmd->parsed()) return cmd_phantom(ph_label, ph_side, ph_out);
        if (simulate_cmd->parsed()) return cmd_simulate(sim_opts);
        if (mcmc_cmd->parsed()) return cmd_reconstruct_mcmc(mcmc_opts);
        if (tv_cmd->parsed()) return cmd_reconstruct_tv(tv_opts, tv_alpha, tv_beta);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts);
        if (report_cmd->parsed()) return cmd_report(rp_truth, rp_recon, rp_ctrue, rp_cest);
        if (run_cmd->parsed()) return cmd_run(run_opts, dry_run);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
