#include "shapect/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>

#include "shapect/error.hpp"
#include "shapect/io.hpp"

namespace shapect {

namespace {

namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(std::string("stage ") + name + ": " + e.what());
    }
}

} // namespace

MeasurementData prepare_data(const ExperimentConfig& cfg) {
    const FanBeamGeometry geom = cfg.make_geometry();
    if (!cfg.measured_path.empty()) {
        Sinogram raw = cfg.measured_path.ends_with(".bin")
                           ? io::read_sinogram_bin(cfg.measured_path)
                           : io::read_sinogram_csv(cfg.measured_path);
        MeasurementData data;
        data.sinogram = normalize_measured(raw);
        data.geometry = geom;
        if (cfg.full_views > 0) {
            data.geometry.num_views = cfg.full_views;
            if (data.sinogram.views != cfg.full_views)
                throw Error("measured sinogram has " + std::to_string(data.sinogram.views) +
                            " views, config expects " + std::to_string(cfg.full_views));
            data = subsample_views(data, cfg.views);
        }
        data.noise_sigma = cfg.likelihood_sigma;
        data.provenance = MeasurementData::Provenance::Measured;
        return data;
    }
    const Phantom ph = make_phantom(parse_phantom_label(cfg.phantom), cfg.phantom_side);
    return simulate_data(ph, geom, cfg.noise_percent, cfg.seed);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool dry_run) {
    cfg.validate();
    ExperimentResult result;

    // data preparation
    MeasurementData data = stage("prepare", [&] { return prepare_data(cfg); });
    const bool simulated = data.provenance == MeasurementData::Provenance::Simulated;
    if (simulated) {
        const Phantom ph = make_phantom(parse_phantom_label(cfg.phantom), cfg.phantom_side);
        result.truth = downsample_pointwise(ph.image, cfg.grid_side);
    }

    // system matrix (cached; shared by the likelihood and the TV baseline)
    SystemMatrixCache cache;
    const PriorSpec prior = cfg.make_prior();
    PosteriorProblem prob = stage("matrix", [&] {
        return PosteriorProblem::build(data, cfg.grid_side, prior, cfg.degree, cache,
                                       cfg.likelihood_sigma > 0.0
                                           ? std::optional<double>(cfg.likelihood_sigma)
                                           : std::nullopt);
    });

    if (dry_run) {
        std::printf("dry run: config OK\n");
        std::printf("  data: %d views x %d bins (%s), sigma %.6g\n", data.sinogram.views,
                    data.sinogram.bins, simulated ? "simulated" : "measured", prob.noise_sigma);
        std::printf("  matrix: %d x %d\n", prob.matrix->rows(), prob.matrix->cols());
        std::printf("  dram: %lld iterations, %d control points\n",
                    static_cast<long long>(cfg.iterations), cfg.control_points);
        return result;
    }

    const fs::path out_dir(cfg.output_dir);
    fs::create_directories(out_dir);
    auto artifact = [&](const std::string& name) {
        result.artifacts.push_back(name);
        return (out_dir / name).string();
    };

    if (simulated) {
        const Phantom ph = make_phantom(parse_phantom_label(cfg.phantom), cfg.phantom_side);
        io::write_pgm(artifact("phantom.pgm"), ph.image);
        io::write_image_csv(artifact("truth_grid.csv"), result.truth);
        io::write_sinogram_csv(artifact("sinogram.csv"), data.sinogram);
    }

    // MCMC branch
    {
        const auto t0 = std::chrono::steady_clock::now();
        const DramConfig dram_cfg = cfg.make_dram();
        result.chain = stage("mcmc", [&] { return dram_sample(prob, dram_cfg); });
        result.posterior_evals = result.chain.target_evals;
        result.cm = cm_estimate(result.chain, cfg.burn_in, !cfg.raw_angle_mean);
        result.mcmc_image = rasterize(result.cm, cfg.grid_side, cfg.degree);

        ErrorReport report;
        report.method = "mcmc-nurbs";
        report.runtime_seconds = seconds_since(t0);
        if (simulated) {
            report.shape_error_percent = shape_error(result.truth, result.mcmc_image);
            report.attenuation_error_percent = attenuation_error(kPhantomAttenuation, result.cm.c);
        }
        result.mcmc = report;

        stage("mcmc-artifacts", [&] {
            io::append_chain_csv(artifact("chain.csv"), result.chain);
            io::write_pgm(artifact("recon_mcmc.pgm"), result.mcmc_image);
            io::write_image_csv(artifact("recon_mcmc.csv"), result.mcmc_image);
            const RasterImage hires =
                rasterize_scaled(result.cm, cfg.grid_side, cfg.hires_side, cfg.degree);
            io::write_pgm(artifact("recon_mcmc_hires.pgm"), hires);

            ShapeParams hires_params = result.cm;
            const double scale = static_cast<double>(cfg.hires_side) / cfg.grid_side;
            for (double& r : hires_params.radii) r *= scale;
            const int m = std::max(360, cfg.svg_samples);
            io::write_svg(artifact("boundary.svg"),
                          shape_polyline(hires_params, cfg.hires_side, cfg.degree, m), cfg.hires_side);
            return 0;
        });

        stage("diagnostics", [&] {
            const Chain kept = discard_burn_in(result.chain, cfg.burn_in);
            const int d = kept.dimension();
            std::vector<double> comp(kept.size());
            std::FILE* gw = std::fopen(artifact("geweke.csv").c_str(), "w");
            if (!gw) throw Error("cannot open geweke.csv");
            std::fprintf(gw, "component,z\n");
            for (int c = 0; c < d; ++c) {
                for (std::size_t k = 0; k < kept.size(); ++k) comp[k] = kept.samples[k][static_cast<std::size_t>(c)];
                char name[32];
                std::snprintf(name, sizeof name, "component_%02d", c);
                io::write_trace_csv(artifact(std::string("trace_") + name + ".csv"), comp,
                                    std::max<int>(1, static_cast<int>(comp.size() / 4096)));
                io::write_histogram_csv(artifact(std::string("hist_") + name + ".csv"), comp, 60);
                if (cfg.quicklook_components) {
                    io::write_trace_pgm(artifact(std::string("trace_") + name + ".pgm"), comp);
                    io::write_histogram_pgm(artifact(std::string("hist_") + name + ".pgm"), comp);
                }
                double z = 0.0;
                try {
                    z = geweke_z(kept, c);
                } catch (const Error&) {
                    z = std::numeric_limits<double>::quiet_NaN();
                }
                std::fprintf(gw, "%d,%.17g\n", c, z);
            }
            std::fclose(gw);
            return 0;
        });
    }

    // TV baseline branch (needs the binary truth for the oracle sweep)
    if (cfg.run_tv && simulated) {
        const auto t0 = std::chrono::steady_clock::now();
        TvProblem base;
        base.A = prob.matrix;
        base.m = data.sinogram;
        base.side = cfg.grid_side;
        base.alpha = 1.0;
        base.nonneg = true;
        result.sweep = stage("tv", [&] {
            return optimal_sweep(base, cfg.make_sweep_grid(), result.truth, cfg.tv_tol, cfg.tv_max_iter);
        });

        ErrorReport report;
        report.method = "thresholded-tv";
        report.runtime_seconds = seconds_since(t0);
        report.shape_error_percent = result.sweep->error_percent;
        report.attenuation_error_percent = attenuation_error(kPhantomAttenuation, result.sweep->beta);
        result.tv = report;

        stage("tv-artifacts", [&] {
            std::FILE* sw = std::fopen(artifact("sweep.csv").c_str(), "w");
            if (!sw) throw Error("cannot open sweep.csv");
            std::fprintf(sw, "alpha,beta,shape_error_percent\n");
            for (const SweepEntry& e : result.sweep->table)
                std::fprintf(sw, "%.17g,%.17g,%.17g\n", e.alpha, e.beta, e.shape_error_percent);
            std::fclose(sw);
            io::write_pgm(artifact("recon_tv.pgm"), result.sweep->best_reconstruction);
            io::write_image_csv(artifact("recon_tv.csv"), result.sweep->best_reconstruction);
            io::write_pgm(artifact("recon_tv_thresholded.pgm"), result.sweep->best_thresholded);
            return 0;
        });
    }

    // error summary
    stage("report", [&] {
        std::FILE* f = std::fopen(artifact("errors.csv").c_str(), "w");
        if (!f) throw Error("cannot open errors.csv");
        std::fprintf(f, "method,shape_error_percent,attenuation_error_percent,runtime_seconds,"
                        "iterations,posterior_evaluations\n");
        if (result.mcmc)
            std::fprintf(f, "%s,%.17g,%.17g,%.3f,%lld,%lld\n", result.mcmc->method.c_str(),
                         result.mcmc->shape_error_percent, result.mcmc->attenuation_error_percent,
                         result.mcmc->runtime_seconds, static_cast<long long>(cfg.iterations),
                         static_cast<long long>(result.posterior_evals));
        if (result.tv)
            std::fprintf(f, "%s,%.17g,%.17g,%.3f,,\n", result.tv->method.c_str(),
                         result.tv->shape_error_percent, result.tv->attenuation_error_percent,
                         result.tv->runtime_seconds);
        std::fclose(f);
        return 0;
    });

    return result;
}

} // namespace shapect
