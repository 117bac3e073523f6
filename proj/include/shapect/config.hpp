#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "shapect/fanbeam.hpp"
#include "shapect/phantom.hpp"
#include "shapect/prior.hpp"
#include "shapect/sampler.hpp"
#include "shapect/tv.hpp"

namespace shapect {

/// Full experiment description. Defaults reproduce the bundled 6-view,
/// 64x64, 0.1%-noise setup; every key can be overridden from a flat
/// key-value config file with [section] headers.
struct ExperimentConfig {
    // [experiment]
    std::string phantom = "omega1";      // omega1 | omega2; empty when measured data is used
    std::string measured_path;           // CSV/SINO sinogram; raw intensities
    std::string output_dir = "out";
    std::uint64_t seed = 1;
    int grid_side = 64;                  // reconstruction grid
    int phantom_side = 256;              // data-generation grid
    int control_points = 6;
    int degree = 3;
    double noise_percent = 0.1;

    // [geometry]
    int views = 6;
    int full_views = 0;                  // measured data: views before subsampling (0 = already sparse)
    double image_side = 0.0;             // 0 = grid_side
    double source_radius = 0.0;          // 0 = 2 * image_side
    double detector_radius = 0.0;        // 0 = 2 * image_side
    int detector_bins = 0;               // 0 = ceil(1.5 * image_side)
    double detector_span = 0.0;          // 0 = fan circumscribing the image disc + 10%

    // [prior]
    double prior_r = 32.0;
    double prior_c = 0.1;
    double sigma_r = 10.0;
    double sigma_theta = 0.0;            // 0 = pi / control_points
    double sigma_c = 0.05;
    double r_max = 0.0;                  // 0 = 2 * prior_r
    double osc_k = 2.0;
    double angle_window = 0.0;           // half-width; 0 = pi / control_points
    bool forbid_self_intersection = true;

    // [dram]
    std::int64_t iterations = 300000;
    int n0 = 100;
    int adapt_interval = 100;
    int dr_stages = 2;
    double dr_scale = 0.2;
    double burn_in = 0.2;
    double init_radius_frac = 0.4;       // of grid_side
    double init_c = 5.0;
    double step_r = 0.5;
    double step_theta_deg = 1.0;
    double step_c = 0.01;
    double likelihood_sigma = 0.0;       // 0 = from the (simulated) data
    bool raw_angle_mean = false;

    // [tv]
    int tv_alpha_count = 30;
    double tv_alpha_min = 1e-6;
    double tv_alpha_max = 100.0;
    int tv_beta_count = 21;
    double tv_beta_min = 0.01;
    double tv_beta_max = 0.03;
    double tv_tol = 1e-6;
    int tv_max_iter = 4000;
    bool run_tv = true;

    // [output]
    int hires_side = 1128;
    int svg_samples = 720;
    int quicklook_components = 1;        // 1 = render PGM quick-looks

    FanBeamGeometry make_geometry() const;
    PriorSpec make_prior() const;
    DramConfig make_dram() const;
    SweepGrid make_sweep_grid() const;
    void validate() const;
};

/// Parses the flat key-value format (sections in brackets, '#' comments).
/// Unknown keys are an error, so typos never silently fall back to defaults.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
void save_config(const std::string& path, const ExperimentConfig& cfg);

} // namespace shapect
