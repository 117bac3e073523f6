#include "shapect/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "shapect/error.hpp"

namespace shapect {

FanBeamGeometry ExperimentConfig::make_geometry() const {
    const double L = image_side > 0.0 ? image_side : static_cast<double>(grid_side);
    FanBeamGeometry g = FanBeamGeometry::standard(views, L);
    if (source_radius > 0.0) g.source_radius = source_radius;
    if (detector_radius > 0.0) g.detector_radius = detector_radius;
    if (detector_bins > 0) g.num_detector_bins = detector_bins;
    if (detector_span > 0.0) g.detector_span = detector_span;
    g.validate();
    return g;
}

PriorSpec ExperimentConfig::make_prior() const {
    PriorSpec spec = PriorSpec::standard(control_points, prior_r, prior_c);
    const double st = sigma_theta > 0.0 ? sigma_theta : kPi / control_points;
    for (int i = 0; i < control_points; ++i) {
        spec.sigma[static_cast<std::size_t>(2 * i)] = sigma_r;
        spec.sigma[static_cast<std::size_t>(2 * i + 1)] = st;
    }
    spec.sigma.back() = sigma_c;
    if (r_max > 0.0) spec.r_max = r_max;
    const double half = angle_window > 0.0 ? angle_window : kPi / control_points;
    for (int i = 0; i < control_points; ++i) {
        const double a = spec.center.angles[static_cast<std::size_t>(i)];
        spec.angle_windows[static_cast<std::size_t>(i)] = {a - half, a + half};
    }
    spec.osc_k = osc_k;
    spec.forbid_self_intersection = forbid_self_intersection;
    spec.validate();
    return spec;
}

DramConfig ExperimentConfig::make_dram() const {
    DramConfig d;
    d.n_iter = iterations;
    d.n0 = n0;
    d.adapt_interval = adapt_interval;
    d.dr_stages = dr_stages;
    d.dr_scale = dr_scale;
    d.burn_in = burn_in;
    d.seed = seed;
    d.adapt = true;

    ShapeParams init;
    init.radii.assign(static_cast<std::size_t>(control_points), init_radius_frac * grid_side);
    init.angles.resize(static_cast<std::size_t>(control_points));
    for (int i = 0; i < control_points; ++i)
        init.angles[static_cast<std::size_t>(i)] = kTwoPi * i / control_points;
    init.c = init_c;
    d.init = init.to_flat();

    d.init_step.clear();
    for (int i = 0; i < control_points; ++i) {
        d.init_step.push_back(step_r);
        d.init_step.push_back(step_theta_deg * kPi / 180.0);
    }
    d.init_step.push_back(step_c);
    return d;
}

SweepGrid ExperimentConfig::make_sweep_grid() const {
    SweepGrid g;
    if (tv_alpha_count == 1) {
        g.alphas.push_back(tv_alpha_min);
    } else {
        const double lo = std::log10(tv_alpha_min), hi = std::log10(tv_alpha_max);
        for (int i = 0; i < tv_alpha_count; ++i)
            g.alphas.push_back(std::pow(10.0, lo + (hi - lo) * i / (tv_alpha_count - 1)));
    }
    if (tv_beta_count == 1) {
        g.betas.push_back(tv_beta_min);
    } else {
        for (int i = 0; i < tv_beta_count; ++i)
            g.betas.push_back(tv_beta_min + (tv_beta_max - tv_beta_min) * i / (tv_beta_count - 1));
    }
    g.validate();
    return g;
}

void ExperimentConfig::validate() const {
    if (phantom.empty() && measured_path.empty())
        throw Error("config: set either phantom or measured path");
    if (!phantom.empty() && !measured_path.empty())
        throw Error("config: phantom and measured path are mutually exclusive");
    if (!phantom.empty()) parse_phantom_label(phantom);
    if (grid_side < 8) throw Error("config: grid_side must be >= 8");
    if (phantom_side < grid_side) throw Error("config: phantom_side must be >= grid_side");
    if (control_points < degree + 1)
        throw Error("config: control_points must be >= degree + 1");
    if (iterations < 1) throw Error("config: iterations must be >= 1");
    if (noise_percent < 0.0) throw Error("config: noise_percent must be >= 0");
    make_geometry();
    make_prior();
    make_dram().validate();
    if (run_tv) make_sweep_grid();
}

namespace {

struct KeyTable {
    std::map<std::string, std::function<void(ExperimentConfig&, const std::string&)>> setters;

    static double num(const std::string& v) { return std::stod(v); }
    static bool flag(const std::string& v) { return v == "1" || v == "true" || v == "yes"; }

    KeyTable() {
        auto set_str = [](std::string ExperimentConfig::* f) {
            return [f](ExperimentConfig& c, const std::string& v) { c.*f = v; };
        };
        auto set_d = [](double ExperimentConfig::* f) {
            return [f](ExperimentConfig& c, const std::string& v) { c.*f = num(v); };
        };
        auto set_i = [](int ExperimentConfig::* f) {
            return [f](ExperimentConfig& c, const std::string& v) { c.*f = static_cast<int>(num(v)); };
        };
        auto set_b = [](bool ExperimentConfig::* f) {
            return [f](ExperimentConfig& c, const std::string& v) { c.*f = flag(v); };
        };

        setters["experiment.phantom"] = set_str(&ExperimentConfig::phantom);
        setters["experiment.measured"] = set_str(&ExperimentConfig::measured_path);
        setters["experiment.output_dir"] = set_str(&ExperimentConfig::output_dir);
        setters["experiment.seed"] = [](ExperimentConfig& c, const std::string& v) {
            c.seed = static_cast<std::uint64_t>(std::stoull(v));
        };
        setters["experiment.grid_side"] = set_i(&ExperimentConfig::grid_side);
        setters["experiment.phantom_side"] = set_i(&ExperimentConfig::phantom_side);
        setters["experiment.control_points"] = set_i(&ExperimentConfig::control_points);
        setters["experiment.degree"] = set_i(&ExperimentConfig::degree);
        setters["experiment.noise_percent"] = set_d(&ExperimentConfig::noise_percent);

        setters["geometry.views"] = set_i(&ExperimentConfig::views);
        setters["geometry.full_views"] = set_i(&ExperimentConfig::full_views);
        setters["geometry.image_side"] = set_d(&ExperimentConfig::image_side);
        setters["geometry.source_radius"] = set_d(&ExperimentConfig::source_radius);
        setters["geometry.detector_radius"] = set_d(&ExperimentConfig::detector_radius);
        setters["geometry.detector_bins"] = set_i(&ExperimentConfig::detector_bins);
        setters["geometry.detector_span"] = set_d(&ExperimentConfig::detector_span);

        setters["prior.r_center"] = set_d(&ExperimentConfig::prior_r);
        setters["prior.c_center"] = set_d(&ExperimentConfig::prior_c);
        setters["prior.sigma_r"] = set_d(&ExperimentConfig::sigma_r);
        setters["prior.sigma_theta"] = set_d(&ExperimentConfig::sigma_theta);
        setters["prior.sigma_c"] = set_d(&ExperimentConfig::sigma_c);
        setters["prior.r_max"] = set_d(&ExperimentConfig::r_max);
        setters["prior.osc_k"] = set_d(&ExperimentConfig::osc_k);
        setters["prior.angle_window"] = set_d(&ExperimentConfig::angle_window);
        setters["prior.self_intersection_check"] = set_b(&ExperimentConfig::forbid_self_intersection);

        setters["dram.iterations"] = [](ExperimentConfig& c, const std::string& v) {
            c.iterations = static_cast<std::int64_t>(std::stoll(v));
        };
        setters["dram.n0"] = set_i(&ExperimentConfig::n0);
        setters["dram.adapt_interval"] = set_i(&ExperimentConfig::adapt_interval);
        setters["dram.dr_stages"] = set_i(&ExperimentConfig::dr_stages);
        setters["dram.dr_scale"] = set_d(&ExperimentConfig::dr_scale);
        setters["dram.burn_in"] = set_d(&ExperimentConfig::burn_in);
        setters["dram.init_radius_frac"] = set_d(&ExperimentConfig::init_radius_frac);
        setters["dram.init_c"] = set_d(&ExperimentConfig::init_c);
        setters["dram.step_r"] = set_d(&ExperimentConfig::step_r);
        setters["dram.step_theta_deg"] = set_d(&ExperimentConfig::step_theta_deg);
        setters["dram.step_c"] = set_d(&ExperimentConfig::step_c);
        setters["dram.likelihood_sigma"] = set_d(&ExperimentConfig::likelihood_sigma);
        setters["dram.raw_angle_mean"] = set_b(&ExperimentConfig::raw_angle_mean);

        setters["tv.alpha_count"] = set_i(&ExperimentConfig::tv_alpha_count);
        setters["tv.alpha_min"] = set_d(&ExperimentConfig::tv_alpha_min);
        setters["tv.alpha_max"] = set_d(&ExperimentConfig::tv_alpha_max);
        setters["tv.beta_count"] = set_i(&ExperimentConfig::tv_beta_count);
        setters["tv.beta_min"] = set_d(&ExperimentConfig::tv_beta_min);
        setters["tv.beta_max"] = set_d(&ExperimentConfig::tv_beta_max);
        setters["tv.tol"] = set_d(&ExperimentConfig::tv_tol);
        setters["tv.max_iter"] = set_i(&ExperimentConfig::tv_max_iter);
        setters["tv.enabled"] = set_b(&ExperimentConfig::run_tv);

        setters["output.hires_side"] = set_i(&ExperimentConfig::hires_side);
        setters["output.svg_samples"] = set_i(&ExperimentConfig::svg_samples);
        setters["output.quicklooks"] = set_i(&ExperimentConfig::quicklook_components);
    }
};

std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    static const KeyTable table;
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section = "experiment";
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = table.setters.find(key);
        if (it == table.setters.end())
            throw Error("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        it->second(cfg, value);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

void save_config(const std::string& path, const ExperimentConfig& cfg) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f << "[experiment]\n";
    if (!cfg.phantom.empty()) f << "phantom = " << cfg.phantom << "\n";
    if (!cfg.measured_path.empty()) f << "measured = " << cfg.measured_path << "\n";
    f << "output_dir = " << cfg.output_dir << "\n";
    f << "seed = " << cfg.seed << "\n";
    f << "grid_side = " << cfg.grid_side << "\n";
    f << "phantom_side = " << cfg.phantom_side << "\n";
    f << "control_points = " << cfg.control_points << "\n";
    f << "degree = " << cfg.degree << "\n";
    f << "noise_percent = " << cfg.noise_percent << "\n";
    f << "\n[geometry]\n";
    f << "views = " << cfg.views << "\n";
    if (cfg.full_views > 0) f << "full_views = " << cfg.full_views << "\n";
    if (cfg.image_side > 0.0) f << "image_side = " << cfg.image_side << "\n";
    if (cfg.source_radius > 0.0) f << "source_radius = " << cfg.source_radius << "\n";
    if (cfg.detector_radius > 0.0) f << "detector_radius = " << cfg.detector_radius << "\n";
    if (cfg.detector_bins > 0) f << "detector_bins = " << cfg.detector_bins << "\n";
    if (cfg.detector_span > 0.0) f << "detector_span = " << cfg.detector_span << "\n";
    f << "\n[prior]\n";
    f << "r_center = " << cfg.prior_r << "\n";
    f << "c_center = " << cfg.prior_c << "\n";
    f << "sigma_r = " << cfg.sigma_r << "\n";
    if (cfg.sigma_theta > 0.0) f << "sigma_theta = " << cfg.sigma_theta << "\n";
    f << "sigma_c = " << cfg.sigma_c << "\n";
    if (cfg.r_max > 0.0) f << "r_max = " << cfg.r_max << "\n";
    f << "osc_k = " << cfg.osc_k << "\n";
    if (cfg.angle_window > 0.0) f << "angle_window = " << cfg.angle_window << "\n";
    f << "self_intersection_check = " << (cfg.forbid_self_intersection ? 1 : 0) << "\n";
    f << "\n[dram]\n";
    f << "iterations = " << cfg.iterations << "\n";
    f << "n0 = " << cfg.n0 << "\n";
    f << "adapt_interval = " << cfg.adapt_interval << "\n";
    f << "dr_stages = " << cfg.dr_stages << "\n";
    f << "dr_scale = " << cfg.dr_scale << "\n";
    f << "burn_in = " << cfg.burn_in << "\n";
    f << "init_radius_frac = " << cfg.init_radius_frac << "\n";
    f << "init_c = " << cfg.init_c << "\n";
    f << "step_r = " << cfg.step_r << "\n";
    f << "step_theta_deg = " << cfg.step_theta_deg << "\n";
    f << "step_c = " << cfg.step_c << "\n";
    if (cfg.likelihood_sigma > 0.0) f << "likelihood_sigma = " << cfg.likelihood_sigma << "\n";
    f << "raw_angle_mean = " << (cfg.raw_angle_mean ? 1 : 0) << "\n";
    f << "\n[tv]\n";
    f << "enabled = " << (cfg.run_tv ? 1 : 0) << "\n";
    f << "alpha_count = " << cfg.tv_alpha_count << "\n";
    f << "alpha_min = " << cfg.tv_alpha_min << "\n";
    f << "alpha_max = " << cfg.tv_alpha_max << "\n";
    f << "beta_count = " << cfg.tv_beta_count << "\n";
    f << "beta_min = " << cfg.tv_beta_min << "\n";
    f << "beta_max = " << cfg.tv_beta_max << "\n";
    f << "tol = " << cfg.tv_tol << "\n";
    f << "max_iter = " << cfg.tv_max_iter << "\n";
    f << "\n[output]\n";
    f << "hires_side = " << cfg.hires_side << "\n";
    f << "svg_samples = " << cfg.svg_samples << "\n";
    f << "quicklooks = " << cfg.quicklook_components << "\n";
}

} // namespace shapect
