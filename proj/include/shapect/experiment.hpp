#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shapect/config.hpp"
#include "shapect/metrics.hpp"
#include "shapect/sampler.hpp"
#include "shapect/tv.hpp"

namespace shapect {

struct ExperimentResult {
    std::optional<ErrorReport> mcmc;
    std::optional<ErrorReport> tv;
    ShapeParams cm;
    Chain chain;                 // full chain (burn-in included)
    std::optional<SweepResult> sweep;
    RasterImage truth;           // empty (side 0) when measured data is used
    RasterImage mcmc_image;
    std::vector<std::string> artifacts; // files written, relative to output_dir
    std::int64_t posterior_evals = 0;
};

/// End-to-end pipeline: data preparation, DRAM reconstruction with CM
/// estimate and diagnostics, optional TV sweep baseline, error metrics, and
/// all file artifacts. dry_run validates the config, builds the system
/// matrix and returns after printing a stage summary, writing nothing.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool dry_run = false);

/// The measurement branch alone (phantom simulation or measured ingestion).
MeasurementData prepare_data(const ExperimentConfig& cfg);

} // namespace shapect
