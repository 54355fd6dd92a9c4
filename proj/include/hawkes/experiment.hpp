#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hawkes/estimate.hpp"
#include "hawkes/model.hpp"

namespace hawkes {

// One of the four synthetic studies. Defaults come from
// default_experiment_spec; grids and sizes are desk-scale and widen under
// paper_scale.
struct ExperimentSpec {
    std::string name;          // error-vs-samples, error-vs-beta-gap,
                               // utility-vs-dissimilarity, utility-vs-inventory
    std::vector<double> grid;  // swept values (sample counts, gaps, or s)
    int replicates = 5;

    double mu = 0.3;
    double beta1 = 4.0;
    double beta2 = 1.0;
    int d = 10;
    int m = 1000;
    int sessions_per_epoch = 1000;
    int epochs = 64;  // samples per fit (error-vs-samples uses the grid instead)
    int top_k = 10;
    // Rank the engagement baseline by the true u1+u2 instead of the
    // estimated one.
    bool engagement_uses_truth = false;

    FitConfig fit;
    std::uint64_t seed = 1;
    std::string output_dir = ".";

    void validate() const;
};

const std::vector<std::string>& experiment_names();

// Desk-scale defaults per experiment; paper_scale widens grids and sample
// counts to the full-scale settings.
ExperimentSpec default_experiment_spec(const std::string& name, bool paper_scale = false);

// Aggregated results for one grid point.
struct GridPointResult {
    double grid_value = 0.0;
    ParamErrors median_errors;          // error experiments
    double utility_engagement = 0.0;    // utility experiments (mean over replicates)
    double utility_engagement_std = 0.0;
    double utility_ours = 0.0;
    double utility_ours_std = 0.0;
};

struct ExperimentResult {
    std::vector<GridPointResult> points;
    std::string csv_path;
};

// Runs every (grid point, replicate) job in a work pool (HAWKES_THREADS
// caps it), then writes the experiment CSV plus a manifest.json into
// spec.output_dir.
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace hawkes
