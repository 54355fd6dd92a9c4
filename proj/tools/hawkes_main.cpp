#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "hawkes/config.hpp"
#include "hawkes/estimate.hpp"
#include "hawkes/experiment.hpp"
#include "hawkes/io.hpp"
#include "hawkes/rank_eval.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/synth.hpp"

namespace {

namespace fs = std::filesystem;

// Thrown for bad user input (exit code 2); anything else escaping a command
// is a runtime failure (exit code 1).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimulateOptions {
    std::string out;
    std::string config;
    int epochs = 4;
    int sessions = 1000;
    std::uint64_t seed = 1;
};

struct ScenarioSetup {
    hawkes::ItemCatalog catalog;
    hawkes::ModelParams truth;
    std::string scenario = "orthonormal";
    double s = 0.0;
};

ScenarioSetup build_scenario(const hawkes::ConfigMap& cfg, std::uint64_t seed) {
    ScenarioSetup setup;
    setup.scenario = hawkes::config_string(cfg, "scenario.kind", "orthonormal");
    setup.s = hawkes::config_double(cfg, "scenario.s", 0.0);
    const int d = static_cast<int>(hawkes::config_int(cfg, "scenario.d", 10));
    const int m = static_cast<int>(hawkes::config_int(cfg, "scenario.m", 1000));
    const double noise_var = hawkes::config_double(cfg, "scenario.noise_var", 1.0 / (10.0 * d));

    hawkes::Rng rng(seed);
    const Eigen::MatrixXd q = hawkes::orthonormal_basis(d, rng);
    if (setup.scenario == "orthonormal") {
        auto [u1, u2] = hawkes::base_user_pair(q);
        setup.truth.u1 = u1;
        setup.truth.u2 = u2;
        setup.catalog = hawkes::random_item_catalog(q, m, noise_var, rng);
    } else if (setup.scenario == "dissimilarity") {
        auto [u1, u2] = hawkes::dissimilar_user_pair(q, setup.s);
        setup.truth.u1 = u1;
        setup.truth.u2 = u2;
        setup.catalog = hawkes::random_item_catalog(q, m, noise_var, rng);
    } else if (setup.scenario == "inventory") {
        auto [u1, u2] = hawkes::dissimilar_user_pair(q, 0.2);
        setup.truth.u1 = u1;
        setup.truth.u2 = u2;
        setup.catalog = hawkes::inventory_catalog(u1, u2, setup.s, m, noise_var, rng);
    } else {
        throw InputError("unknown scenario.kind \"" + setup.scenario +
                         "\" (valid: orthonormal, dissimilarity, inventory)");
    }
    setup.truth.mu = hawkes::config_double(cfg, "model.mu", 0.3);
    setup.truth.beta1 = hawkes::config_double(cfg, "model.beta1", 4.0);
    setup.truth.beta2 = hawkes::config_double(cfg, "model.beta2", 1.0);
    setup.truth.validate();
    return setup;
}

int cmd_simulate(const SimulateOptions& opt) {
    hawkes::ConfigMap cfg;
    ScenarioSetup setup = [&] {
        try {
            if (!opt.config.empty()) cfg = hawkes::parse_config_file(opt.config);
            return build_scenario(cfg, hawkes::derive_seed(opt.seed, 0));
        } catch (const std::runtime_error& e) {
            throw InputError(e.what());
        }
    }();

    fs::create_directories(opt.out);
    hawkes::write_catalog_file((fs::path(opt.out) / "catalog.txt").string(), setup.catalog);
    hawkes::write_params_file((fs::path(opt.out) / "truth.json").string(), setup.truth);

    hawkes::SimConfig sim;
    sim.sessions_per_epoch = opt.sessions;
    for (int e = 0; e < opt.epochs; ++e) {
        sim.rng_seed = hawkes::derive_seed(opt.seed, 100 + static_cast<std::uint64_t>(e));
        const hawkes::EpochTrace trace = hawkes::simulate_epoch(setup.truth, setup.catalog, sim);
        char name[32];
        std::snprintf(name, sizeof(name), "epoch_%03d.jsonl", e);
        hawkes::write_trace_file((fs::path(opt.out) / name).string(), trace, e, sim.rng_seed);
    }

    std::ofstream manifest((fs::path(opt.out) / "manifest.json").string());
    manifest << "{\"command\": \"simulate\", \"seed\": " << opt.seed
             << ", \"epochs\": " << opt.epochs << ", \"sessions\": " << opt.sessions
             << ", \"scenario\": \"" << setup.scenario
             << "\", \"s\": " << hawkes::format_double(setup.s)
             << ", \"mu\": " << hawkes::format_double(setup.truth.mu)
             << ", \"beta1\": " << hawkes::format_double(setup.truth.beta1)
             << ", \"beta2\": " << hawkes::format_double(setup.truth.beta2)
             << ", \"d\": " << setup.catalog.dim() << ", \"m\": " << setup.catalog.count()
             << "}\n";
    std::cout << "wrote " << opt.epochs << " epoch traces to " << opt.out << "\n";
    return 0;
}

struct FitOptions {
    std::vector<std::string> traces;
    std::string catalog;
    std::string out = "fit_report.json";
    std::string truth;
    std::string config;
    std::uint64_t seed = 1;
    int max_steps = 20000;
    int batch_size = 16;
    double learning_rate = 0.002;
};

std::vector<std::string> expand_trace_paths(const std::vector<std::string>& inputs) {
    std::vector<std::string> paths;
    for (const std::string& input : inputs) {
        if (fs::is_directory(input)) {
            for (const auto& entry : fs::directory_iterator(input)) {
                if (entry.path().extension() == ".jsonl") paths.push_back(entry.path().string());
            }
        } else {
            paths.push_back(input);
        }
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw InputError("no trace files found");
    return paths;
}

int cmd_fit(const FitOptions& opt) {
    std::vector<hawkes::EpochTrace> epochs;
    hawkes::ItemCatalog catalog;
    hawkes::ModelParams truth;
    bool have_truth = false;
    hawkes::FitConfig fit_cfg;
    try {
        if (!opt.config.empty()) {
            const hawkes::ConfigMap cfg = hawkes::parse_config_file(opt.config);
            fit_cfg.learning_rate = hawkes::config_double(cfg, "fit.learning_rate", opt.learning_rate);
            fit_cfg.batch_size = static_cast<int>(hawkes::config_int(cfg, "fit.batch_size", opt.batch_size));
            fit_cfg.max_steps = static_cast<int>(hawkes::config_int(cfg, "fit.max_steps", opt.max_steps));
        } else {
            fit_cfg.learning_rate = opt.learning_rate;
            fit_cfg.batch_size = opt.batch_size;
            fit_cfg.max_steps = opt.max_steps;
        }
        fit_cfg.init_seed = opt.seed;
        catalog = hawkes::read_catalog_file(opt.catalog);
        for (const std::string& path : expand_trace_paths(opt.traces)) {
            epochs.push_back(hawkes::read_trace_file(path));
            epochs.back().validate(catalog);
        }
        if (!opt.truth.empty()) {
            truth = hawkes::read_params_file(opt.truth);
            have_truth = true;
        }
    } catch (const std::runtime_error& e) {
        throw InputError(e.what());
    }

    const hawkes::FitReport report =
        hawkes::fit(epochs, catalog, fit_cfg, have_truth ? &truth : nullptr);
    hawkes::write_fit_report_file(opt.out, report);
    std::cout << "fit: " << report.steps_taken << " steps, final objective "
              << hawkes::format_double(report.trajectory.back()) << ", report in " << opt.out
              << "\n";
    if (report.errors) {
        const hawkes::ParamErrors& e = *report.errors;
        std::cout << "relative errors: mu " << e.mu << ", beta1 " << e.beta1 << ", beta2 "
                  << e.beta2 << ", u1 " << e.u1 << ", u2 " << e.u2 << "\n";
    }
    return 0;
}

struct ExperimentOptions {
    std::string name;
    std::string config;
    std::string out = "experiments";
    std::uint64_t seed = 1;
    bool paper_scale = false;
    int epochs = -1;
    int sessions = -1;
    int replicates = -1;
};

hawkes::ExperimentSpec load_experiment_spec(const ExperimentOptions& opt) {
    hawkes::ConfigMap cfg;
    if (!opt.config.empty()) cfg = hawkes::parse_config_file(opt.config);
    std::string name = hawkes::config_string(cfg, "experiment.name", opt.name);
    if (name.empty()) throw InputError("no experiment name given (--name or config)");

    hawkes::ExperimentSpec spec = hawkes::default_experiment_spec(name, opt.paper_scale);
    spec.grid = hawkes::config_list(cfg, "experiment.grid", spec.grid);
    spec.replicates =
        static_cast<int>(hawkes::config_int(cfg, "experiment.replicates", spec.replicates));
    spec.mu = hawkes::config_double(cfg, "model.mu", spec.mu);
    spec.beta1 = hawkes::config_double(cfg, "model.beta1", spec.beta1);
    spec.beta2 = hawkes::config_double(cfg, "model.beta2", spec.beta2);
    spec.d = static_cast<int>(hawkes::config_int(cfg, "scenario.d", spec.d));
    spec.m = static_cast<int>(hawkes::config_int(cfg, "scenario.m", spec.m));
    spec.epochs = static_cast<int>(hawkes::config_int(cfg, "experiment.epochs", spec.epochs));
    spec.sessions_per_epoch = static_cast<int>(
        hawkes::config_int(cfg, "experiment.sessions", spec.sessions_per_epoch));
    spec.top_k = static_cast<int>(hawkes::config_int(cfg, "experiment.top_k", spec.top_k));
    spec.engagement_uses_truth =
        hawkes::config_bool(cfg, "experiment.engagement_uses_truth", false);
    spec.fit.learning_rate =
        hawkes::config_double(cfg, "fit.learning_rate", spec.fit.learning_rate);
    spec.fit.batch_size =
        static_cast<int>(hawkes::config_int(cfg, "fit.batch_size", spec.fit.batch_size));
    spec.fit.max_steps =
        static_cast<int>(hawkes::config_int(cfg, "fit.max_steps", spec.fit.max_steps));
    spec.seed = static_cast<std::uint64_t>(hawkes::config_int(cfg, "experiment.seed",
                                                              static_cast<long long>(opt.seed)));
    if (opt.epochs > 0) spec.epochs = opt.epochs;
    if (opt.sessions > 0) spec.sessions_per_epoch = opt.sessions;
    if (opt.replicates > 0) spec.replicates = opt.replicates;
    spec.output_dir = opt.out;
    spec.validate();
    return spec;
}

int cmd_experiment(const ExperimentOptions& opt) {
    hawkes::ExperimentSpec spec = [&] {
        try {
            return load_experiment_spec(opt);
        } catch (const std::exception& e) {
            throw InputError(e.what());
        }
    }();
    const hawkes::ExperimentResult result = hawkes::run_experiment(spec);
    std::cout << "wrote " << result.csv_path << "\n";
    return 0;
}

struct RankOptions {
    std::string catalog;
    std::string params;
    std::string mode = "utility";
    int k = 10;
};

int cmd_rank(const RankOptions& opt) {
    hawkes::ItemCatalog catalog;
    hawkes::ModelParams params;
    try {
        catalog = hawkes::read_catalog_file(opt.catalog);
        params = hawkes::read_params_file(opt.params);
        if (opt.mode != "utility" && opt.mode != "engagement") {
            throw InputError("--mode must be utility or engagement");
        }
        if (opt.k < 1 || opt.k > catalog.count()) throw InputError("-k out of range");
    } catch (const std::runtime_error& e) {
        throw InputError(e.what());
    }
    const Eigen::VectorXd direction =
        opt.mode == "utility" ? params.u2
                              : hawkes::engagement_direction(params.u1, params.u2);
    const hawkes::RankResult result = hawkes::rank_items(catalog, direction, opt.k);
    for (int i = 0; i < opt.k; ++i) {
        std::cout << result.indices[i] << ' ' << hawkes::format_double(result.scores[i]) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual-kernel marked Hawkes model: simulation, fitting, and experiments"};
    app.require_subcommand(1);

    SimulateOptions sim_opt;
    CLI::App* sim = app.add_subcommand("simulate", "Generate epoch traces");
    sim->add_option("--out", sim_opt.out, "Output directory")->required();
    sim->add_option("--epochs", sim_opt.epochs, "Number of epochs");
    sim->add_option("--sessions", sim_opt.sessions, "Sessions per epoch");
    sim->add_option("--seed", sim_opt.seed, "Master seed");
    sim->add_option("--config", sim_opt.config, "Model/scenario config file");

    FitOptions fit_opt;
    CLI::App* fit = app.add_subcommand("fit", "Fit model parameters to traces");
    fit->add_option("--traces", fit_opt.traces, "Trace files or directories")->required();
    fit->add_option("--catalog", fit_opt.catalog, "Catalog file")->required();
    fit->add_option("--out", fit_opt.out, "Report output path");
    fit->add_option("--truth", fit_opt.truth, "Ground-truth params JSON for error reporting");
    fit->add_option("--config", fit_opt.config, "Fit config file");
    fit->add_option("--seed", fit_opt.seed, "Initialization seed");
    fit->add_option("--steps", fit_opt.max_steps, "Max optimizer steps");
    fit->add_option("--batch", fit_opt.batch_size, "Minibatch size");
    fit->add_option("--lr", fit_opt.learning_rate, "Learning rate");

    ExperimentOptions exp_opt;
    CLI::App* exp = app.add_subcommand("experiment", "Run a synthetic experiment");
    exp->add_option("--name", exp_opt.name, "Experiment name");
    exp->add_option("--config", exp_opt.config, "Experiment spec file");
    exp->add_option("--out", exp_opt.out, "Output directory");
    exp->add_option("--seed", exp_opt.seed, "Master seed");
    exp->add_flag("--paper-scale", exp_opt.paper_scale, "Use the full-scale grids");
    exp->add_option("--epochs", exp_opt.epochs, "Epochs per fit override");
    exp->add_option("--sessions", exp_opt.sessions, "Sessions per epoch override");
    exp->add_option("--replicates", exp_opt.replicates, "Replicates override");

    RankOptions rank_opt;
    CLI::App* rank = app.add_subcommand("rank", "Rank catalog items by an embedding direction");
    rank->add_option("--catalog", rank_opt.catalog, "Catalog file")->required();
    rank->add_option("--params", rank_opt.params, "Params JSON (estimated or true)")->required();
    rank->add_option("--mode", rank_opt.mode, "utility (u2) or engagement (u1+u2)");
    rank->add_option("-k", rank_opt.k, "Number of items");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_opt);
        if (fit->parsed()) return cmd_fit(fit_opt);
        if (exp->parsed()) return cmd_experiment(exp_opt);
        return cmd_rank(rank_opt);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
