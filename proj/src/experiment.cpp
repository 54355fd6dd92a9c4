#include "hawkes/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "hawkes/io.hpp"
#include "hawkes/rank_eval.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/synth.hpp"

namespace hawkes {

namespace {

int pool_size(int jobs) {
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HAWKES_THREADS")) {
        threads = std::atoi(env);
    }
    return std::clamp(threads, 1, std::max(jobs, 1));
}

// Runs fn(0..jobs-1) on a small pool; results must be written to
// job-indexed slots so the outcome is independent of scheduling.
void run_jobs(int jobs, const std::function<void(int)>& fn) {
    const int threads = pool_size(jobs);
    if (threads <= 1) {
        for (int i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= jobs || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double stddev(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

struct Scenario {
    ItemCatalog catalog;
    ModelParams truth;
};

// Embedding scenario per experiment: orthonormal users for the error
// studies, dissimilarity pair otherwise; the inventory study swaps in its
// Bernoulli-mixture catalog.
Scenario make_scenario(const ExperimentSpec& spec, std::uint64_t scenario_seed, double beta1,
                       double dissimilarity, bool inventory, double inventory_s) {
    Rng rng(scenario_seed);
    const Eigen::MatrixXd q = orthonormal_basis(spec.d, rng);
    const double noise_var = 1.0 / (10.0 * spec.d);
    Scenario sc;
    sc.truth.mu = spec.mu;
    sc.truth.beta1 = beta1;
    sc.truth.beta2 = spec.beta2;
    if (std::isnan(dissimilarity)) {
        auto [u1, u2] = base_user_pair(q);
        sc.truth.u1 = u1;
        sc.truth.u2 = u2;
    } else {
        auto [u1, u2] = dissimilar_user_pair(q, dissimilarity);
        sc.truth.u1 = u1;
        sc.truth.u2 = u2;
    }
    sc.catalog = inventory
                     ? inventory_catalog(sc.truth.u1, sc.truth.u2, inventory_s, spec.m, noise_var,
                                         rng)
                     : random_item_catalog(q, spec.m, noise_var, rng);
    return sc;
}

std::vector<EpochData> simulate_epochs(const Scenario& sc, const ExperimentSpec& spec,
                                       std::uint64_t scenario_seed, int n_epochs) {
    SimConfig sim;
    sim.sessions_per_epoch = spec.sessions_per_epoch;
    std::vector<EpochData> epochs;
    epochs.reserve(n_epochs);
    for (int e = 0; e < n_epochs; ++e) {
        sim.rng_seed = derive_seed(scenario_seed, 100 + static_cast<std::uint64_t>(e));
        epochs.push_back(
            EpochData::from_trace(simulate_epoch(sc.truth, sc.catalog, sim), sc.catalog));
    }
    return epochs;
}

FitReport fit_scenario(const Scenario& sc, const std::vector<EpochData>& epochs,
                       const ExperimentSpec& spec, std::uint64_t scenario_seed) {
    FitConfig cfg = spec.fit;
    cfg.init_seed = derive_seed(scenario_seed, 7);
    return fit(epochs, cfg, &sc.truth);
}

std::ofstream open_csv(const ExperimentSpec& spec, const std::string& filename,
                       std::string* path_out) {
    std::filesystem::create_directories(spec.output_dir);
    const std::string path = (std::filesystem::path(spec.output_dir) / filename).string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    *path_out = path;
    return out;
}

void write_manifest(const ExperimentSpec& spec) {
    const std::string path =
        (std::filesystem::path(spec.output_dir) / "manifest.json").string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "{\n  \"experiment\": \"" << spec.name << "\",\n";
    out << "  \"grid\": [";
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        if (i) out << ", ";
        out << format_double(spec.grid[i]);
    }
    out << "],\n";
    out << "  \"replicates\": " << spec.replicates << ",\n";
    out << "  \"base\": {\"mu\": " << format_double(spec.mu)
        << ", \"beta1\": " << format_double(spec.beta1)
        << ", \"beta2\": " << format_double(spec.beta2) << ", \"d\": " << spec.d
        << ", \"m\": " << spec.m << "},\n";
    out << "  \"sessions_per_epoch\": " << spec.sessions_per_epoch << ",\n";
    out << "  \"epochs\": " << spec.epochs << ",\n";
    out << "  \"top_k\": " << spec.top_k << ",\n";
    out << "  \"engagement_uses_truth\": " << (spec.engagement_uses_truth ? "true" : "false")
        << ",\n";
    out << "  \"fit\": {\"learning_rate\": " << format_double(spec.fit.learning_rate)
        << ", \"batch_size\": " << spec.fit.batch_size << ", \"max_steps\": " << spec.fit.max_steps
        << "},\n";
    out << "  \"seed\": " << spec.seed << ",\n";
    // Error cells are medians and *_std cells are standard deviations over
    // the replicate seeds.
    out << "  \"aggregation\": {\"errors\": \"median\", \"utility\": \"mean\", \"spread\": "
           "\"stddev\"}\n}\n";
}

ExperimentResult run_error_experiment(const ExperimentSpec& spec, bool sweep_samples) {
    const int g = static_cast<int>(spec.grid.size());
    const int r = spec.replicates;
    // errors[grid][replicate]
    std::vector<std::vector<ParamErrors>> errors(g, std::vector<ParamErrors>(r));

    if (sweep_samples) {
        // One replicate simulates the largest sample count once and fits
        // nested prefixes, so curves across sample counts share traces.
        const int max_epochs = static_cast<int>(*std::max_element(spec.grid.begin(),
                                                                  spec.grid.end()));
        run_jobs(r, [&](int rep) {
            const std::uint64_t seed = derive_seed(spec.seed, 1000 + rep);
            const Scenario sc = make_scenario(spec, seed, spec.beta1,
                                              std::numeric_limits<double>::quiet_NaN(), false,
                                              0.0);
            const std::vector<EpochData> epochs = simulate_epochs(sc, spec, seed, max_epochs);
            for (int gi = 0; gi < g; ++gi) {
                const int n = static_cast<int>(spec.grid[gi]);
                const std::vector<EpochData> subset(epochs.begin(), epochs.begin() + n);
                errors[gi][rep] = *fit_scenario(sc, subset, spec, seed).errors;
            }
        });
    } else {
        run_jobs(g * r, [&](int job) {
            const int gi = job / r;
            const int rep = job % r;
            const std::uint64_t seed = derive_seed(spec.seed, 1000 + rep);
            const double beta1 = spec.beta2 + spec.grid[gi];
            const Scenario sc = make_scenario(spec, seed, beta1,
                                              std::numeric_limits<double>::quiet_NaN(), false,
                                              0.0);
            const std::vector<EpochData> epochs = simulate_epochs(sc, spec, seed, spec.epochs);
            errors[gi][rep] = *fit_scenario(sc, epochs, spec, seed).errors;
        });
    }

    ExperimentResult result;
    const std::string filename =
        sweep_samples ? "error_vs_samples.csv" : "error_vs_beta_gap.csv";
    std::ofstream csv = open_csv(spec, filename, &result.csv_path);
    csv << (sweep_samples ? "samples" : "\"beta_1 - beta_2\"")
        << ",beta_1_err,beta_2_err,u_1_err,u_2_err,mu_err\n";
    for (int gi = 0; gi < g; ++gi) {
        auto column = [&](auto member) {
            std::vector<double> xs;
            for (int rep = 0; rep < r; ++rep) xs.push_back(errors[gi][rep].*member);
            return median(xs);
        };
        GridPointResult point;
        point.grid_value = spec.grid[gi];
        point.median_errors = {column(&ParamErrors::mu), column(&ParamErrors::beta1),
                               column(&ParamErrors::beta2), column(&ParamErrors::u1),
                               column(&ParamErrors::u2)};
        result.points.push_back(point);
        csv << format_double(spec.grid[gi]) << ',' << format_double(point.median_errors.beta1)
            << ',' << format_double(point.median_errors.beta2) << ','
            << format_double(point.median_errors.u1) << ','
            << format_double(point.median_errors.u2) << ','
            << format_double(point.median_errors.mu) << '\n';
    }
    write_manifest(spec);
    return result;
}

ExperimentResult run_utility_experiment(const ExperimentSpec& spec, bool inventory) {
    const int g = static_cast<int>(spec.grid.size());
    const int r = spec.replicates;
    std::vector<std::vector<double>> util_eng(g, std::vector<double>(r));
    std::vector<std::vector<double>> util_ours(g, std::vector<double>(r));

    run_jobs(g * r, [&](int job) {
        const int gi = job / r;
        const int rep = job % r;
        const double s = spec.grid[gi];
        const std::uint64_t seed = derive_seed(spec.seed, 1000 + rep);
        // Inventory study pins the user pair at dissimilarity 0.2 and sweeps
        // the catalog mix instead.
        const Scenario sc = inventory
                                ? make_scenario(spec, seed, spec.beta1, 0.2, true, s)
                                : make_scenario(spec, seed, spec.beta1, s, false, 0.0);
        const std::vector<EpochData> epochs = simulate_epochs(sc, spec, seed, spec.epochs);
        const FitReport report = fit_scenario(sc, epochs, spec, seed);

        const Eigen::VectorXd eng = spec.engagement_uses_truth
                                        ? engagement_direction(sc.truth.u1, sc.truth.u2)
                                        : engagement_direction(report.params.u1,
                                                               report.params.u2);
        const RankResult by_eng = rank_items(sc.catalog, eng, spec.top_k);
        const RankResult by_ours = rank_items(sc.catalog, report.params.u2, spec.top_k);
        util_eng[gi][rep] = set_utility(by_eng.indices, sc.catalog, sc.truth.u2);
        util_ours[gi][rep] = set_utility(by_ours.indices, sc.catalog, sc.truth.u2);
    });

    ExperimentResult result;
    const std::string filename =
        inventory ? "utility_vs_inventory.csv" : "utility_vs_dissimilarity.csv";
    std::ofstream csv = open_csv(spec, filename, &result.csv_path);
    csv << (inventory ? "inventory" : "dissimilarity")
        << ",utility_1,utility_1_std,utility_2,utility_2_std\n";
    for (int gi = 0; gi < g; ++gi) {
        GridPointResult point;
        point.grid_value = spec.grid[gi];
        point.utility_engagement = mean(util_eng[gi]);
        point.utility_engagement_std = stddev(util_eng[gi]);
        point.utility_ours = mean(util_ours[gi]);
        point.utility_ours_std = stddev(util_ours[gi]);
        result.points.push_back(point);
        csv << format_double(point.grid_value) << ',' << format_double(point.utility_engagement)
            << ',' << format_double(point.utility_engagement_std) << ','
            << format_double(point.utility_ours) << ','
            << format_double(point.utility_ours_std) << '\n';
    }
    write_manifest(spec);
    return result;
}

}  // namespace

void ExperimentSpec::validate() const {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string valid;
        for (const std::string& n : names) valid += (valid.empty() ? "" : ", ") + n;
        throw std::invalid_argument("unknown experiment \"" + name + "\" (valid: " + valid + ")");
    }
    if (grid.empty()) throw std::invalid_argument("ExperimentSpec: empty grid");
    if (replicates < 1) throw std::invalid_argument("ExperimentSpec: replicates < 1");
    fit.validate();
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "error-vs-samples", "error-vs-beta-gap", "utility-vs-dissimilarity",
        "utility-vs-inventory"};
    return names;
}

ExperimentSpec default_experiment_spec(const std::string& name, bool paper_scale) {
    ExperimentSpec spec;
    spec.name = name;
    if (name == "error-vs-samples") {
        spec.grid = paper_scale ? std::vector<double>{4, 16, 64, 256, 1024}
                                : std::vector<double>{4, 16, 64};
    } else if (name == "error-vs-beta-gap") {
        spec.grid = paper_scale ? std::vector<double>{0, 1, 2, 3, 4}
                                : std::vector<double>{0, 1, 2, 3};
        spec.epochs = paper_scale ? 1024 : 256;
        spec.beta1 = spec.beta2;  // beta1 = beta2 + gap per grid point
    } else if (name == "utility-vs-dissimilarity") {
        spec.grid = {-0.5, -0.2, 0.0, 0.2, 0.5, 1.0};
        spec.epochs = paper_scale ? 1024 : 32;
    } else if (name == "utility-vs-inventory") {
        spec.grid = {0.1, 0.25, 0.5, 0.75, 1.0};
        spec.epochs = paper_scale ? 1024 : 32;
    } else {
        ExperimentSpec probe;
        probe.name = name;
        probe.grid = {0};
        probe.validate();  // throws with the list of valid names
    }
    return spec;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    if (spec.name == "error-vs-samples") return run_error_experiment(spec, true);
    if (spec.name == "error-vs-beta-gap") return run_error_experiment(spec, false);
    if (spec.name == "utility-vs-dissimilarity") return run_utility_experiment(spec, false);
    return run_utility_experiment(spec, true);
}

}  // namespace hawkes
