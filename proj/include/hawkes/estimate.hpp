#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hawkes/model.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

struct FitConfig {
    double learning_rate = 0.002;
    int batch_size = 16;
    int max_steps = 20000;
    std::uint64_t init_seed = 0;
    double adam_beta_m = 0.9;
    double adam_beta_v = 0.999;
    double adam_eps = 1e-8;
    // Early stop when the mean objective over consecutive windows of
    // convergence_window steps changes by less than convergence_tol
    // relative.
    double convergence_tol = 1e-6;
    int convergence_window = 500;

    void validate() const;
};

struct ParamErrors {
    double mu = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double u1 = 0.0;
    double u2 = 0.0;
};

struct FitReport {
    ModelParams params;               // canonical (beta1 > beta2 after relabeling)
    std::vector<double> trajectory;   // per-step mean minibatch log-likelihood
    int steps_taken = 0;
    bool converged = false;           // early stop triggered
    bool beta_tie_warning = false;    // |beta1 - beta2| < 1e-9 at the end
    bool non_monotone_flag = false;   // smoothed trajectory dipped after burn-in
    std::optional<ParamErrors> errors;
};

// Unconstrained parameter vector layout: [log mu, log beta1, log beta2,
// u1 (d), u2 (d)].
Eigen::VectorXd init_params(int d, Rng& rng);

// exp the rate coordinates, clip embedding norms to the unit ball.
ModelParams project_params(const Eigen::VectorXd& theta);

struct AdamState {
    Eigen::VectorXd m;
    Eigen::VectorXd v;
    long step = 0;

    explicit AdamState(Eigen::Index n)
        : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}
};

// One bias-corrected Adam ascent step. Throws on a non-finite gradient.
void adam_step(AdamState& state, Eigen::VectorXd& theta, const Eigen::VectorXd& gradient,
               const FitConfig& config);

// Canonical ordering beta1 > beta2, swapping embeddings in lockstep. Sets
// *tie_flag when |beta1 - beta2| < 1e-9.
ModelParams relabel_components(const ModelParams& params, bool* tie_flag = nullptr);

// ||est - truth||_2 / ||truth||_2. Throws on zero-norm truth.
double relative_error(double est, double truth);
double relative_error(const Eigen::VectorXd& est, const Eigen::VectorXd& truth);

ParamErrors param_errors(const ModelParams& est, const ModelParams& truth);

// Minibatch Adam ascent on the mean per-epoch log-likelihood. Deterministic
// given (epochs, config). When truth is given the report carries relative
// errors of the relabeled estimate.
FitReport fit(const std::vector<EpochData>& epochs, const FitConfig& config,
              const ModelParams* truth = nullptr);
FitReport fit(const std::vector<EpochTrace>& epochs, const ItemCatalog& catalog,
              const FitConfig& config, const ModelParams* truth = nullptr);

}  // namespace hawkes
