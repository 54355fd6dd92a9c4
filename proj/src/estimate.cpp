#include "hawkes/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hawkes {

void FitConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("FitConfig: learning_rate <= 0");
    if (batch_size < 1) throw std::invalid_argument("FitConfig: batch_size < 1");
    if (max_steps < 1) throw std::invalid_argument("FitConfig: max_steps < 1");
}

Eigen::VectorXd init_params(int d, Rng& rng) {
    if (d < 1) throw std::invalid_argument("init_params: d must be >= 1");
    Eigen::VectorXd theta(3 + 2 * d);
    for (int i = 0; i < 3; ++i) theta[i] = std::log(rng.uniform(0.1, 2.0));
    const double sd = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 3; i < 3 + 2 * d; ++i) theta[i] = sd * rng.normal();
    for (int block = 0; block < 2; ++block) {
        auto u = theta.segment(3 + block * d, d);
        const double n = u.norm();
        if (n > 1.0) u /= n;
    }
    return theta;
}

ModelParams project_params(const Eigen::VectorXd& theta) {
    if (theta.size() < 5 || (theta.size() - 3) % 2 != 0) {
        throw std::invalid_argument("project_params: bad vector length");
    }
    const int d = static_cast<int>((theta.size() - 3) / 2);
    for (int i = 0; i < 3; ++i) {
        if (!(theta[i] < 700.0)) {
            throw std::runtime_error("project_params: rate parameter overflow in exp");
        }
    }
    ModelParams params;
    params.mu = std::exp(theta[0]);
    params.beta1 = std::exp(theta[1]);
    params.beta2 = std::exp(theta[2]);
    params.u1 = theta.segment(3, d);
    params.u2 = theta.segment(3 + d, d);
    for (Eigen::VectorXd* u : {&params.u1, &params.u2}) {
        const double n = u->norm();
        if (n > 1.0) *u /= n;
    }
    return params;
}

void adam_step(AdamState& state, Eigen::VectorXd& theta, const Eigen::VectorXd& gradient,
               const FitConfig& config) {
    if (gradient.size() != theta.size() || state.m.size() != theta.size()) {
        throw std::invalid_argument("adam_step: dimension mismatch");
    }
    if (!gradient.allFinite()) {
        throw std::runtime_error("adam_step: non-finite gradient component");
    }
    state.step += 1;
    state.m = config.adam_beta_m * state.m + (1.0 - config.adam_beta_m) * gradient;
    state.v = config.adam_beta_v * state.v.array().matrix() +
              (1.0 - config.adam_beta_v) * gradient.array().square().matrix();
    const double mc = 1.0 - std::pow(config.adam_beta_m, static_cast<double>(state.step));
    const double vc = 1.0 - std::pow(config.adam_beta_v, static_cast<double>(state.step));
    const Eigen::ArrayXd m_hat = state.m.array() / mc;
    const Eigen::ArrayXd v_hat = state.v.array() / vc;
    theta.array() += config.learning_rate * m_hat / (v_hat.sqrt() + config.adam_eps);
}

ModelParams relabel_components(const ModelParams& params, bool* tie_flag) {
    if (tie_flag) *tie_flag = std::abs(params.beta1 - params.beta2) < 1e-9;
    if (params.beta1 >= params.beta2) return params;
    ModelParams swapped = params;
    std::swap(swapped.beta1, swapped.beta2);
    std::swap(swapped.u1, swapped.u2);
    return swapped;
}

double relative_error(double est, double truth) {
    if (truth == 0.0) throw std::invalid_argument("relative_error: zero truth");
    return std::abs(est - truth) / std::abs(truth);
}

double relative_error(const Eigen::VectorXd& est, const Eigen::VectorXd& truth) {
    const double n = truth.norm();
    if (n == 0.0) throw std::invalid_argument("relative_error: zero-norm truth");
    if (est.size() != truth.size()) throw std::invalid_argument("relative_error: size mismatch");
    return (est - truth).norm() / n;
}

ParamErrors param_errors(const ModelParams& est, const ModelParams& truth) {
    ParamErrors e;
    e.mu = relative_error(est.mu, truth.mu);
    e.beta1 = relative_error(est.beta1, truth.beta1);
    e.beta2 = relative_error(est.beta2, truth.beta2);
    e.u1 = relative_error(est.u1, truth.u1);
    e.u2 = relative_error(est.u2, truth.u2);
    return e;
}

namespace {

// Gradient in the unconstrained coordinates: chain rule through exp for the
// rates; the unit-ball clip is applied after the step, not differentiated.
Eigen::VectorXd to_unconstrained_gradient(const LogLikGradient& g, const ModelParams& p) {
    const int d = static_cast<int>(g.d_u1.size());
    Eigen::VectorXd grad(3 + 2 * d);
    grad[0] = g.d_mu * p.mu;
    grad[1] = g.d_beta1 * p.beta1;
    grad[2] = g.d_beta2 * p.beta2;
    grad.segment(3, d) = g.d_u1;
    grad.segment(3 + d, d) = g.d_u2;
    return grad;
}

void clip_embeddings(Eigen::VectorXd& theta, int d) {
    for (int block = 0; block < 2; ++block) {
        auto u = theta.segment(3 + block * d, d);
        const double n = u.norm();
        if (n > 1.0) u /= n;
    }
}

bool smoothed_monotone(const std::vector<double>& trajectory) {
    // Window-32 block means; a later block dipping more than 1% relative
    // below the running maximum after burn-in (first half) counts as
    // non-monotone.
    constexpr int kWindow = 32;
    if (trajectory.size() < 4 * kWindow) return true;
    std::vector<double> blocks;
    for (std::size_t i = 0; i + kWindow <= trajectory.size(); i += kWindow) {
        blocks.push_back(
            std::accumulate(trajectory.begin() + i, trajectory.begin() + i + kWindow, 0.0) /
            kWindow);
    }
    double running_max = -std::numeric_limits<double>::infinity();
    for (std::size_t b = blocks.size() / 2; b < blocks.size(); ++b) {
        running_max = std::max(running_max, blocks[b]);
        if (blocks[b] < running_max - 0.01 * std::abs(running_max)) return false;
    }
    return true;
}

}  // namespace

FitReport fit(const std::vector<EpochData>& epochs, const FitConfig& config,
              const ModelParams* truth) {
    config.validate();
    if (epochs.empty()) throw std::invalid_argument("fit: need at least one epoch");
    const int d = static_cast<int>(epochs.front().session_vecs.cols());
    for (const EpochData& e : epochs) {
        if (e.session_vecs.cols() != d) throw std::invalid_argument("fit: dimension mismatch");
    }

    Rng init_rng(derive_seed(config.init_seed, 0));
    Rng shuffle_rng(derive_seed(config.init_seed, 1));
    Eigen::VectorXd theta = init_params(d, init_rng);
    AdamState state(theta.size());

    std::vector<int> order(epochs.size());
    std::iota(order.begin(), order.end(), 0);
    std::size_t cursor = order.size();  // forces a shuffle before the first batch

    FitReport report;
    report.trajectory.reserve(config.max_steps);
    double prev_window_mean = 0.0;
    bool have_prev_window = false;
    double window_sum = 0.0;

    for (int step = 0; step < config.max_steps; ++step) {
        const ModelParams params = project_params(theta);
        double objective = 0.0;
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta.size());
        const int batch = std::min<int>(config.batch_size, static_cast<int>(epochs.size()));
        for (int b = 0; b < batch; ++b) {
            if (cursor == order.size()) {
                for (std::size_t i = order.size(); i > 1; --i) {
                    std::swap(order[i - 1], order[shuffle_rng.below(i)]);
                }
                cursor = 0;
            }
            const EpochData& epoch = epochs[order[cursor++]];
            LogLikGradient g;
            objective += log_likelihood_with_gradient(epoch, params, g);
            grad += to_unconstrained_gradient(g, params);
        }
        objective /= batch;
        grad /= batch;
        if (!std::isfinite(objective)) {
            throw std::runtime_error("fit: non-finite objective at step " + std::to_string(step));
        }
        adam_step(state, theta, grad, config);
        clip_embeddings(theta, d);
        report.trajectory.push_back(objective);
        report.steps_taken = step + 1;

        window_sum += objective;
        if ((step + 1) % config.convergence_window == 0) {
            const double window_mean = window_sum / config.convergence_window;
            window_sum = 0.0;
            if (have_prev_window &&
                std::abs(window_mean - prev_window_mean) <
                    config.convergence_tol * std::abs(window_mean)) {
                report.converged = true;
                break;
            }
            prev_window_mean = window_mean;
            have_prev_window = true;
        }
    }

    report.params = relabel_components(project_params(theta), &report.beta_tie_warning);
    report.non_monotone_flag = !smoothed_monotone(report.trajectory);
    if (truth) report.errors = param_errors(report.params, *truth);
    return report;
}

FitReport fit(const std::vector<EpochTrace>& epochs, const ItemCatalog& catalog,
              const FitConfig& config, const ModelParams* truth) {
    std::vector<EpochData> data;
    data.reserve(epochs.size());
    for (const EpochTrace& e : epochs) data.push_back(EpochData::from_trace(e, catalog));
    return fit(data, config, truth);
}

}  // namespace hawkes
