#include "hawkes/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hawkes {

namespace {

constexpr double kNormTol = 1e-9;

}  // namespace

double link(double x) {
    if (x < -1.0 - kNormTol || x > 1.0 + kNormTol) {
        throw std::invalid_argument("link: input " + std::to_string(x) +
                                    " outside [-1, 1]");
    }
    if (x < -1.0) x = -1.0;
    if (x > 1.0) x = 1.0;
    return (x + 1.0) / 4.0;
}

void ModelParams::validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("ModelParams: mu must be > 0");
    if (!(beta1 > 0.0)) throw std::invalid_argument("ModelParams: beta1 must be > 0");
    if (!(beta2 > 0.0)) throw std::invalid_argument("ModelParams: beta2 must be > 0");
    if (u1.size() != u2.size() || u1.size() == 0) {
        throw std::invalid_argument("ModelParams: u1 and u2 must share a nonzero dimension");
    }
    if (u1.norm() > 1.0 + kNormTol || u2.norm() > 1.0 + kNormTol) {
        throw std::invalid_argument("ModelParams: embedding norm exceeds 1");
    }
}

ItemCatalog::ItemCatalog(Eigen::MatrixXd vectors) : vectors_(std::move(vectors)) {
    if (vectors_.rows() < 1 || vectors_.cols() < 1) {
        throw std::invalid_argument("ItemCatalog: need at least one item and one dimension");
    }
    for (Eigen::Index i = 0; i < vectors_.rows(); ++i) {
        if (std::abs(vectors_.row(i).norm() - 1.0) > kNormTol) {
            throw std::invalid_argument("ItemCatalog: row " + std::to_string(i) +
                                        " is not unit norm");
        }
    }
}

void EpochTrace::validate(const ItemCatalog& catalog) const {
    double prev = -1.0;
    for (const SessionRecord& s : sessions) {
        if (s.items.empty()) throw std::invalid_argument("EpochTrace: empty session");
        for (int j : s.items) {
            if (j < 0 || j >= catalog.count()) {
                throw std::invalid_argument("EpochTrace: item index out of range");
            }
        }
        if (!(s.t > prev)) {
            throw std::invalid_argument("EpochTrace: timestamps must be strictly increasing");
        }
        prev = s.t;
    }
    if (!sessions.empty() && sessions.back().t > horizon) {
        throw std::invalid_argument("EpochTrace: last timestamp exceeds horizon");
    }
}

Eigen::VectorXd session_vector(const SessionRecord& session, const ItemCatalog& catalog) {
    if (session.items.empty()) throw std::invalid_argument("session_vector: empty session");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(catalog.dim());
    for (int j : session.items) {
        if (j < 0 || j >= catalog.count()) {
            throw std::invalid_argument("session_vector: item index out of range");
        }
        v += catalog.vectors().row(j).transpose();
    }
    return v / static_cast<double>(session.items.size());
}

double infectivity(const Eigen::VectorXd& v_s, const Eigen::VectorXd& u) {
    if (v_s.size() != u.size()) throw std::invalid_argument("infectivity: dimension mismatch");
    return link(v_s.dot(u));
}

std::vector<MarkedEvent> marked_events(const EpochTrace& epoch, const ItemCatalog& catalog,
                                       const ModelParams& params) {
    std::vector<MarkedEvent> events;
    events.reserve(epoch.sessions.size());
    for (const SessionRecord& s : epoch.sessions) {
        const Eigen::VectorXd v = session_vector(s, catalog);
        events.push_back({s.t, infectivity(v, params.u1), infectivity(v, params.u2)});
    }
    return events;
}

double intensity(double t, std::span<const MarkedEvent> history, const ModelParams& params) {
    double excess1 = 0.0;
    double excess2 = 0.0;
    for (const MarkedEvent& e : history) {
        const double dt = t - e.t;
        if (dt <= 0.0) {
            throw std::invalid_argument("intensity: history timestamp not strictly before t");
        }
        excess1 += e.alpha1 * std::exp(-params.beta1 * dt);
        excess2 += e.alpha2 * std::exp(-params.beta2 * dt);
    }
    return params.mu + params.beta1 * excess1 + params.beta2 * excess2;
}

double compensator(double horizon, std::span<const MarkedEvent> history,
                   const ModelParams& params) {
    double mass = params.mu * horizon;
    for (const MarkedEvent& e : history) {
        const double dt = horizon - e.t;
        if (dt < 0.0) throw std::invalid_argument("compensator: timestamp exceeds horizon");
        mass += e.alpha1 * (1.0 - std::exp(-params.beta1 * dt));
        mass += e.alpha2 * (1.0 - std::exp(-params.beta2 * dt));
    }
    return mass;
}

EpochData EpochData::from_trace(const EpochTrace& epoch, const ItemCatalog& catalog) {
    epoch.validate(catalog);
    EpochData data;
    const int k = static_cast<int>(epoch.sessions.size());
    data.times.resize(k);
    data.session_vecs.resize(k, catalog.dim());
    for (int i = 0; i < k; ++i) {
        data.times[i] = epoch.sessions[i].t;
        data.session_vecs.row(i) = session_vector(epoch.sessions[i], catalog).transpose();
    }
    data.horizon = epoch.horizon;
    return data;
}

namespace {

// Shared forward/backward pass. The excitation sums obey the exponential
// recursions
//   A_i = e^{-b dt_i} (A_{i-1} + alpha_{i-1})
//   B_i = e^{-b dt_i} (B_{i-1} + dt_i (A_{i-1} + alpha_{i-1}))
// so the whole likelihood and gradient cost O(k d) instead of O(k^2).
double eval(const EpochData& data, const ModelParams& params, LogLikGradient* grad) {
    params.validate();
    if (data.session_vecs.cols() != params.dim()) {
        throw std::invalid_argument("log_likelihood: catalog/params dimension mismatch");
    }
    const int k = static_cast<int>(data.times.size());
    const double T = data.horizon;
    const double b1 = params.beta1;
    const double b2 = params.beta2;

    if (grad) {
        grad->d_u1 = Eigen::VectorXd::Zero(params.dim());
        grad->d_u2 = Eigen::VectorXd::Zero(params.dim());
        grad->d_mu = -T;
        grad->d_beta1 = 0.0;
        grad->d_beta2 = 0.0;
    }
    if (k == 0) return -params.mu * T;

    Eigen::ArrayXd alpha1 = ((data.session_vecs * params.u1).array() + 1.0) / 4.0;
    Eigen::ArrayXd alpha2 = ((data.session_vecs * params.u2).array() + 1.0) / 4.0;

    Eigen::ArrayXd inv_lambda(k);
    double sum_log = 0.0;
    double a1 = 0.0, a2 = 0.0;  // excitation sums at t_i (pre-event)
    double c1 = 0.0, c2 = 0.0;  // time-weighted sums for d/d beta
    double g_b1 = 0.0, g_b2 = 0.0;
    for (int i = 0; i < k; ++i) {
        if (i > 0) {
            const double dt = data.times[i] - data.times[i - 1];
            if (!(dt > 0.0)) {
                throw std::invalid_argument("log_likelihood: non-increasing timestamps");
            }
            const double d1 = std::exp(-b1 * dt);
            const double d2 = std::exp(-b2 * dt);
            const double s1 = a1 + alpha1[i - 1];
            const double s2 = a2 + alpha2[i - 1];
            c1 = d1 * (c1 + dt * s1);
            c2 = d2 * (c2 + dt * s2);
            a1 = d1 * s1;
            a2 = d2 * s2;
        }
        const double lambda = params.mu + b1 * a1 + b2 * a2;
        sum_log += std::log(lambda);
        const double il = 1.0 / lambda;
        inv_lambda[i] = il;
        if (grad) {
            g_b1 += (a1 - b1 * c1) * il;
            g_b2 += (a2 - b2 * c2) * il;
        }
    }

    // Compensator and its derivatives.
    Eigen::ArrayXd tail1 = (-b1 * (T - data.times.array())).exp();
    Eigen::ArrayXd tail2 = (-b2 * (T - data.times.array())).exp();
    double comp = params.mu * T + (alpha1 * (1.0 - tail1)).sum() + (alpha2 * (1.0 - tail2)).sum();

    if (grad) {
        grad->d_mu = inv_lambda.sum() - T;
        g_b1 -= (alpha1 * (T - data.times.array()) * tail1).sum();
        g_b2 -= (alpha2 * (T - data.times.array()) * tail2).sum();
        grad->d_beta1 = g_b1;
        grad->d_beta2 = g_b2;

        // Backward pass: w_j = b * sum_{i>j} e^{-b(t_i - t_j)} / lambda_i,
        // the weight of session j's mark in the event-log term.
        Eigen::ArrayXd w1(k), w2(k);
        w1[k - 1] = 0.0;
        w2[k - 1] = 0.0;
        for (int j = k - 2; j >= 0; --j) {
            const double dt = data.times[j + 1] - data.times[j];
            w1[j] = std::exp(-b1 * dt) * (b1 * inv_lambda[j + 1] + w1[j + 1]);
            w2[j] = std::exp(-b2 * dt) * (b2 * inv_lambda[j + 1] + w2[j + 1]);
        }
        // d alpha / d u = v / 4.
        grad->d_u1 = data.session_vecs.transpose() * ((w1 - (1.0 - tail1)) / 4.0).matrix();
        grad->d_u2 = data.session_vecs.transpose() * ((w2 - (1.0 - tail2)) / 4.0).matrix();
    }
    return sum_log - comp;
}

}  // namespace

double log_likelihood(const EpochData& data, const ModelParams& params) {
    return eval(data, params, nullptr);
}

double log_likelihood(const EpochTrace& epoch, const ItemCatalog& catalog,
                      const ModelParams& params) {
    return log_likelihood(EpochData::from_trace(epoch, catalog), params);
}

LogLikGradient log_likelihood_gradient(const EpochData& data, const ModelParams& params) {
    LogLikGradient grad;
    eval(data, params, &grad);
    return grad;
}

LogLikGradient log_likelihood_gradient(const EpochTrace& epoch, const ItemCatalog& catalog,
                                       const ModelParams& params) {
    return log_likelihood_gradient(EpochData::from_trace(epoch, catalog), params);
}

double log_likelihood_with_gradient(const EpochData& data, const ModelParams& params,
                                    LogLikGradient& grad) {
    return eval(data, params, &grad);
}

}  // namespace hawkes
