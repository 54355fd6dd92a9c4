#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace hawkes {

// Link function mapping a dot product in [-1, 1] to an infectivity in
// [0, 0.5]: phi(x) = (x + 1) / 4. Inputs within 1e-9 of the interval are
// clamped; anything further out is rejected.
double link(double x);

// Full parameter bundle of the dual-kernel model for one user. beta1 drives
// the fast (System-1, moreishness) component, beta2 the slow (System-2,
// utility) one. Canonical form has beta1 > beta2; validate() does not
// enforce the ordering since the likelihood is label-symmetric.
struct ModelParams {
    double mu = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    Eigen::VectorXd u1;
    Eigen::VectorXd u2;

    int dim() const { return static_cast<int>(u1.size()); }

    // Throws std::invalid_argument on mu/beta <= 0, dimension mismatch, or
    // embedding norm > 1 + 1e-9.
    void validate() const;
};

// m x d matrix of unit-norm item embeddings, one row per item.
class ItemCatalog {
  public:
    ItemCatalog() = default;
    // Throws if any row norm deviates from 1 by more than 1e-9 or the
    // matrix is empty.
    explicit ItemCatalog(Eigen::MatrixXd vectors);

    int count() const { return static_cast<int>(vectors_.rows()); }
    int dim() const { return static_cast<int>(vectors_.cols()); }
    const Eigen::MatrixXd& vectors() const { return vectors_; }
    Eigen::VectorXd item(int j) const { return vectors_.row(j).transpose(); }

  private:
    Eigen::MatrixXd vectors_;
};

// One arrival: timestamp plus the items interacted with in that session.
struct SessionRecord {
    double t = 0.0;
    std::vector<int> items;
};

// An independent realization: sessions with strictly increasing timestamps
// observed on [0, horizon].
struct EpochTrace {
    std::vector<SessionRecord> sessions;
    double horizon = 0.0;

    void validate(const ItemCatalog& catalog) const;
};

// Arrival with its two infectivity marks; the likelihood works on these.
struct MarkedEvent {
    double t = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
};

// Mean of the session's item embeddings. Throws on an empty session or an
// out-of-range index.
Eigen::VectorXd session_vector(const SessionRecord& session, const ItemCatalog& catalog);

// link(v_s . u); both arguments must have norm <= 1.
double infectivity(const Eigen::VectorXd& v_s, const Eigen::VectorXd& u);

// Converts a trace to marked events using the catalog and the params'
// embeddings.
std::vector<MarkedEvent> marked_events(const EpochTrace& epoch, const ItemCatalog& catalog,
                                       const ModelParams& params);

// Conditional intensity at t given events strictly before t.
// lambda(t) = mu + sum_j [a1_j b1 e^{-b1(t-t_j)} + a2_j b2 e^{-b2(t-t_j)}].
double intensity(double t, std::span<const MarkedEvent> history, const ModelParams& params);

// Integral of the intensity over [0, horizon], in closed form.
double compensator(double horizon, std::span<const MarkedEvent> history,
                   const ModelParams& params);

// Per-epoch data laid out for repeated likelihood evaluation: timestamps
// and precomputed session vectors (one row per session).
struct EpochData {
    Eigen::VectorXd times;
    Eigen::MatrixXd session_vecs;  // k x d
    double horizon = 0.0;

    static EpochData from_trace(const EpochTrace& epoch, const ItemCatalog& catalog);
};

struct LogLikGradient {
    double d_mu = 0.0;
    double d_beta1 = 0.0;
    double d_beta2 = 0.0;
    Eigen::VectorXd d_u1;
    Eigen::VectorXd d_u2;
};

// Exact log-likelihood, O(k) per kernel component via the exponential
// recursion. Empty epochs are valid and give -mu * horizon.
double log_likelihood(const EpochData& data, const ModelParams& params);
double log_likelihood(const EpochTrace& epoch, const ItemCatalog& catalog,
                      const ModelParams& params);

// Analytic gradient of log_likelihood in all five parameter blocks, O(k d).
LogLikGradient log_likelihood_gradient(const EpochData& data, const ModelParams& params);
LogLikGradient log_likelihood_gradient(const EpochTrace& epoch, const ItemCatalog& catalog,
                                       const ModelParams& params);

// Gradient and value in one pass; used by the optimizer.
double log_likelihood_with_gradient(const EpochData& data, const ModelParams& params,
                                    LogLikGradient& grad);

}  // namespace hawkes
