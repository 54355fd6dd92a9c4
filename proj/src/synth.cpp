#include "hawkes/synth.hpp"

#include <Eigen/QR>
#include <cmath>
#include <stdexcept>

namespace hawkes {

namespace {

Eigen::VectorXd noisy_unit(const Eigen::VectorXd& anchor, double noise_std, Rng& rng) {
    for (;;) {
        Eigen::VectorXd v = anchor;
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += noise_std * rng.normal();
        const double n = v.norm();
        if (n > 1e-12) return v / n;
    }
}

}  // namespace

Eigen::MatrixXd orthonormal_basis(int d, Rng& rng) {
    if (d < 1) throw std::invalid_argument("orthonormal_basis: d must be >= 1");
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Sign convention: nonnegative diagonal of R makes Q unique.
    for (int j = 0; j < d; ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return q;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> base_user_pair(const Eigen::MatrixXd& q) {
    if (q.rows() < 2) throw std::invalid_argument("base_user_pair: need d >= 2");
    return {q.row(0).transpose(), q.row(1).transpose()};
}

ItemCatalog random_item_catalog(const Eigen::MatrixXd& q, int m, double noise_var, Rng& rng) {
    if (m < 1) throw std::invalid_argument("random_item_catalog: m must be >= 1");
    if (!(noise_var > 0.0)) throw std::invalid_argument("random_item_catalog: noise_var <= 0");
    const int d = static_cast<int>(q.rows());
    const double noise_std = std::sqrt(noise_var);
    Eigen::MatrixXd vectors(m, d);
    for (int i = 0; i < m; ++i) {
        const int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
        vectors.row(i) = noisy_unit(q.row(r).transpose(), noise_std, rng).transpose();
    }
    return ItemCatalog(std::move(vectors));
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> dissimilar_user_pair(const Eigen::MatrixXd& q,
                                                                 double s) {
    if (q.rows() < 2) throw std::invalid_argument("dissimilar_user_pair: need d >= 2");
    Eigen::VectorXd u2 = q.row(0).transpose();
    Eigen::VectorXd u1 = -s * q.row(0).transpose() + q.row(1).transpose();
    u1 /= u1.norm();
    return {u1, u2};
}

ItemCatalog inventory_catalog(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2, double s,
                              int m, double noise_var, Rng& rng) {
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("inventory_catalog: s outside [0, 1]");
    if (m < 1) throw std::invalid_argument("inventory_catalog: m must be >= 1");
    const double noise_std = std::sqrt(noise_var);
    Eigen::MatrixXd vectors(m, u1.size());
    for (int i = 0; i < m; ++i) {
        const Eigen::VectorXd& anchor = rng.bernoulli(s) ? u2 : u1;
        vectors.row(i) = noisy_unit(anchor, noise_std, rng).transpose();
    }
    return ItemCatalog(std::move(vectors));
}

}  // namespace hawkes
