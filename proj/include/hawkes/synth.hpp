#pragma once

#include <utility>

#include "hawkes/model.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

// Q from the QR factorization of a d x d matrix of i.i.d. standard normals,
// with signs fixed so the diagonal of R is nonnegative.
Eigen::MatrixXd orthonormal_basis(int d, Rng& rng);

// (u1, u2) = first and second row of Q.
std::pair<Eigen::VectorXd, Eigen::VectorXd> base_user_pair(const Eigen::MatrixXd& q);

// m unit vectors, each a random row of Q plus N(0, noise_var) per dimension,
// normalized. Degenerate (near-zero) draws are resampled.
ItemCatalog random_item_catalog(const Eigen::MatrixXd& q, int m, double noise_var, Rng& rng);

// u2 = Q_1, u1 = normalize(-s Q_1 + Q_2). Their dot product is
// -s / sqrt(1 + s^2).
std::pair<Eigen::VectorXd, Eigen::VectorXd> dissimilar_user_pair(const Eigen::MatrixXd& q,
                                                                 double s);

// Each item anchors at u2 with probability s, else at u1, plus
// N(0, noise_var) per dimension, normalized.
ItemCatalog inventory_catalog(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2, double s,
                              int m, double noise_var, Rng& rng);

}  // namespace hawkes
