#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "hawkes/synth.hpp"
#include "support/stats.hpp"

using namespace hawkes;
using namespace hawkes::testing;

TEST_CASE("orthonormal_basis is orthonormal for a range of dimensions") {
    Rng rng(2);
    for (int d : {1, 2, 3, 5, 10, 32, 64}) {
        const Eigen::MatrixXd q = orthonormal_basis(d, rng);
        const Eigen::MatrixXd gram = q.transpose() * q;
        CHECK((gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(std::abs(q.determinant()) - 1.0) < 1e-9);
    }
}

TEST_CASE("orthonormal_basis sign convention is reproducible") {
    Rng a(77), b(77);
    const Eigen::MatrixXd qa = orthonormal_basis(6, a);
    const Eigen::MatrixXd qb = orthonormal_basis(6, b);
    CHECK((qa - qb).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("base_user_pair takes the first two rows") {
    Rng rng(5);
    const Eigen::MatrixXd q = orthonormal_basis(10, rng);
    const auto [u1, u2] = base_user_pair(q);
    CHECK(u1.dot(u2) == doctest::Approx(0.0));
    CHECK(u1.norm() == doctest::Approx(1.0));
    CHECK(u2.norm() == doctest::Approx(1.0));
    CHECK((u1 - q.row(0).transpose()).norm() == 0.0);
    CHECK_THROWS_AS(base_user_pair(Eigen::MatrixXd::Identity(1, 1)), std::invalid_argument);
}

TEST_CASE("random_item_catalog spans the space and hugs its anchors") {
    Rng rng(9);
    const int d = 10;
    const Eigen::MatrixXd q = orthonormal_basis(d, rng);
    const ItemCatalog catalog = random_item_catalog(q, 1000, 1.0 / (10.0 * d), rng);
    REQUIRE(catalog.count() == 1000);

    for (int i = 0; i < catalog.count(); ++i) {
        CHECK(std::abs(catalog.vectors().row(i).norm() - 1.0) < 1e-9);
    }

    // Assumption check: items span all of R^d (smallest singular value
    // bounded away from zero).
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(catalog.vectors());
    CHECK(svd.singularValues().minCoeff() > 1e-6);

    // Each item should stay close to one of the rows of Q.
    double mean_best = 0.0;
    for (int i = 0; i < catalog.count(); ++i) {
        mean_best += (q * catalog.vectors().row(i).transpose()).cwiseAbs().maxCoeff();
    }
    mean_best /= catalog.count();
    CHECK(mean_best > 0.9);
}

TEST_CASE("dissimilar_user_pair closed-form dot product") {
    Rng rng(13);
    const Eigen::MatrixXd q = orthonormal_basis(8, rng);
    for (double s : {-0.5, 0.0, 0.2, 0.5, 1.0}) {
        const auto [u1, u2] = dissimilar_user_pair(q, s);
        CHECK(u1.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(u2.norm() == doctest::Approx(1.0).epsilon(1e-12));
        // From Q1 perpendicular to Q2: u1 . u2 = -s / sqrt(1 + s^2).
        CHECK(std::abs(u1.dot(u2) - (-s / std::sqrt(1.0 + s * s))) < 1e-9);
    }
    const auto [u1, u2] = dissimilar_user_pair(q, 0.0);
    CHECK((u1 - q.row(1).transpose()).norm() < 1e-12);
}

TEST_CASE("inventory_catalog anchor mix") {
    Rng rng(29);
    const Eigen::MatrixXd q = orthonormal_basis(10, rng);
    const auto [u1, u2] = dissimilar_user_pair(q, 0.2);
    const double noise_var = 0.01;
    const int m = 1000;

    SUBCASE("pure mixes hug the anchors") {
        const ItemCatalog all_u2 = inventory_catalog(u1, u2, 1.0, m, noise_var, rng);
        const ItemCatalog all_u1 = inventory_catalog(u1, u2, 0.0, m, noise_var, rng);
        CHECK((all_u2.vectors() * u2).mean() > 0.9);
        CHECK((all_u1.vectors() * u1).mean() > 0.9);
    }
    SUBCASE("anchor fraction tracks s") {
        for (double s : {0.25, 0.5, 0.75}) {
            const ItemCatalog catalog = inventory_catalog(u1, u2, s, m, noise_var, rng);
            int near_u2 = 0;
            for (int i = 0; i < m; ++i) {
                const double d2 = catalog.vectors().row(i) * u2;
                const double d1 = catalog.vectors().row(i) * u1;
                if (d2 > d1) ++near_u2;
            }
            const double se = std::sqrt(s * (1 - s) / m);
            CHECK(std::abs(near_u2 / double(m) - s) < 3.0 * se + 0.01);
        }
    }
    SUBCASE("all rows unit norm") {
        const ItemCatalog catalog = inventory_catalog(u1, u2, 0.5, 200, noise_var, rng);
        for (int i = 0; i < catalog.count(); ++i) {
            CHECK(std::abs(catalog.vectors().row(i).norm() - 1.0) < 1e-9);
        }
    }
    SUBCASE("s outside [0,1] rejected") {
        CHECK_THROWS_AS(inventory_catalog(u1, u2, 1.5, 10, noise_var, rng),
                        std::invalid_argument);
    }
}
