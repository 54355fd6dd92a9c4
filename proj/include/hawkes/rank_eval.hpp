#pragma once

#include <vector>

#include "hawkes/model.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

struct RankResult {
    std::vector<int> indices;    // descending score; ties broken by lower index
    std::vector<double> scores;  // matching dot products
};

// Top-k items by dot product with `direction`. Throws if k < 1 or k > m.
RankResult rank_items(const ItemCatalog& catalog, const Eigen::VectorXd& direction, int k);

// Softmax sampling without replacement at the given temperature; the
// deterministic ranking is the temperature -> 0 limit.
RankResult rank_items_stochastic(const ItemCatalog& catalog, const Eigen::VectorXd& direction,
                                 int k, double temperature, Rng& rng);

// link(mean(selected vectors) . u2_true); always scored against the true
// utility embedding regardless of which direction produced the set.
double set_utility(const std::vector<int>& selected, const ItemCatalog& catalog,
                   const Eigen::VectorXd& u2_true);

// Engagement signal direction: u1 + u2, not renormalized.
Eigen::VectorXd engagement_direction(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2);

// Sum of per-session utilities across traces divided by total horizon time.
double long_run_average_utility(const std::vector<EpochTrace>& traces, const ItemCatalog& catalog,
                                const Eigen::VectorXd& u2_true);

}  // namespace hawkes
