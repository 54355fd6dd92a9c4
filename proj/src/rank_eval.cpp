#include "hawkes/rank_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hawkes {

RankResult rank_items(const ItemCatalog& catalog, const Eigen::VectorXd& direction, int k) {
    if (k < 1 || k > catalog.count()) {
        throw std::invalid_argument("rank_items: k must be in [1, m]");
    }
    const Eigen::VectorXd scores = catalog.vectors() * direction;
    std::vector<int> order(catalog.count());
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    RankResult result;
    result.indices.assign(order.begin(), order.begin() + k);
    result.scores.reserve(k);
    for (int j : result.indices) result.scores.push_back(scores[j]);
    return result;
}

RankResult rank_items_stochastic(const ItemCatalog& catalog, const Eigen::VectorXd& direction,
                                 int k, double temperature, Rng& rng) {
    if (k < 1 || k > catalog.count()) {
        throw std::invalid_argument("rank_items_stochastic: k must be in [1, m]");
    }
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("rank_items_stochastic: temperature must be > 0");
    }
    const Eigen::VectorXd scores = catalog.vectors() * direction;
    // Gumbel top-k is softmax sampling without replacement.
    std::vector<int> order(catalog.count());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> keys(catalog.count());
    for (int j = 0; j < catalog.count(); ++j) {
        double u = rng.uniform();
        while (u <= 0.0) u = rng.uniform();
        keys[j] = scores[j] / temperature - std::log(-std::log(u));
    }
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](int a, int b) { return keys[a] > keys[b]; });
    RankResult result;
    result.indices.assign(order.begin(), order.begin() + k);
    result.scores.reserve(k);
    for (int j : result.indices) result.scores.push_back(scores[j]);
    return result;
}

double set_utility(const std::vector<int>& selected, const ItemCatalog& catalog,
                   const Eigen::VectorXd& u2_true) {
    if (selected.empty()) throw std::invalid_argument("set_utility: empty selection");
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(catalog.dim());
    for (int j : selected) {
        if (j < 0 || j >= catalog.count()) {
            throw std::invalid_argument("set_utility: item index out of range");
        }
        mean += catalog.vectors().row(j).transpose();
    }
    mean /= static_cast<double>(selected.size());
    return link(mean.dot(u2_true));
}

Eigen::VectorXd engagement_direction(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2) {
    if (u1.size() != u2.size()) {
        throw std::invalid_argument("engagement_direction: dimension mismatch");
    }
    return u1 + u2;
}

double long_run_average_utility(const std::vector<EpochTrace>& traces, const ItemCatalog& catalog,
                                const Eigen::VectorXd& u2_true) {
    double total_utility = 0.0;
    double total_horizon = 0.0;
    for (const EpochTrace& trace : traces) {
        for (const SessionRecord& s : trace.sessions) {
            total_utility += link(session_vector(s, catalog).dot(u2_true));
        }
        total_horizon += trace.horizon;
    }
    if (!(total_horizon > 0.0)) {
        throw std::invalid_argument("long_run_average_utility: zero total horizon");
    }
    return total_utility / total_horizon;
}

}  // namespace hawkes
