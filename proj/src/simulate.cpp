#include "hawkes/simulate.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace hawkes {

void SimConfig::validate() const {
    if (sessions_per_epoch < 0) throw std::invalid_argument("SimConfig: negative session count");
    if (!(session_len_p > 0.0 && session_len_p < 1.0)) {
        throw std::invalid_argument("SimConfig: session_len_p must be in (0, 1)");
    }
    if (session_len_min < 1 || session_len_min > session_len_max) {
        throw std::invalid_argument("SimConfig: need 1 <= min <= max");
    }
}

int draw_session_length(const SimConfig& config, Rng& rng) {
    int k = config.session_len_min;
    while (k < config.session_len_max && !rng.bernoulli(config.session_len_p)) ++k;
    return k;
}

std::vector<int> draw_session_items(int length, const ItemCatalog& catalog, Rng& rng) {
    if (length < 1) throw std::invalid_argument("draw_session_items: length must be >= 1");
    if (catalog.count() < 1) throw std::invalid_argument("draw_session_items: empty catalog");
    std::vector<int> items(length);
    for (int& j : items) {
        j = static_cast<int>(rng.below(static_cast<std::uint64_t>(catalog.count())));
    }
    return items;
}

EpochTrace simulate_epoch(const ModelParams& params, const ItemCatalog& catalog,
                          const SimConfig& config) {
    params.validate();
    config.validate();
    if (catalog.dim() != params.dim()) {
        throw std::invalid_argument("simulate_epoch: catalog/params dimension mismatch");
    }

    Rng arrival_rng(derive_seed(config.rng_seed, 0));
    Rng content_rng(derive_seed(config.rng_seed, 1));

    EpochTrace trace;
    trace.sessions.reserve(config.sessions_per_epoch);

    // Excitation state at the last accepted event (post-jump).
    double a1 = 0.0;
    double a2 = 0.0;
    double t_last = 0.0;
    while (static_cast<int>(trace.sessions.size()) < config.sessions_per_epoch) {
        // Dominating rate: intensity just after t_last, decayed to the
        // current candidate time as candidates get rejected.
        double upper = params.mu + params.beta1 * a1 + params.beta2 * a2;
        double t = t_last;
        for (;;) {
            t += arrival_rng.exponential(upper);
            const double lambda = params.mu +
                                  params.beta1 * a1 * std::exp(-params.beta1 * (t - t_last)) +
                                  params.beta2 * a2 * std::exp(-params.beta2 * (t - t_last));
            assert(lambda <= upper * (1.0 + 1e-12));
            if (arrival_rng.uniform() * upper <= lambda) break;
            upper = lambda;  // still an upper bound: intensity decays until the next arrival
        }

        SessionRecord session;
        session.t = t;
        session.items =
            draw_session_items(draw_session_length(config, content_rng), catalog, content_rng);
        const Eigen::VectorXd v = session_vector(session, catalog);

        a1 = a1 * std::exp(-params.beta1 * (t - t_last)) + infectivity(v, params.u1);
        a2 = a2 * std::exp(-params.beta2 * (t - t_last)) + infectivity(v, params.u2);
        t_last = t;
        trace.sessions.push_back(std::move(session));
    }
    trace.horizon = t_last;
    return trace;
}

}  // namespace hawkes
