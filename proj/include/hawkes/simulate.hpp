#pragma once

#include <cstdint>

#include "hawkes/model.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

struct SimConfig {
    int sessions_per_epoch = 1000;
    double session_len_p = 0.8;
    int session_len_min = 1;
    int session_len_max = 6;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

// Geometric(p) number of trials up to the first success, truncated at
// session_len_max: P(k) = (1-p)^{k-1} p for k < max, remaining mass on max.
int draw_session_length(const SimConfig& config, Rng& rng);

// `length` indices drawn uniformly with replacement from [0, m).
std::vector<int> draw_session_items(int length, const ItemCatalog& catalog, Rng& rng);

// Ogata thinning. The dominating rate between events is the intensity just
// after the last accepted event, which is an upper bound because the
// intensity only decays between arrivals. Session content is drawn from a
// separate RNG stream so it is independent of the arrival-time randomness;
// both streams derive from config.rng_seed. Horizon is set to the last
// arrival time.
EpochTrace simulate_epoch(const ModelParams& params, const ItemCatalog& catalog,
                          const SimConfig& config);

}  // namespace hawkes
