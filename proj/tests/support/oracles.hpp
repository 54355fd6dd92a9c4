#pragma once

// Independent oracles used only by tests: brute-force likelihood, adaptive
// quadrature of the intensity, and finite-difference gradients. None of
// these share code with the recursive implementation they check.

#include <cmath>
#include <functional>
#include <vector>

#include "hawkes/model.hpp"

namespace hawkes::testing {

// O(k^2) double-sum log-likelihood evaluated directly from the intensity
// definition.
inline double brute_force_log_likelihood(const std::vector<MarkedEvent>& events, double horizon,
                                         const ModelParams& p) {
    double sum_log = 0.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        double lambda = p.mu;
        for (std::size_t j = 0; j < i; ++j) {
            const double dt = events[i].t - events[j].t;
            lambda += events[j].alpha1 * p.beta1 * std::exp(-p.beta1 * dt);
            lambda += events[j].alpha2 * p.beta2 * std::exp(-p.beta2 * dt);
        }
        sum_log += std::log(lambda);
    }
    double comp = p.mu * horizon;
    for (const MarkedEvent& e : events) {
        comp += e.alpha1 * (1.0 - std::exp(-p.beta1 * (horizon - e.t)));
        comp += e.alpha2 * (1.0 - std::exp(-p.beta2 * (horizon - e.t)));
    }
    return sum_log - comp;
}

// Right-continuous intensity (includes an event's own jump at its
// timestamp); differs from the model's left limit only on a null set, so
// the integral is unchanged.
inline double intensity_right(double t, const std::vector<MarkedEvent>& events,
                              const ModelParams& p) {
    double lambda = p.mu;
    for (const MarkedEvent& e : events) {
        if (e.t > t) break;
        lambda += e.alpha1 * p.beta1 * std::exp(-p.beta1 * (t - e.t));
        lambda += e.alpha2 * p.beta2 * std::exp(-p.beta2 * (t - e.t));
    }
    return lambda;
}

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace detail

// Numerical integral of the intensity over [0, horizon], split at the event
// times where the integrand jumps.
inline double quadrature_compensator(const std::vector<MarkedEvent>& events, double horizon,
                                     const ModelParams& p, double tol = 1e-10) {
    auto f = [&](double t) { return intensity_right(t, events, p); };
    std::vector<double> cuts{0.0};
    for (const MarkedEvent& e : events) {
        if (e.t > 0.0 && e.t < horizon) cuts.push_back(e.t);
    }
    cuts.push_back(horizon);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += detail::integrate(f, cuts[i], cuts[i + 1], tol);
    }
    return total;
}

// Central finite differences of log_likelihood in every coordinate,
// flattened as [mu, beta1, beta2, u1, u2].
inline Eigen::VectorXd finite_difference_gradient(const EpochData& data, const ModelParams& p,
                                                  double step = 1e-5) {
    const int d = p.dim();
    Eigen::VectorXd grad(3 + 2 * d);
    auto eval_at = [&](int coord, double delta) {
        ModelParams q = p;
        if (coord == 0) q.mu += delta;
        else if (coord == 1) q.beta1 += delta;
        else if (coord == 2) q.beta2 += delta;
        else if (coord < 3 + d) q.u1[coord - 3] += delta;
        else q.u2[coord - 3 - d] += delta;
        return log_likelihood(data, q);
    };
    for (int c = 0; c < 3 + 2 * d; ++c) {
        grad[c] = (eval_at(c, step) - eval_at(c, -step)) / (2.0 * step);
    }
    return grad;
}

}  // namespace hawkes::testing
