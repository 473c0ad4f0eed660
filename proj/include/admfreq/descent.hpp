#pragma once

#include <cstddef>
#include <vector>

#include "admfreq/model.hpp"

namespace admfreq {

// Frequency-only gradient descent with the amplitude parameters frozen.
// The reference signal is the same model evaluated at the true frequency.

enum class EtaRule {
    bound,     // eta = beta / (ts * g_max^2), g_max bounding |dE/domega| over the run
    per_step,  // eta = beta / (ts * h_k^2), h_k the current gradient
};

struct DescentSetup {
    ParameterVector frozen;
    double true_omega = kTwoPi * 50.0;
    double omega0 = kTwoPi * 50.05;
    double ts = 1.0 / 1200.0;
    double t_start = 0.5;
    std::size_t steps = 1000;
    double beta = 1.0;
    EtaRule rule = EtaRule::bound;
};

struct DescentStep {
    double t = 0.0;
    double omega = 0.0;
    double error = 0.0;      // E = model(omega_hat) - model(omega)
    double gradient = 0.0;   // dE/domega_hat
    double eta = 0.0;
    double dj = 0.0;         // J after the update minus J before, same t
    double dj_linear = 0.0;  // first-order model of dj
};

/// Upper bound of |dE/domega| up to time t_max: t_max * sum(i * amp_i).
double gradient_bound(const ParameterVector& theta, double t_max);

std::vector<DescentStep> frequency_descent(const DescentSetup& setup);

}  // namespace admfreq
