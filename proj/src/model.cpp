#include "admfreq/model.hpp"

#include <cmath>

namespace admfreq {

std::vector<double> ParameterVector::flatten() const {
    std::vector<double> out;
    out.reserve(a_c.size() * 2 + 2);
    for (std::size_t i = 0; i < a_c.size(); ++i) {
        out.push_back(a_s[i]);
        out.push_back(a_c[i]);
    }
    out.push_back(a_dc);
    out.push_back(a_dc1);
    return out;
}

double eval_at_phase(const ParameterVector& theta, double phase, double dc_time) {
    double v = theta.a_dc - theta.a_dc1 * dc_time;
    for (int i = 1; i <= theta.order(); ++i) {
        const double arg = i * phase;
        v += theta.a_c[i - 1] * std::sin(arg) + theta.a_s[i - 1] * std::cos(arg);
    }
    return v;
}

double eval_model(const ParameterVector& theta, double omega1, double t) {
    return eval_at_phase(theta, omega1 * t, t);
}

double model_omega_gradient(const ParameterVector& theta, double omega1, double t) {
    double g = 0.0;
    for (int i = 1; i <= theta.order(); ++i) {
        const double arg = i * omega1 * t;
        g += i * t * (theta.a_c[i - 1] * std::cos(arg) - theta.a_s[i - 1] * std::sin(arg));
    }
    return g;
}

double wrap_phase(double phase) {
    double w = std::fmod(phase, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

}  // namespace admfreq
