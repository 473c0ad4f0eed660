#include "admfreq/descent.hpp"

#include <algorithm>
#include <cmath>

#include "admfreq/error.hpp"

namespace admfreq {

double gradient_bound(const ParameterVector& theta, double t_max) {
    double s = 0.0;
    for (int i = 1; i <= theta.order(); ++i) s += i * std::hypot(theta.a_c[i - 1], theta.a_s[i - 1]);
    return t_max * s;
}

std::vector<DescentStep> frequency_descent(const DescentSetup& setup) {
    if (!(setup.ts > 0.0)) throw InputError("descent: ts must be positive");
    const double t_end = setup.t_start + static_cast<double>(setup.steps) * setup.ts;
    const double g_max = gradient_bound(setup.frozen, t_end);
    if (!(g_max > 0.0)) throw InputError("descent: frozen parameters carry no sinusoidal energy");

    std::vector<DescentStep> out;
    out.reserve(setup.steps);
    double omega = setup.omega0;
    for (std::size_t k = 0; k < setup.steps; ++k) {
        DescentStep st;
        st.t = setup.t_start + static_cast<double>(k) * setup.ts;
        const double ref = eval_model(setup.frozen, setup.true_omega, st.t);
        st.omega = omega;
        st.error = eval_model(setup.frozen, omega, st.t) - ref;
        st.gradient = model_omega_gradient(setup.frozen, omega, st.t);
        const double g2 = setup.rule == EtaRule::bound ? g_max * g_max : std::max(st.gradient * st.gradient, 1e-12);
        st.eta = setup.beta / (setup.ts * g2);

        const double next = omega - setup.ts * st.eta * st.error * st.gradient;
        const double e_next = eval_model(setup.frozen, next, st.t) - ref;
        st.dj = 0.5 * (e_next * e_next - st.error * st.error);
        const double x = setup.ts * st.eta * st.gradient * st.gradient;
        st.dj_linear = -0.5 * x * (2.0 - x) * st.error * st.error;
        out.push_back(st);
        omega = next;
    }
    return out;
}

}  // namespace admfreq
