#pragma once

#include <cstddef>
#include <vector>

namespace admfreq {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Harmonic model parameters. Index i-1 holds harmonic i.
///
/// The modelled waveform is
///   sum_i a_c[i] sin(i phase) + a_s[i] cos(i phase) + a_dc - a_dc1 t
struct ParameterVector {
    std::vector<double> a_c;
    std::vector<double> a_s;
    double a_dc = 0.0;
    double a_dc1 = 0.0;

    ParameterVector() = default;
    explicit ParameterVector(int n) : a_c(static_cast<std::size_t>(n), 0.0), a_s(static_cast<std::size_t>(n), 0.0) {}

    int order() const { return static_cast<int>(a_c.size()); }

    // Flat layout [a_s1, a_c1, ..., a_sn, a_cn, a_dc, a_dc1], matching regressor().
    std::vector<double> flatten() const;
};

/// Model value at an explicit fundamental phase; dc_time drives the DC ramp term.
double eval_at_phase(const ParameterVector& theta, double phase, double dc_time);

/// Model value with phase = omega1 * t.
double eval_model(const ParameterVector& theta, double omega1, double t);

/// d(model)/d(omega1) at phase = omega1 * t.
double model_omega_gradient(const ParameterVector& theta, double omega1, double t);

/// Wrap to [0, 2pi).
double wrap_phase(double phase);

}  // namespace admfreq
