#pragma once

#include <span>
#include <vector>

#include "admfreq/signal.hpp"

namespace admfreq {

struct FreqSeries {
    std::vector<double> t;
    std::vector<double> f_hz;

    std::size_t size() const { return t.size(); }
};

/// RoCoF as (f(t) - f(t - window)) / window, timestamped at the trailing edge t.
/// f(t - window) is linearly interpolated. Empty when the window never fits.
FreqSeries rolling_rocof(const FreqSeries& series, double window_s);

struct TruthDerivatives {
    FreqSeries freq;
    FreqSeries rocof;
};

/// Frequency and RoCoF from a truth record: analytic columns pass through,
/// missing ones are rebuilt by centered differences.
TruthDerivatives truth_derivatives(const GroundTruth& truth);

/// Frequency and RoCoF from a phase track by centered differences of phase / 2pi.
TruthDerivatives derivatives_from_phase(std::span<const double> t, std::span<const double> phase_rad);

/// Centered first derivative on a uniform grid; 5-point interior, lower order at the ends.
std::vector<double> centered_derivative(std::span<const double> values, double h);

}  // namespace admfreq
