#include "admfreq/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "admfreq/error.hpp"
#include "admfreq/model.hpp"

namespace admfreq {

namespace {

void check_series(const FreqSeries& s) {
    if (s.t.size() != s.f_hz.size()) throw InputError("frequency series columns differ in length");
    for (std::size_t k = 1; k < s.t.size(); ++k)
        if (!(s.t[k] > s.t[k - 1])) throw InputError("frequency series timestamps must increase");
}

double uniform_step(std::span<const double> t) {
    if (t.size() < 2) throw InputError("need at least two samples for a derivative");
    const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t k = 1; k < t.size(); ++k)
        if (std::abs((t[k] - t[k - 1]) - h) > 1e-6 * h) throw InputError("derivatives need a uniform time grid");
    return h;
}

}  // namespace

FreqSeries rolling_rocof(const FreqSeries& series, double window_s) {
    check_series(series);
    FreqSeries out;
    if (series.size() < 2) return out;
    const double min_dt = (series.t.back() - series.t.front()) / static_cast<double>(series.size() - 1);
    if (!(window_s >= 2.0 * min_dt * (1.0 - 1e-9))) throw InputError("rolling window must span at least two samples");

    std::size_t lo = 0;
    for (std::size_t j = 0; j < series.size(); ++j) {
        const double target = series.t[j] - window_s;
        if (target < series.t.front() - 1e-9 * min_dt) continue;
        while (lo + 1 < series.size() && series.t[lo + 1] <= target) ++lo;
        double f_past = series.f_hz[lo];
        if (lo + 1 < series.size() && series.t[lo] < target) {
            const double u = (target - series.t[lo]) / (series.t[lo + 1] - series.t[lo]);
            f_past = series.f_hz[lo] + u * (series.f_hz[lo + 1] - series.f_hz[lo]);
        }
        out.t.push_back(series.t[j]);
        out.f_hz.push_back((series.f_hz[j] - f_past) / window_s);
    }
    return out;
}

std::vector<double> centered_derivative(std::span<const double> v, double h) {
    const std::size_t n = v.size();
    if (n < 2) throw InputError("need at least two samples for a derivative");
    std::vector<double> d(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (k >= 2 && k + 2 < n) {
            d[k] = (v[k - 2] - 8.0 * v[k - 1] + 8.0 * v[k + 1] - v[k + 2]) / (12.0 * h);
        } else if (k >= 1 && k + 1 < n) {
            d[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
        } else if (k == 0) {
            d[k] = (v[1] - v[0]) / h;
        } else {
            d[k] = (v[n - 1] - v[n - 2]) / h;
        }
    }
    return d;
}

TruthDerivatives derivatives_from_phase(std::span<const double> t, std::span<const double> phase_rad) {
    if (t.size() != phase_rad.size()) throw InputError("phase track and time grid differ in length");
    const double h = uniform_step(t);
    const double slope = (phase_rad.back() - phase_rad.front()) / (t.back() - t.front());
    std::vector<double> resid(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) resid[k] = (phase_rad[k] - phase_rad.front()) - slope * (t[k] - t.front());

    TruthDerivatives out;
    out.freq.t.assign(t.begin(), t.end());
    out.rocof.t.assign(t.begin(), t.end());
    auto dphi = centered_derivative(resid, h);
    out.freq.f_hz.resize(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) out.freq.f_hz[k] = (dphi[k] + slope) / kTwoPi;

    const std::size_t n = t.size();
    out.rocof.f_hz.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double d2;
        if (n >= 5 && k >= 2 && k + 2 < n) {
            d2 = (-resid[k - 2] + 16.0 * resid[k - 1] - 30.0 * resid[k] + 16.0 * resid[k + 1] - resid[k + 2]) /
                 (12.0 * h * h);
        } else if (n >= 3) {
            const std::size_t c = std::clamp<std::size_t>(k, 1, n - 2);
            d2 = (resid[c - 1] - 2.0 * resid[c] + resid[c + 1]) / (h * h);
        } else {
            d2 = 0.0;
        }
        out.rocof.f_hz[k] = d2 / kTwoPi;
    }
    return out;
}

TruthDerivatives truth_derivatives(const GroundTruth& truth) {
    if (truth.size() == 0) throw InputError("empty ground truth");
    const bool has_freq = truth.freq_hz.size() == truth.size();
    const bool has_rocof = truth.rocof_hzps.size() == truth.size();
    if (!has_freq) {
        if (truth.phase_rad.size() != truth.size()) throw InputError("ground truth has neither frequency nor phase");
        return derivatives_from_phase(truth.t, truth.phase_rad);
    }
    TruthDerivatives out;
    out.freq.t = truth.t;
    out.freq.f_hz = truth.freq_hz;
    out.rocof.t = truth.t;
    if (has_rocof) {
        out.rocof.f_hz = truth.rocof_hzps;
    } else {
        out.rocof.f_hz = centered_derivative(truth.freq_hz, uniform_step(truth.t));
    }
    return out;
}

}  // namespace admfreq
