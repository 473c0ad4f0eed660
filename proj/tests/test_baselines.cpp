#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "admfreq/baselines.hpp"
#include "admfreq/error.hpp"
#include "admfreq/model.hpp"
#include "admfreq/signal.hpp"

using namespace admfreq;

namespace {

FreqSeries grid(double dt, std::size_t n, double (*f)(double)) {
    FreqSeries s;
    for (std::size_t k = 0; k < n; ++k) {
        s.t.push_back(static_cast<double>(k) * dt);
        s.f_hz.push_back(f(s.t.back()));
    }
    return s;
}

}  // namespace

TEST(RollingRocof, ConstantIsZero) {
    auto s = grid(0.01, 200, [](double) { return 50.0; });
    auto r = rolling_rocof(s, 0.1);
    ASSERT_FALSE(r.f_hz.empty());
    for (double v : r.f_hz) EXPECT_EQ(v, 0.0);
}

TEST(RollingRocof, RiseAcrossWindow) {
    FreqSeries s{{0.0, 0.05, 0.1}, {50.0, 50.05, 50.1}};
    auto r = rolling_rocof(s, 0.1);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r.f_hz[0], 1.0, 1e-12);
    EXPECT_EQ(r.t[0], 0.1);
}

TEST(RollingRocof, ExactOnAffineProfilesForAnyWindow) {
    auto s = grid(0.01, 500, [](double t) { return 50.0 + 1.0 * t; });
    for (double w : {0.02, 0.037, 0.1, 0.5, 2.33}) {
        auto r = rolling_rocof(s, w);
        ASSERT_FALSE(r.f_hz.empty());
        for (double v : r.f_hz) EXPECT_NEAR(v, 1.0, 1e-9) << w;
        EXPECT_GE(r.t.front(), w - 1e-12);
    }
}

TEST(RollingRocof, WindowLongerThanSeriesIsEmpty) {
    auto s = grid(0.01, 10, [](double) { return 50.0; });
    EXPECT_TRUE(rolling_rocof(s, 1.0).f_hz.empty());
}

TEST(RollingRocof, RejectsSubTwoSampleWindow) {
    auto s = grid(0.01, 10, [](double) { return 50.0; });
    EXPECT_THROW(rolling_rocof(s, 0.015), InputError);
}

TEST(RollingRocof, LongerWindowsFlattenAStep) {
    auto s = grid(0.001, 3000, [](double t) { return t < 1.0 ? 50.0 : 49.9; });
    double prev = 1e9;
    for (double w : {0.04, 0.1, 0.5}) {
        auto r = rolling_rocof(s, w);
        double peak = 0.0;
        for (double v : r.f_hz) peak = std::max(peak, std::abs(v));
        EXPECT_LT(peak, prev) << w;
        prev = peak;
    }
}

TEST(TruthDerivatives, LinearPhase) {
    std::vector<double> t, ph;
    for (int k = 0; k < 1200; ++k) {
        t.push_back(k / 1200.0);
        ph.push_back(kTwoPi * 50.0 * t.back());
    }
    auto d = derivatives_from_phase(t, ph);
    for (std::size_t k = 0; k < t.size(); ++k) {
        EXPECT_NEAR(d.freq.f_hz[k], 50.0, 1e-9);
        EXPECT_NEAR(d.rocof.f_hz[k], 0.0, 1e-4);
    }
}

TEST(TruthDerivatives, QuadraticPhase) {
    std::vector<double> t, ph;
    for (int k = 0; k < 1200; ++k) {
        t.push_back(k / 1200.0);
        ph.push_back(kTwoPi * (50.0 * t.back() + 0.5 * t.back() * t.back()));
    }
    auto d = derivatives_from_phase(t, ph);
    for (std::size_t k = 2; k + 2 < t.size(); ++k) {
        EXPECT_NEAR(d.rocof.f_hz[k], 1.0, 1e-4);
        EXPECT_NEAR(d.freq.f_hz[k], 50.0 + t[k], 1e-9);
    }
}

TEST(TruthDerivatives, PassesThroughAnalyticColumns) {
    ScenarioSpec spec;
    spec.duration_s = 1.0;
    spec.base_freq_hz = 50.0;
    spec.profile.kind = ProfileKind::ramp;
    spec.profile.ramp_duration_s = 0.5;
    spec.profile.ramp_delta_hz = 0.5;
    auto [s, g] = synthesize(spec, 1200.0, 1);
    auto d = truth_derivatives(g);
    EXPECT_EQ(d.freq.f_hz, g.freq_hz);
    EXPECT_EQ(d.rocof.f_hz, g.rocof_hzps);
}

TEST(TruthDerivatives, EventPhaseMatchesAnalyticTruth) {
    ScenarioSpec spec;
    spec.duration_s = 4.0;
    spec.base_freq_hz = 50.0;
    spec.profile.kind = ProfileKind::event;
    spec.profile.start_s = 1.0;
    auto [s, g] = synthesize(spec, 1200.0, 1);
    GroundTruth phase_only;
    phase_only.t = g.t;
    phase_only.phase_rad = g.phase_rad;
    auto d = truth_derivatives(phase_only);
    for (std::size_t k = 2; k + 2 < g.size(); ++k) {
        ASSERT_NEAR(d.freq.f_hz[k], g.freq_hz[k], 1e-6) << g.t[k];
        ASSERT_NEAR(d.rocof.f_hz[k], g.rocof_hzps[k], 1e-6) << g.t[k];
    }
}
