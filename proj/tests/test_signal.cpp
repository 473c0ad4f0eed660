#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "admfreq/error.hpp"
#include "admfreq/model.hpp"
#include "admfreq/signal.hpp"

using namespace admfreq;

namespace {

ScenarioSpec tone(double duration = 1.0) {
    ScenarioSpec s;
    s.duration_s = duration;
    s.base_freq_hz = 50.0;
    return s;
}

ScenarioSpec event_spec() {
    ScenarioSpec s = tone(10.0);
    s.profile.kind = ProfileKind::event;
    s.profile.start_s = 1.0;
    s.profile.event_deviation_hz = -0.5;
    s.profile.event_peak_rocof_hzps = 1.0;
    return s;
}

double stddev(const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::vector<double> diff(const SampleStream& a, const SampleStream& b) {
    std::vector<double> d(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) d[k] = a.values[k] - b.values[k];
    return d;
}

}  // namespace

TEST(Synthesize, QuarterCycleSampleIsPeak) {
    auto [s, t] = synthesize(tone(), 1200.0, 1);
    EXPECT_DOUBLE_EQ(s.time(6), 0.005);
    EXPECT_NEAR(s.values[6], 1.0, 1e-15);
}

TEST(Synthesize, NoiseFreeIgnoresSeed) {
    auto a = synthesize(tone(), 1200.0, 1).first;
    auto b = synthesize(tone(), 1200.0, 99).first;
    EXPECT_EQ(a.values, b.values);
}

TEST(Synthesize, RowCountCoversBothEnds) {
    auto [s, t] = synthesize(tone(10.0), 1200.0, 1);
    EXPECT_EQ(s.size(), 12001u);
    EXPECT_EQ(t.size(), 12001u);
}

TEST(Synthesize, RampTruthHasConstantRocof) {
    ScenarioSpec spec = tone(2.0);
    spec.profile.kind = ProfileKind::ramp;
    spec.profile.start_s = 0.5;
    spec.profile.ramp_duration_s = 0.5;
    spec.profile.ramp_delta_hz = 0.5;
    auto [s, t] = synthesize(spec, 1200.0, 1);
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t.t[k] > 0.5 && t.t[k] < 1.0) EXPECT_DOUBLE_EQ(t.rocof_hzps[k], 1.0);
        if (t.t[k] > 1.0) EXPECT_DOUBLE_EQ(t.freq_hz[k], 50.5);
        if (t.t[k] < 0.5) EXPECT_DOUBLE_EQ(t.freq_hz[k], 50.0);
    }
}

TEST(Synthesize, RocofIsDerivativeOfFrequency) {
    auto spec = event_spec();
    const double h = 1e-3;
    for (double t = 0.05; t < 10.0; t += 0.0137) {
        auto f = [&](double x) { return profile_frequency(spec.profile, 50.0, x); };
        const double d1 = (f(t + h) - f(t - h)) / (2 * h);
        const double d2 = (f(t + h / 2) - f(t - h / 2)) / h;
        const double richardson = (4 * d2 - d1) / 3;
        EXPECT_NEAR(profile_rocof(spec.profile, 50.0, t), richardson, 1e-9) << "t = " << t;
    }
}

TEST(Synthesize, PhaseIsIntegralOfFrequency) {
    auto spec = event_spec();
    const int n = 200000;
    const double T = 4.0;
    const double h = T / n;
    double integral = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = i * h;
        integral += h / 6 *
                    (profile_frequency(spec.profile, 50.0, a) + 4 * profile_frequency(spec.profile, 50.0, a + h / 2) +
                     profile_frequency(spec.profile, 50.0, a + h));
    }
    EXPECT_NEAR(profile_phase(spec.profile, 50.0, T), kTwoPi * integral, 1e-8);
}

TEST(Synthesize, EventPeaksMatchParameters) {
    auto [s, t] = synthesize(event_spec(), 1200.0, 1);
    const double min_f = *std::min_element(t.freq_hz.begin(), t.freq_hz.end());
    const double min_r = *std::min_element(t.rocof_hzps.begin(), t.rocof_hzps.end());
    EXPECT_NEAR(min_f, 49.5, 1e-6);
    EXPECT_NEAR(min_r, -1.0, 1e-4);
    EXPECT_DOUBLE_EQ(t.freq_hz.front(), 50.0);
}

TEST(Synthesize, RejectsNyquistViolation) {
    ScenarioSpec spec = tone();
    spec.harmonics.push_back({13, 0.01, 0.0});
    EXPECT_THROW(synthesize(spec, 1200.0, 1), InputError);
    spec.harmonics.back().order = 11;
    EXPECT_NO_THROW(synthesize(spec, 1200.0, 1));
}

TEST(Synthesize, RejectsNonPositiveDuration) {
    ScenarioSpec spec = tone(0.0);
    EXPECT_THROW(synthesize(spec, 1200.0, 1), InputError);
    spec.duration_s = -1.0;
    EXPECT_THROW(synthesize(spec, 1200.0, 1), InputError);
}

TEST(Synthesize, BitExactAcrossRuns) {
    auto spec = event_spec();
    spec.noise.level = 0.02;
    auto a = synthesize(spec, 1200.0, 7).first;
    auto b = synthesize(spec, 1200.0, 7).first;
    EXPECT_EQ(std::memcmp(a.values.data(), b.values.data(), a.size() * sizeof(double)), 0);
}

TEST(Synthesize, HarmonicsAddAtMultipleOfPhase) {
    ScenarioSpec spec = tone();
    spec.harmonics.push_back({3, 0.1, 0.3});
    auto [s, t] = synthesize(spec, 1200.0, 1);
    for (std::size_t k = 0; k < s.size(); k += 37) {
        const double th = kTwoPi * 50.0 * s.time(k);
        EXPECT_NEAR(s.values[k], std::sin(th) + 0.1 * std::sin(3 * th + 0.3), 1e-12);
    }
}

TEST(Synthesize, SaturationStaysBelowKnee) {
    ScenarioSpec spec = tone();
    spec.amplitude_pu = 2.0;
    spec.saturation_knee = 1.0;
    auto [s, t] = synthesize(spec, 1200.0, 1);
    for (double v : s.values) EXPECT_LT(std::abs(v), 1.0);
    EXPECT_NEAR(s.values[6], std::tanh(2.0), 1e-12);
}

TEST(AddNoise, ZeroLevelIsIdentity) {
    auto [s, t] = synthesize(tone(), 1200.0, 1);
    NoiseSpec n;
    n.level = 0.0;
    EXPECT_EQ(add_noise(s, n).values, s.values);
}

TEST(AddNoise, GaussianStandardDeviation) {
    auto [s, t] = synthesize(tone(10.0), 1200.0, 1);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        NoiseSpec n{NoiseKind::gaussian, 0.02, seed};
        auto noisy = add_noise(s, n);
        const double sd = stddev(diff(noisy, s));
        EXPECT_GE(sd, 0.018);
        EXPECT_LE(sd, 0.022);
    }
}

TEST(AddNoise, ColoredIsCorrelatedAndVarianceMatched) {
    auto [s, t] = synthesize(tone(10.0), 1200.0, 1);
    NoiseSpec n{NoiseKind::colored, 0.02, 3};
    auto d = diff(add_noise(s, n), s);
    double c0 = 0.0;
    double c1 = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        c0 += d[k] * d[k];
        if (k) c1 += d[k] * d[k - 1];
    }
    EXPECT_GT(c1 / c0, 0.5);
    EXPECT_NEAR(c1 / c0, 0.9, 0.03);
    EXPECT_NEAR(stddev(d), 0.02, 0.003);
}

TEST(AddNoise, ImpulsiveRateAndMagnitude) {
    auto [s, t] = synthesize(tone(10.0), 1200.0, 1);
    NoiseSpec n{NoiseKind::impulsive, 0.02, 5};
    n.impulse_rate = 0.01;
    auto d = diff(add_noise(s, n), s);
    std::size_t hits = 0;
    for (double x : d) {
        if (x != 0.0) {
            ++hits;
            EXPECT_NEAR(std::abs(x), 0.2, 1e-12);
        }
    }
    EXPECT_GT(hits, 80u);
    EXPECT_LT(hits, 170u);
}

TEST(AddNoise, PreservesLengthAndTimestamps) {
    SampleStream s{0.25, 0.001, std::vector<double>(500, 0.5)};
    for (auto kind : {NoiseKind::gaussian, NoiseKind::colored, NoiseKind::impulsive}) {
        auto out = add_noise(s, {kind, 0.1, 2});
        EXPECT_EQ(out.size(), s.size());
        EXPECT_EQ(out.t0, s.t0);
        EXPECT_EQ(out.ts, s.ts);
    }
}

TEST(InjectStep, IdentityStepLeavesStream) {
    auto [s, t] = synthesize(tone(2.0), 1200.0, 1);
    auto [s2, t2] = inject_step(s, t, {0.5, 0.5, 0.0, 0.0});
    EXPECT_EQ(s2.values, s.values);
    EXPECT_EQ(t2.phase_rad, t.phase_rad);
}

TEST(InjectStep, ResynthesizesFundamentalInsideWindow) {
    auto [s, t] = synthesize(tone(8.0), 1200.0, 1);
    auto [s2, t2] = inject_step(s, t, {6.0, 0.4, 0.05, 0.04});
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double tk = s.time(k);
        const bool inside = tk >= 6.0 - 1e-12 && tk < 6.4 - 1e-12;
        const double want = inside ? 1.05 * std::sin(kTwoPi * 50 * tk + 0.04) : s.values[k];
        EXPECT_NEAR(s2.values[k], want, 1e-9) << tk;
        EXPECT_DOUBLE_EQ(t2.amp_pu[k], inside ? 1.05 : 1.0);
    }
}

TEST(InjectStep, MatchesSynthesizedStep) {
    ScenarioSpec spec = tone(8.0);
    auto [s, t] = synthesize(spec, 1200.0, 1);
    auto [s2, t2] = inject_step(s, t, {5.0, 3.0, 0.0, kPi / 8});
    spec.steps.push_back({5.0, 3.0, 0.0, kPi / 8});
    auto [s3, t3] = synthesize(spec, 1200.0, 1);
    for (std::size_t k = 0; k < s.size(); ++k) EXPECT_NEAR(s2.values[k], s3.values[k], 1e-12);
    EXPECT_NEAR(t3.phase_rad.back() - t.phase_rad.back(), kPi / 8, 1e-12);
}

TEST(InjectStep, RejectsWindowOutsideStream) {
    auto [s, t] = synthesize(tone(1.0), 1200.0, 1);
    EXPECT_THROW(inject_step(s, t, {0.8, 0.5, 0.05, 0.0}), InputError);
    EXPECT_THROW(inject_step(s, t, {-0.1, 0.2, 0.05, 0.0}), InputError);
}

TEST(InjectDecayingDc, ZeroAmplitudeIsIdentity) {
    SampleStream s{0.0, 0.001, std::vector<double>(100, 0.3)};
    EXPECT_EQ(inject_decaying_dc(s, {0.01, 0.0, 0.05}).values, s.values);
}

TEST(InjectDecayingDc, OffsetAtStartAndOneTimeConstant) {
    SampleStream s{0.0, 0.001, std::vector<double>(2000, 0.0)};
    auto out = inject_decaying_dc(s, {1.0, 0.1, 0.05});
    EXPECT_DOUBLE_EQ(out.values[999], 0.0);
    EXPECT_NEAR(out.values[1000], 0.1, 1e-15);
    EXPECT_NEAR(out.values[1050], 0.1 / std::exp(1.0), 1e-12);
    EXPECT_NEAR(out.values[1050], 0.03679, 1e-5);
}

TEST(InjectDecayingDc, RejectsNonPositiveTau) {
    SampleStream s{0.0, 0.001, std::vector<double>(10, 0.0)};
    EXPECT_THROW(inject_decaying_dc(s, {0.0, 0.1, 0.0}), InputError);
    EXPECT_THROW(inject_decaying_dc(s, {0.0, 0.1, -1.0}), InputError);
}

TEST(Phasor, SampleAtQuarterCycle) {
    EXPECT_NEAR(phasor_sample({0.0, 1.0, 50.0, 0.0, 0.0}, 5, 0.001), 1.0, 1e-15);
}

TEST(Phasor, ChirpTermEntersQuadratically) {
    const double v = phasor_sample({0.0, 2.0, 50.0, 10.0, 0.0}, 10, 0.001);
    EXPECT_NEAR(v, 2.0 * std::sin(1.001 * kPi), 1e-12);
    EXPECT_NEAR(v, -0.006283, 1e-6);
}

TEST(Phasor, ConstantPhasorsMatchDirectSynthesis) {
    std::vector<PhasorFrame> frames;
    for (int m = 0; m < 100; ++m) {
        const double t = m * 0.01;
        frames.push_back({t, 1.0, 50.0, 0.0, wrap_phase(kTwoPi * 50.0 * t)});
    }
    auto w = phasor_to_waveform(frames, 1200.0);
    auto [s, truth] = synthesize(tone(1.0), 1200.0, 1);
    ASSERT_EQ(w.size(), 1200u);
    for (std::size_t k = 0; k < w.size(); ++k) EXPECT_NEAR(w.values[k], s.values[k], 1e-9);
}

TEST(Phasor, RejectsBadFrames) {
    std::vector<PhasorFrame> none;
    EXPECT_THROW(phasor_to_waveform(none, 1200.0), InputError);
    std::vector<PhasorFrame> uneven{{0.0, 1, 50, 0, 0}, {0.01, 1, 50, 0, 0}, {0.025, 1, 50, 0, 0}};
    EXPECT_THROW(phasor_to_waveform(uneven, 1200.0), InputError);
    std::vector<PhasorFrame> frames{{0.0, 1, 50, 0, 0}, {0.01, 1, 50, 0, 0}};
    EXPECT_THROW(phasor_to_waveform(frames, 1150.0), InputError);
}

TEST(EvalModel, ZeroParameters) {
    EXPECT_EQ(eval_model(ParameterVector(3), 100 * kPi, 0.3), 0.0);
}

TEST(EvalModel, SineCoefficient) {
    ParameterVector p(1);
    p.a_c[0] = 1.0;
    EXPECT_NEAR(eval_model(p, 100 * kPi, 0.005), 1.0, 1e-15);
}

TEST(EvalModel, TaylorDcTerms) {
    ParameterVector p(2);
    p.a_dc = 0.2;
    p.a_dc1 = 0.1;
    EXPECT_NEAR(eval_model(p, 100 * kPi, 1.0), 0.1, 1e-15);
}

TEST(EvalModel, FlattenOrdering) {
    ParameterVector p(2);
    p.a_s = {1, 3};
    p.a_c = {2, 4};
    p.a_dc = 5;
    p.a_dc1 = 6;
    EXPECT_EQ(p.flatten(), (std::vector<double>{1, 2, 3, 4, 5, 6}));
}
