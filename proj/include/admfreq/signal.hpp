#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace admfreq {

struct SampleStream {
    double t0 = 0.0;
    double ts = 0.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double time(std::size_t k) const { return t0 + static_cast<double>(k) * ts; }
};

struct GroundTruth {
    std::vector<double> t;
    std::vector<double> freq_hz;
    std::vector<double> rocof_hzps;
    std::vector<double> amp_pu;
    std::vector<double> phase_rad;  // unwrapped fundamental phase
    double dc_amp = 0.0;
    double dc_tau = 0.0;

    std::size_t size() const { return t.size(); }
};

enum class ProfileKind { constant, ramp, event };

/// Frequency trajectory. The event is an erf-shaped excursion whose
/// RoCoF is a Gaussian pulse peaking at peak_rocof_hzps.
struct FrequencyProfile {
    ProfileKind kind = ProfileKind::constant;
    double start_s = 0.0;
    double ramp_duration_s = 0.0;
    double ramp_delta_hz = 0.0;
    double event_deviation_hz = -0.5;  // signed; negative is a frequency drop
    double event_peak_rocof_hzps = 1.0;
};

struct Harmonic {
    int order = 3;
    double rel_amp = 0.0;
    double phase_rad = 0.0;
};

enum class NoiseKind { gaussian, colored, impulsive };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    double level = 0.0;
    std::uint64_t seed = 1;
    double pole = 0.9;
    double impulse_rate = 0.001;
    double impulse_scale = 10.0;
};

struct StepEvent {
    double start_s = 0.0;
    double duration_s = 0.0;
    double amp_step_pu = 0.0;
    double phase_step_rad = 0.0;
};

struct DcEvent {
    double start_s = 0.0;
    double amp_pu = 0.0;
    double tau_s = 0.05;
};

struct ScenarioSpec {
    std::string name;
    double duration_s = 0.0;
    double base_freq_hz = 50.0;
    double amplitude_pu = 1.0;
    double phase_rad = 0.0;
    FrequencyProfile profile;
    std::vector<Harmonic> harmonics;
    NoiseSpec noise;
    std::vector<StepEvent> steps;
    std::vector<DcEvent> dc_events;
    double saturation_knee = 0.0;  // 0 disables the compressor
    std::optional<double> fs_hz;
};

struct PhasorFrame {
    double t = 0.0;
    double amp_pu = 0.0;
    double freq_hz = 0.0;
    double rocof_hzps = 0.0;
    double phase_rad = 0.0;
};

// Analytic profile evaluation.
double profile_frequency(const FrequencyProfile& p, double base_hz, double t);
double profile_rocof(const FrequencyProfile& p, double base_hz, double t);
double profile_phase(const FrequencyProfile& p, double base_hz, double t);  // 2pi * integral of f from 0
double profile_max_frequency(const FrequencyProfile& p, double base_hz);

std::pair<SampleStream, GroundTruth> synthesize(const ScenarioSpec& spec, double fs, std::uint64_t seed);

SampleStream add_noise(const SampleStream& stream, const NoiseSpec& noise, double fundamental_amp = 1.0);

// Steps need the fundamental's amplitude and phase track, so they act on the pair.
std::pair<SampleStream, GroundTruth> inject_step(const SampleStream& stream, const GroundTruth& truth,
                                                 const StepEvent& step);

SampleStream inject_decaying_dc(const SampleStream& stream, const DcEvent& dc);

double phasor_sample(const PhasorFrame& frame, std::size_t k, double ts);
SampleStream phasor_to_waveform(std::span<const PhasorFrame> frames, double fs);

}  // namespace admfreq
