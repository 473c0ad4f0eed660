#include "admfreq/signal.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "admfreq/error.hpp"
#include "admfreq/format.hpp"
#include "admfreq/model.hpp"

namespace admfreq {

namespace {

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(kTwoPi); }
double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Antiderivative of the normal cdf.
double norm_cdf_integral(double x) { return x * norm_cdf(x) + norm_pdf(x); }

struct EventShape {
    double w;
    double tc;
};

EventShape event_shape(const FrequencyProfile& p) {
    const double w = std::abs(p.event_deviation_hz) / (p.event_peak_rocof_hzps * std::sqrt(kTwoPi));
    return {w, p.start_s + 4.0 * w};
}

bool event_active(const FrequencyProfile& p) {
    return p.event_deviation_hz != 0.0 && p.event_peak_rocof_hzps > 0.0;
}

}  // namespace

double profile_frequency(const FrequencyProfile& p, double base_hz, double t) {
    switch (p.kind) {
    case ProfileKind::constant:
        return base_hz;
    case ProfileKind::ramp: {
        const double x = std::clamp((t - p.start_s) / p.ramp_duration_s, 0.0, 1.0);
        return base_hz + p.ramp_delta_hz * x;
    }
    case ProfileKind::event: {
        if (!event_active(p)) return base_hz;
        const auto [w, tc] = event_shape(p);
        return base_hz + p.event_deviation_hz * norm_cdf((t - tc) / w);
    }
    }
    return base_hz;
}

double profile_rocof(const FrequencyProfile& p, double, double t) {
    switch (p.kind) {
    case ProfileKind::constant:
        return 0.0;
    case ProfileKind::ramp:
        if (t >= p.start_s && t < p.start_s + p.ramp_duration_s) return p.ramp_delta_hz / p.ramp_duration_s;
        return 0.0;
    case ProfileKind::event: {
        if (!event_active(p)) return 0.0;
        const auto [w, tc] = event_shape(p);
        return p.event_deviation_hz * norm_pdf((t - tc) / w) / w;
    }
    }
    return 0.0;
}

double profile_phase(const FrequencyProfile& p, double base_hz, double t) {
    double cycles = base_hz * t;
    switch (p.kind) {
    case ProfileKind::constant:
        break;
    case ProfileKind::ramp: {
        const double d = p.ramp_duration_s;
        const double u = t - p.start_s;
        if (u <= 0.0) break;
        const double area = u <= d ? u * u / (2.0 * d) : d / 2.0 + (u - d);
        cycles += p.ramp_delta_hz * area;
        break;
    }
    case ProfileKind::event: {
        if (!event_active(p)) break;
        const auto [w, tc] = event_shape(p);
        const double x = (t - tc) / w;
        const double x0 = -tc / w;
        cycles += p.event_deviation_hz * w * (norm_cdf_integral(x) - norm_cdf_integral(x0));
        break;
    }
    }
    return kTwoPi * cycles;
}

double profile_max_frequency(const FrequencyProfile& p, double base_hz) {
    switch (p.kind) {
    case ProfileKind::ramp:
        return base_hz + std::max(0.0, p.ramp_delta_hz);
    case ProfileKind::event:
        return base_hz + std::max(0.0, p.event_deviation_hz);
    default:
        return base_hz;
    }
}

namespace {

void validate(const ScenarioSpec& spec, double fs) {
    if (!(spec.duration_s > 0.0)) throw InputError("duration must be positive");
    if (!(fs > 0.0)) throw InputError("sampling rate must be positive");
    if (spec.duration_s * fs < 2.0) throw InputError("duration * fs must be at least 2");
    if (!(spec.base_freq_hz > 0.0)) throw InputError("base_freq must be positive");
    if (spec.noise.level < 0.0 || spec.noise.level > 0.2) throw InputError("noise level must lie in [0, 0.2]");
    if (spec.profile.kind == ProfileKind::ramp && !(spec.profile.ramp_duration_s > 0.0))
        throw InputError("ramp duration must be positive");
    if (spec.profile.kind == ProfileKind::event && !(spec.profile.event_peak_rocof_hzps > 0.0))
        throw InputError("event peak rocof must be positive");
    const double fmax = profile_max_frequency(spec.profile, spec.base_freq_hz);
    int max_order = 1;
    for (const auto& h : spec.harmonics) {
        if (h.order < 1) throw InputError("harmonic order must be >= 1");
        max_order = std::max(max_order, h.order);
    }
    if (max_order * fmax >= fs / 2.0)
        throw InputError("harmonic order " + std::to_string(max_order) + " at " + format_double(fmax) +
                         " Hz violates Nyquist for fs " + format_double(fs) + " Hz");
    for (const auto& s : spec.steps) {
        if (s.start_s < 0.0 || s.duration_s < 0.0 || s.start_s + s.duration_s > spec.duration_s + 1e-9)
            throw InputError("step window outside [0, duration]");
    }
    for (const auto& d : spec.dc_events) {
        if (d.amp_pu != 0.0 && !(d.tau_s > 0.0)) throw InputError("dc tau must be positive");
    }
}

bool in_window(double t, double start, double end, double last_t, double ts) {
    const double eps = 1e-9 * ts;
    if (t < start - eps) return false;
    return t < end - eps || end >= last_t - eps;
}

}  // namespace

std::pair<SampleStream, GroundTruth> synthesize(const ScenarioSpec& spec, double fs, std::uint64_t seed) {
    validate(spec, fs);
    const auto n = static_cast<std::size_t>(std::floor(spec.duration_s * fs + 1e-9)) + 1;
    const double ts = 1.0 / fs;
    const double last_t = static_cast<double>(n - 1) * ts;

    SampleStream stream{0.0, ts, std::vector<double>(n)};
    GroundTruth truth;
    truth.t.resize(n);
    truth.freq_hz.resize(n);
    truth.rocof_hzps.resize(n);
    truth.amp_pu.resize(n);
    truth.phase_rad.resize(n);
    if (!spec.dc_events.empty()) {
        truth.dc_amp = spec.dc_events.front().amp_pu;
        truth.dc_tau = spec.dc_events.front().tau_s;
    }

    for (std::size_t k = 0; k < n; ++k) {
        const double t = stream.time(k);
        const double theta = profile_phase(spec.profile, spec.base_freq_hz, t) + spec.phase_rad;
        double amp = spec.amplitude_pu;
        double step_phase = 0.0;
        for (const auto& s : spec.steps) {
            if (in_window(t, s.start_s, s.start_s + s.duration_s, last_t, ts)) {
                amp *= 1.0 + s.amp_step_pu;
                step_phase += s.phase_step_rad;
            }
        }
        double v = amp * std::sin(theta + step_phase);
        for (const auto& h : spec.harmonics)
            v += h.rel_amp * spec.amplitude_pu * std::sin(h.order * theta + h.phase_rad);
        for (const auto& d : spec.dc_events) {
            if (d.amp_pu != 0.0 && t >= d.start_s - 1e-9 * ts)
                v += d.amp_pu * std::exp(-std::max(0.0, t - d.start_s) / d.tau_s);
        }
        if (spec.saturation_knee > 0.0) v = spec.saturation_knee * std::tanh(v / spec.saturation_knee);

        stream.values[k] = v;
        truth.t[k] = t;
        truth.freq_hz[k] = profile_frequency(spec.profile, spec.base_freq_hz, t);
        truth.rocof_hzps[k] = profile_rocof(spec.profile, spec.base_freq_hz, t);
        truth.amp_pu[k] = amp;
        truth.phase_rad[k] = theta + step_phase;
    }

    NoiseSpec noise = spec.noise;
    noise.seed = seed;
    return {add_noise(stream, noise, spec.amplitude_pu), std::move(truth)};
}

SampleStream add_noise(const SampleStream& stream, const NoiseSpec& noise, double fundamental_amp) {
    if (noise.level < 0.0) throw InputError("noise level must be non-negative");
    SampleStream out = stream;
    if (noise.level == 0.0) return out;
    const double sigma = noise.level * fundamental_amp;
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    switch (noise.kind) {
    case NoiseKind::gaussian:
        for (auto& v : out.values) v += sigma * normal(rng);
        break;
    case NoiseKind::colored: {
        if (!(std::abs(noise.pole) < 1.0)) throw InputError("colored-noise pole must satisfy |pole| < 1");
        const double gain = std::sqrt(1.0 - noise.pole * noise.pole);
        double c = normal(rng);
        for (std::size_t k = 0; k < out.values.size(); ++k) {
            if (k > 0) c = noise.pole * c + gain * normal(rng);
            out.values[k] += sigma * c;
        }
        break;
    }
    case NoiseKind::impulsive: {
        if (noise.impulse_rate < 0.0 || noise.impulse_rate > 1.0)
            throw InputError("impulse rate must lie in [0, 1]");
        std::bernoulli_distribution hit(noise.impulse_rate);
        std::bernoulli_distribution sign(0.5);
        for (auto& v : out.values) {
            if (hit(rng)) v += (sign(rng) ? 1.0 : -1.0) * noise.impulse_scale * sigma;
        }
        break;
    }
    }
    return out;
}

std::pair<SampleStream, GroundTruth> inject_step(const SampleStream& stream, const GroundTruth& truth,
                                                 const StepEvent& step) {
    if (truth.size() != stream.size()) throw InputError("truth and stream lengths differ");
    if (stream.values.empty()) throw InputError("empty stream");
    const double first = stream.t0;
    const double last = stream.time(stream.size() - 1);
    const double end = step.start_s + step.duration_s;
    const double eps = 1e-9 * stream.ts;
    if (step.duration_s < 0.0 || step.start_s < first - eps || end > last + eps)
        throw InputError("step window outside stream span");

    SampleStream s = stream;
    GroundTruth g = truth;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double t = s.time(k);
        if (!in_window(t, step.start_s, end, last, s.ts)) continue;
        const double amp = g.amp_pu[k];
        const double phase = g.phase_rad[k];
        const double new_amp = amp * (1.0 + step.amp_step_pu);
        const double new_phase = phase + step.phase_step_rad;
        s.values[k] += new_amp * std::sin(new_phase) - amp * std::sin(phase);
        g.amp_pu[k] = new_amp;
        g.phase_rad[k] = new_phase;
    }
    return {std::move(s), std::move(g)};
}

SampleStream inject_decaying_dc(const SampleStream& stream, const DcEvent& dc) {
    if (!(dc.tau_s > 0.0)) throw InputError("dc tau must be positive");
    SampleStream out = stream;
    if (dc.amp_pu == 0.0) return out;
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double t = out.time(k);
        if (t >= dc.start_s - 1e-9 * out.ts) out.values[k] += dc.amp_pu * std::exp(-std::max(0.0, t - dc.start_s) / dc.tau_s);
    }
    return out;
}

double phasor_sample(const PhasorFrame& frame, std::size_t k, double ts) {
    const double kt = static_cast<double>(k) * ts;
    return frame.amp_pu * std::sin(kTwoPi * kt * frame.freq_hz + kPi * kt * kt * frame.rocof_hzps + frame.phase_rad);
}

SampleStream phasor_to_waveform(std::span<const PhasorFrame> frames, double fs) {
    if (frames.empty()) throw InputError("empty phasor frame sequence");
    if (frames.size() < 2) throw InputError("at least two phasor frames are needed to infer the frame interval");
    if (!(fs > 0.0)) throw InputError("sampling rate must be positive");
    const double interval = frames[1].t - frames[0].t;
    if (!(interval > 0.0)) throw InputError("phasor frames must have increasing timestamps");
    for (std::size_t m = 1; m < frames.size(); ++m) {
        const double d = frames[m].t - frames[m - 1].t;
        if (std::abs(d - interval) > 1e-9 * std::max(1.0, interval)) throw InputError("phasor frames are not uniformly spaced");
        if (frames[m].amp_pu < 0.0) throw InputError("phasor amplitude must be non-negative");
    }
    const double ratio = interval * fs;
    const auto per_frame = static_cast<std::size_t>(std::llround(ratio));
    if (per_frame == 0 || std::abs(ratio - static_cast<double>(per_frame)) > 1e-6)
        throw InputError("fs must be an integer multiple of the frame rate");

    SampleStream out{frames[0].t, 1.0 / fs, {}};
    out.values.reserve(per_frame * frames.size());
    for (const auto& f : frames) {
        for (std::size_t k = 0; k < per_frame; ++k) out.values.push_back(phasor_sample(f, k, out.ts));
    }
    return out;
}

}  // namespace admfreq
