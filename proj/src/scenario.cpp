#include "admfreq/scenario.hpp"

#include <map>
#include <regex>
#include <set>

#include "admfreq/error.hpp"

namespace admfreq {

namespace {

const std::set<std::string> kScalarKeys = {
    "name",           "duration_s",         "base_freq",        "amplitude",        "phase_rad",
    "fs",             "freq_profile",       "profile_start_s",  "ramp_duration_s",  "ramp_delta_hz",
    "event_deviation_hz", "event_peak_rocof_hzps", "noise_kind", "noise_level",     "noise_seed",
    "noise_pole",     "noise_impulse_rate", "noise_impulse_scale", "saturation_knee",
};

const std::map<std::string, std::set<std::string>> kIndexedFields = {
    {"harmonic", {"order", "amp", "phase"}},
    {"step", {"start_s", "duration_s", "amp_pu", "phase_rad"}},
    {"dc", {"start_s", "amp_pu", "tau_s"}},
};

}  // namespace

ScenarioSpec parse_scenario(const KeyValueFile& kv) {
    static const std::regex indexed(R"(^(harmonic|step|dc)_([0-9]+)_([a-z_]+)$)");
    std::map<int, Harmonic> harmonics;
    std::map<int, StepEvent> steps;
    std::map<int, DcEvent> dcs;

    for (const auto& key : kv.keys()) {
        if (kScalarKeys.count(key)) continue;
        std::smatch m;
        if (!std::regex_match(key, m, indexed) || !kIndexedFields.at(m[1]).count(m[3]))
            kv.fail(key, "unknown key '" + key + "'");
        const int idx = std::stoi(m[2]);
        const std::string group = m[1];
        const std::string field = m[3];
        const double v = *kv.number(key);
        if (group == "harmonic") {
            auto& h = harmonics[idx];
            if (field == "order") {
                h.order = static_cast<int>(*kv.integer(key));
            } else if (field == "amp") {
                h.rel_amp = v;
            } else {
                h.phase_rad = v;
            }
        } else if (group == "step") {
            auto& s = steps[idx];
            if (field == "start_s") s.start_s = v;
            else if (field == "duration_s") s.duration_s = v;
            else if (field == "amp_pu") s.amp_step_pu = v;
            else s.phase_step_rad = v;
        } else {
            auto& d = dcs[idx];
            if (field == "start_s") d.start_s = v;
            else if (field == "amp_pu") d.amp_pu = v;
            else d.tau_s = v;
        }
    }

    ScenarioSpec spec;
    spec.name = kv.text("name").value_or("");
    spec.duration_s = kv.required_number("duration_s");
    spec.base_freq_hz = kv.required_number("base_freq");
    spec.amplitude_pu = kv.number("amplitude").value_or(1.0);
    spec.phase_rad = kv.number("phase_rad").value_or(0.0);
    if (auto fs = kv.number("fs")) spec.fs_hz = *fs;

    const std::string profile = kv.text("freq_profile").value_or("constant");
    if (profile == "constant") spec.profile.kind = ProfileKind::constant;
    else if (profile == "ramp") spec.profile.kind = ProfileKind::ramp;
    else if (profile == "event") spec.profile.kind = ProfileKind::event;
    else kv.fail("freq_profile", "freq_profile must be constant, ramp or event");
    spec.profile.start_s = kv.number("profile_start_s").value_or(0.0);
    spec.profile.ramp_duration_s = kv.number("ramp_duration_s").value_or(0.0);
    spec.profile.ramp_delta_hz = kv.number("ramp_delta_hz").value_or(0.0);
    spec.profile.event_deviation_hz = kv.number("event_deviation_hz").value_or(-0.5);
    spec.profile.event_peak_rocof_hzps = kv.number("event_peak_rocof_hzps").value_or(1.0);
    if (spec.profile.kind == ProfileKind::ramp && !(spec.profile.ramp_duration_s > 0.0))
        kv.fail("ramp_duration_s", "ramp profile needs a positive ramp_duration_s");
    if (spec.profile.kind == ProfileKind::event && !(spec.profile.event_peak_rocof_hzps > 0.0))
        kv.fail("event_peak_rocof_hzps", "event_peak_rocof_hzps must be positive");

    const std::string noise = kv.text("noise_kind").value_or("gaussian");
    if (noise == "gaussian") spec.noise.kind = NoiseKind::gaussian;
    else if (noise == "colored") spec.noise.kind = NoiseKind::colored;
    else if (noise == "impulsive") spec.noise.kind = NoiseKind::impulsive;
    else kv.fail("noise_kind", "noise_kind must be gaussian, colored or impulsive");
    spec.noise.level = kv.number("noise_level").value_or(0.0);
    if (spec.noise.level < 0.0 || spec.noise.level > 0.2) kv.fail("noise_level", "noise_level must lie in [0, 0.2]");
    spec.noise.seed = static_cast<std::uint64_t>(kv.integer("noise_seed").value_or(1));
    spec.noise.pole = kv.number("noise_pole").value_or(0.9);
    spec.noise.impulse_rate = kv.number("noise_impulse_rate").value_or(0.001);
    spec.noise.impulse_scale = kv.number("noise_impulse_scale").value_or(10.0);
    spec.saturation_knee = kv.number("saturation_knee").value_or(0.0);

    for (auto& [_, h] : harmonics) spec.harmonics.push_back(h);
    for (auto& [_, s] : steps) spec.steps.push_back(s);
    for (auto& [_, d] : dcs) spec.dc_events.push_back(d);

    if (!(spec.duration_s > 0.0)) kv.fail("duration_s", "duration_s must be positive");
    if (!(spec.base_freq_hz > 0.0)) kv.fail("base_freq", "base_freq must be positive");
    for (const auto& s : spec.steps) {
        if (s.start_s < 0.0 || s.duration_s < 0.0 || s.start_s + s.duration_s > spec.duration_s + 1e-9)
            throw InputError(kv.source() + ": step window outside [0, duration_s]");
    }
    for (const auto& d : spec.dc_events) {
        if (d.amp_pu != 0.0 && !(d.tau_s > 0.0)) throw InputError(kv.source() + ": dc tau_s must be positive");
    }
    return spec;
}

ScenarioSpec parse_scenario_text(const std::string& text, const std::string& source) {
    return parse_scenario(KeyValueFile::parse(text, source));
}

ScenarioSpec load_scenario(const std::string& path) { return parse_scenario(KeyValueFile::load(path)); }

}  // namespace admfreq
