#include <gtest/gtest.h>

#include <string>

#include "admfreq/error.hpp"
#include "admfreq/scenario.hpp"

using namespace admfreq;

namespace {

std::string message_of(const std::string& text) {
    try {
        parse_scenario_text(text, "s.txt");
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Scenario, ParsesIndexedSections) {
    auto spec = parse_scenario_text(R"(
        name = mix
        duration_s = 4
        base_freq = 60   # trailing comment
        freq_profile = ramp
        profile_start_s = 1
        ramp_duration_s = 0.5
        ramp_delta_hz = 0.25
        harmonic_1_order = 3
        harmonic_1_amp = 0.02
        harmonic_2_order = 5
        harmonic_2_amp = 0.01
        harmonic_2_phase = 0.5
        step_1_start_s = 2
        step_1_duration_s = 0.4
        step_1_amp_pu = 0.05
        step_1_phase_rad = 0.04
        dc_1_start_s = 1
        dc_1_amp_pu = 0.1
        dc_1_tau_s = 0.05
        noise_kind = colored
        noise_level = 0.02
        noise_seed = 9
    )");
    EXPECT_EQ(spec.name, "mix");
    EXPECT_EQ(spec.base_freq_hz, 60.0);
    EXPECT_EQ(spec.profile.kind, ProfileKind::ramp);
    ASSERT_EQ(spec.harmonics.size(), 2u);
    EXPECT_EQ(spec.harmonics[1].order, 5);
    EXPECT_EQ(spec.harmonics[1].phase_rad, 0.5);
    ASSERT_EQ(spec.steps.size(), 1u);
    EXPECT_EQ(spec.steps[0].phase_step_rad, 0.04);
    ASSERT_EQ(spec.dc_events.size(), 1u);
    EXPECT_EQ(spec.dc_events[0].tau_s, 0.05);
    EXPECT_EQ(spec.noise.kind, NoiseKind::colored);
    EXPECT_EQ(spec.noise.seed, 9u);
}

TEST(Scenario, MissingBaseFreqNamesKey) {
    auto msg = message_of("duration_s = 1\n");
    EXPECT_NE(msg.find("base_freq"), std::string::npos) << msg;
}

TEST(Scenario, ErrorsCarryLineNumbers) {
    auto msg = message_of("duration_s = 1\nbase_freq = 50\n\nbogus_key = 3\n");
    EXPECT_NE(msg.find("s.txt:4"), std::string::npos) << msg;
    msg = message_of("duration_s = 1\nbase_freq = fifty\n");
    EXPECT_NE(msg.find("s.txt:2"), std::string::npos) << msg;
    msg = message_of("duration_s = 1\nno equals sign\n");
    EXPECT_NE(msg.find("s.txt:2"), std::string::npos) << msg;
}

TEST(Scenario, RejectsOutOfRangeValues) {
    EXPECT_THROW(parse_scenario_text("duration_s = 1\nbase_freq = 50\nnoise_level = 0.3\n"), InputError);
    EXPECT_THROW(parse_scenario_text("duration_s = 1\nbase_freq = 50\nfreq_profile = wobble\n"), InputError);
    EXPECT_THROW(parse_scenario_text("duration_s = 1\nbase_freq = 50\nstep_1_start_s = 0.9\nstep_1_duration_s = 0.5\n"),
                 InputError);
    EXPECT_THROW(parse_scenario_text("duration_s = 1\nbase_freq = 50\nduration_s = 2\n"), InputError);
}

TEST(Scenario, BundledScenariosLoadAndSynthesize) {
    for (const char* name : {"case1", "case1b", "case2", "case2b", "case3", "clean"}) {
        auto spec = load_scenario(std::string(ADMFREQ_SCENARIO_DIR) + "/" + name + ".txt");
        EXPECT_EQ(spec.name, name);
        ASSERT_TRUE(spec.fs_hz.has_value());
        auto [s, t] = synthesize(spec, *spec.fs_hz, spec.noise.seed);
        EXPECT_EQ(s.size(), 12001u) << name;
    }
}
