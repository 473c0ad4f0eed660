#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "admfreq/csv_io.hpp"
#include "admfreq/error.hpp"
#include "admfreq/format.hpp"
#include "admfreq/runner.hpp"
#include "admfreq/scenario.hpp"

using namespace admfreq;

TEST(FormatDouble, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(50.0), "50");
    EXPECT_EQ(format_double(-2.5e-7), "-2.5e-07");
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        EXPECT_EQ(parse_double(format_double(v)), v);
    }
}

TEST(ParseNumbers, RejectsJunk) {
    EXPECT_THROW(parse_double("1.5x"), InputError);
    EXPECT_THROW(parse_double(""), InputError);
    EXPECT_THROW(parse_int("3.5"), InputError);
    EXPECT_EQ(parse_int(" 12 "), 12);
}

TEST(Csv, ParseSkipsMetadata) {
    auto t = parse_csv("# note\nt,value\n0,1\n0.5,2\n", "x.csv");
    ASSERT_EQ(t.header.size(), 2u);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[1][1], 2.0);
    EXPECT_EQ(t.column("value"), 1u);
    EXPECT_THROW(t.column("nope"), InputError);
}

TEST(Csv, ErrorsNameTheLine) {
    try {
        parse_csv("t,value\n0,1\n0.5,abc\n", "bad.csv");
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("bad.csv:3"), std::string::npos) << e.what();
    }
    try {
        parse_csv("t,value\n0,1,2\n", "wide.csv");
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("wide.csv:2"), std::string::npos) << e.what();
    }
}

TEST(Csv, SamplesAndTruthRoundTripBitExact) {
    auto spec = load_scenario(std::string(ADMFREQ_SCENARIO_DIR) + "/case3.txt");
    spec.duration_s = 1.0;
    auto [s, g] = synthesize(spec, 1200.0, 5);
    auto s2 = samples_from_table(parse_csv(format_csv(samples_table(s)), "s"), "s");
    auto g2 = truth_from_table(parse_csv(format_csv(truth_table(g)), "g"), "g");
    EXPECT_EQ(s2.values, s.values);
    EXPECT_EQ(s2.t0, s.t0);
    EXPECT_NEAR(s2.ts, s.ts, 1e-15);
    EXPECT_EQ(g2.t, g.t);
    EXPECT_EQ(g2.freq_hz, g.freq_hz);
    EXPECT_EQ(g2.rocof_hzps, g.rocof_hzps);
    EXPECT_EQ(g2.phase_rad, g.phase_rad);
}

TEST(Csv, SamplesNeedUniformSpacing) {
    EXPECT_THROW(samples_from_table(parse_csv("t,value\n0,1\n0.1,2\n0.3,3\n", "u"), "u"), InputError);
}

TEST(Csv, EstimateHeaderAndRoundTrip) {
    auto spec = load_scenario(std::string(ADMFREQ_SCENARIO_DIR) + "/case1.txt");
    spec.duration_s = 1.0;
    auto cfg = EstimatorConfig::defaults(2);
    auto o = run_scenario(spec, cfg, 1, {});
    auto table = estimates_table(o.series);
    std::vector<std::string> want{"t", "f_hz", "rocof_hzps", "residual", "a_dc", "a_dc1", "amp_1", "phase_1", "amp_2", "phase_2"};
    EXPECT_EQ(table.header, want);
    auto back = estimates_from_table(parse_csv(format_csv(table), "e"), "e");
    ASSERT_EQ(back.records.size(), o.series.records.size());
    EXPECT_EQ(back.n, 2);
    for (std::size_t i = 0; i < back.records.size(); ++i) {
        EXPECT_EQ(back.records[i].f_hz, o.series.records[i].f_hz);
        EXPECT_EQ(back.records[i].rocof_hzps, o.series.records[i].rocof_hzps);
        EXPECT_EQ(back.records[i].amps, o.series.records[i].amps);
        EXPECT_TRUE(std::isnan(back.records[i].phase_acc));
    }
}

TEST(Csv, FileRoundTrip) {
    auto dir = std::filesystem::temp_directory_path() / "admfreq_io_test";
    std::filesystem::create_directories(dir);
    SampleStream s{0.0, 1.0 / 1200.0, {0.1, -0.2, 0.30000000000000004, 1e-300}};
    auto p = (dir / "s.csv").string();
    write_samples(p, s);
    EXPECT_EQ(read_samples(p).values, s.values);
    EXPECT_THROW(read_samples((dir / "missing.csv").string()), InputError);
    std::filesystem::remove_all(dir);
}
