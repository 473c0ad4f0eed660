#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "admfreq/baselines.hpp"
#include "admfreq/config.hpp"
#include "admfreq/csv_io.hpp"
#include "admfreq/error.hpp"
#include "admfreq/estimator.hpp"
#include "admfreq/format.hpp"
#include "admfreq/metrics.hpp"
#include "admfreq/runner.hpp"
#include "admfreq/scenario.hpp"
#include "admfreq/tuner.hpp"

namespace fs = std::filesystem;

namespace admfreq::cli {

namespace {

struct Bounds {
    std::optional<double> max_fe, rmse_fe, max_re, rmse_re;

    void add(CLI::App* cmd) {
        cmd->add_option("--max-fe", max_fe, "Fail (exit 4) if Max (FE) exceeds this");
        cmd->add_option("--rmse-fe", rmse_fe, "Fail (exit 4) if RMSE (FE) exceeds this");
        cmd->add_option("--max-re", max_re, "Fail (exit 4) if Max (RE) exceeds this");
        cmd->add_option("--rmse-re", rmse_re, "Fail (exit 4) if RMSE (RE) exceeds this");
    }

    bool check(const MetricsReport& r) const {
        bool pass = true;
        auto one = [&](const char* label, const std::optional<double>& bound, double v) {
            if (!bound) return;
            const bool ok = v <= *bound;
            fmt::print("{:<18}{:>12.4f} <= {:<10.4f}{}\n", label, v, *bound, ok ? "pass" : "FAIL");
            pass = pass && ok;
        };
        one("Max (FE) (Hz)", max_fe, r.max_fe);
        one("RMSE (FE) (Hz)", rmse_fe, r.rmse_fe);
        one("Max (RE) (Hz/s)", max_re, r.max_re);
        one("RMSE (RE) (Hz/s)", rmse_re, r.rmse_re);
        return pass;
    }
};

struct ConfigArgs {
    std::string path;
    std::optional<int> n;
    std::optional<int> report_every;
    std::optional<double> eta_opt;
    std::optional<double> eta_band;

    void add(CLI::App* cmd) {
        cmd->add_option("--config", path, "Estimator config (key = value)");
        cmd->add_option("--n", n, "Harmonic order override");
        cmd->add_option("--report-every", report_every, "Samples between records");
        cmd->add_option("--eta-opt", eta_opt, "Learning-rate centre override");
        cmd->add_option("--eta-band", eta_band, "Learning-rate band override");
    }

    EstimatorConfig load() const {
        EstimatorConfig cfg = path.empty() ? EstimatorConfig::defaults() : load_config(path);
        if (n) set_config_value(cfg, "n", static_cast<double>(*n));
        if (report_every) cfg.report_every = *report_every;
        if (eta_opt) cfg.eta_opt = *eta_opt;
        if (eta_band) cfg.eta_band = *eta_band;
        cfg.validate();
        return cfg;
    }
};

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create directory " + dir + ": " + ec.message());
}

double scenario_fs(const ScenarioSpec& spec, const std::optional<double>& flag) {
    if (flag) return *flag;
    return spec.fs_hz.value_or(1200.0);
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        auto c = text.find(',', start);
        out.push_back(parse_double(text.substr(start, c - start)));
        if (c == std::string::npos) break;
        start = c + 1;
    }
    return out;
}

struct SynthArgs {
    std::string scenario;
    std::optional<double> fs;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
};

int cmd_synth(const SynthArgs& a) {
    auto spec = load_scenario(a.scenario);
    const double rate = scenario_fs(spec, a.fs);
    auto [stream, truth] = synthesize(spec, rate, a.seed.value_or(spec.noise.seed));
    ensure_dir(a.out);
    const auto samples = (fs::path(a.out) / "samples.csv").string();
    const auto truth_path = (fs::path(a.out) / "truth.csv").string();
    write_samples(samples, stream);
    write_truth(truth_path, truth);
    fmt::print("wrote {} samples at {} Hz to {} and {}\n", stream.size(), format_double(rate), samples, truth_path);
    return ok;
}

struct EstimateArgs {
    std::string samples;
    ConfigArgs config;
    std::string out = "estimates.csv";
    std::optional<double> baseline_window;
    std::string baseline_out = "baseline_rocof.csv";
};

int cmd_estimate(const EstimateArgs& a) {
    auto stream = read_samples(a.samples);
    EstimatorConfig cfg = a.config.load();
    if (stream.size() >= 2 && std::abs(stream.ts - cfg.ts_s) > 1e-9)
        throw InputError(fmt::format("{}: sample spacing {} s does not match config ts_s {} s", a.samples,
                                     format_double(stream.ts), format_double(cfg.ts_s)));
    stream.ts = cfg.ts_s;
    auto series = run(stream, cfg);
    write_estimates(a.out, series);
    fmt::print("{} records written to {}\n", series.records.size(), a.out);
    if (!series.records.empty()) {
        const auto& last = series.records.back();
        fmt::print("final t = {:.4f} s, f = {:.6f} Hz, rocof = {:.4f} Hz/s (boxcar over {} samples)\n", last.t,
                   last.f_hz, last.rocof_hzps, cfg.rocof_smooth_window);
    }
    if (a.baseline_window && !series.records.empty()) {
        FreqSeries f;
        for (const auto& r : series.records) {
            f.t.push_back(r.t);
            f.f_hz.push_back(r.f_hz);
        }
        auto roc = rolling_rocof(f, *a.baseline_window);
        CsvTable t{{"t", "rocof_hzps"}, {}};
        for (std::size_t i = 0; i < roc.size(); ++i) t.rows.push_back({roc.t[i], roc.f_hz[i]});
        write_csv(a.baseline_out, t,
                  {"rolling-window rocof over " + format_double(*a.baseline_window) + " s",
                   "timestamp = trailing edge of the window"});
        fmt::print("baseline rocof written to {}\n", a.baseline_out);
    }
    if (series.diverged_at) {
        const auto k = *series.diverged_at;
        fmt::print(stderr, "divergence at sample {} (t = {:.6f} s); output truncated\n", k, stream.time(k));
        return divergence;
    }
    return ok;
}

struct MetricsArgs {
    std::string estimates;
    std::string truth;
    std::string scenario;
    ConfigArgs config;
    double latency_ms = 100.0;
    double exclude_s = 0.5;
    int seeds = 1;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::string out;
    Bounds bounds;
};

int cmd_metrics(const MetricsArgs& a) {
    AlignOptions opt{a.latency_ms / 1000.0, a.exclude_s};
    if (!a.scenario.empty()) {
        auto spec = load_scenario(a.scenario);
        auto cfg = a.config.load();
        auto seeds = seed_list(a.seed.value_or(spec.noise.seed), a.seeds);
        auto mc = monte_carlo(spec, cfg, seeds, opt, a.threads);
        fmt::print("{}", format_aggregate(mc.summary));
        if (!a.out.empty()) write_aggregate_csv(a.out, mc.summary);
        if (!mc.diverged_seeds.empty()) {
            fmt::print(stderr, "{} of {} runs diverged\n", mc.diverged_seeds.size(), seeds.size());
            return divergence;
        }
        return a.bounds.check(mc.summary.mean) ? ok : bound_failure;
    }
    if (a.estimates.empty() || a.truth.empty()) throw InputError("metrics needs ESTIMATES and TRUTH, or --scenario");
    auto series = read_estimates(a.estimates);
    auto truth = read_truth(a.truth);
    auto report = evaluate(series, truth, opt);
    fmt::print("{}", format_report(report));
    if (!a.out.empty()) write_report_csv(a.out, report);
    return a.bounds.check(report) ? ok : bound_failure;
}

struct SweepArgs {
    std::string scenario;
    ConfigArgs config;
    std::string ratios = "1,1.02,1.04,1.06";
    double latency_ms = 100.0;
    double exclude_s = 0.5;
    int seeds = 1;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::string out;
};

int cmd_sweep_eta(const SweepArgs& a) {
    auto spec = load_scenario(a.scenario);
    auto cfg = a.config.load();
    auto ratios = parse_list(a.ratios);
    auto seeds = seed_list(a.seed.value_or(spec.noise.seed), a.seeds);
    auto rows = sweep_eta(spec, cfg, ratios, seeds, {a.latency_ms / 1000.0, a.exclude_s}, a.threads);

    CsvTable table{{"ratio", "eta", "rmse_fe_hz", "rmse_re_hzps", "max_fe_hz", "max_re_hzps", "diverged_runs"}, {}};
    fmt::print("{:>8}{:>12}{:>16}{:>18}{:>10}\n", "ratio", "eta", "RMSE (FE) (Hz)", "RMSE (RE) (Hz/s)", "diverged");
    for (const auto& r : rows) {
        const double eta = r.ratio * cfg.eta_opt;
        fmt::print("{:>8.3f}{:>12.1f}{:>16.5f}{:>18.5f}{:>10}\n", r.ratio, eta, r.summary.mean.rmse_fe,
                   r.summary.mean.rmse_re, r.diverged_seeds.size());
        table.rows.push_back({r.ratio, eta, r.summary.mean.rmse_fe, r.summary.mean.rmse_re, r.summary.mean.max_fe,
                              r.summary.mean.max_re, static_cast<double>(r.diverged_seeds.size())});
    }
    if (!a.out.empty()) write_csv(a.out, table, {"fixed learning rate per row, band clamp off"});
    return ok;
}

struct TuneArgs {
    std::vector<std::string> scenarios;
    ConfigArgs config;
    std::vector<std::string> dims;
    PsoParams pso;
    std::optional<double> fs;
    std::string out = "tuned.cfg";
    std::string history;
    int sphere = 0;
};

int cmd_tune(const TuneArgs& a) {
    if (a.sphere > 0) {
        SearchSpace space;
        for (int i = 0; i < a.sphere; ++i) space.dims.push_back({"x" + std::to_string(i), -5.0, 5.0, false});
        auto res = pso_minimize(
            space,
            [](std::span<const double> x) { return std::inner_product(x.begin(), x.end(), x.begin(), 0.0); },
            a.pso);
        const bool pass = res.best_score < 1e-3;
        fmt::print("sphere {}-D: best score {} after {} evaluations: {}\n", a.sphere, format_double(res.best_score),
                   res.evaluations, pass ? "pass" : "FAIL");
        return pass ? ok : bound_failure;
    }
    if (a.scenarios.empty()) throw InputError("tune needs at least one scenario");
    auto base = a.config.load();
    SearchSpace space;
    for (const auto& d : a.dims) space.dims.push_back(parse_search_dim(d));
    if (space.dims.empty()) {
        space.dims = {{"gamma_fund", 5.0, 100.0, true}, {"gamma_harm", 1.0, 50.0, true}, {"eta_opt", 200.0, 3000.0, true}};
    }

    std::vector<Scenario> battery;
    for (const auto& path : a.scenarios) {
        auto spec = load_scenario(path);
        const double rate = a.fs.value_or(1.0 / base.ts_s);
        if (std::abs(1.0 / rate - base.ts_s) > 1e-9) throw InputError("--fs does not match config ts_s");
        auto sc = synthesize(spec, rate, spec.noise.seed);
        sc.first.ts = base.ts_s;
        battery.push_back(std::move(sc));
    }
    auto res = pso_tune(space, battery, a.pso, base);
    save_config(res.config, a.out);
    fmt::print("best ISE {} after {} evaluations\n", format_double(res.pso.best_score), res.pso.evaluations);
    for (std::size_t d = 0; d < space.size(); ++d)
        fmt::print("  {} = {}\n", space.dims[d].key, format_double(res.pso.best_position[d]));
    fmt::print("gains written to {}\n", a.out);
    if (!a.history.empty()) {
        CsvTable h{{"iteration", "best_score"}, {}};
        for (std::size_t i = 0; i < res.pso.history.size(); ++i)
            h.rows.push_back({static_cast<double>(i + 1), res.pso.history[i]});
        write_csv(a.history, h);
    }
    return ok;
}

struct BenchArgs {
    ConfigArgs config;
    long long steps = 1000000;
    std::uint64_t seed = 1;
};

int cmd_bench(const BenchArgs& a) {
    auto cfg = a.config.load();
    if (a.steps < 1) throw InputError("--steps must be positive");
    ScenarioSpec spec;
    spec.duration_s = 10.0;
    spec.base_freq_hz = cfg.f0_hz;
    spec.noise.level = 0.02;
    auto [stream, truth] = synthesize(spec, 1.0 / cfg.ts_s, a.seed);

    using clock = std::chrono::steady_clock;
    std::vector<double> ns(static_cast<std::size_t>(a.steps));
    Estimator est(cfg);
    std::size_t k = 0;
    double sink = 0.0;
    const auto start = clock::now();
    for (auto& slot : ns) {
        const auto t0 = clock::now();
        est.step(stream.values[k]);
        const auto t1 = clock::now();
        slot = std::chrono::duration<double, std::nano>(t1 - t0).count();
        sink += est.state().f_hz;
        if (++k == stream.size()) {
            k = 0;
            est.reset();
        }
    }
    const double total = std::chrono::duration<double>(clock::now() - start).count();
    const double mean = std::accumulate(ns.begin(), ns.end(), 0.0) / static_cast<double>(ns.size());
    std::sort(ns.begin(), ns.end());
    const double median = ns[ns.size() / 2];
    const double p99 = ns[std::min(ns.size() - 1, static_cast<std::size_t>(0.99 * static_cast<double>(ns.size())))];
    fmt::print("n = {}, {} steps in {:.3f} s\n", cfg.n, a.steps, total);
    fmt::print("per step: mean {:.3f} us, median {:.3f} us, p99 {:.3f} us\n", mean / 1e3, median / 1e3, p99 / 1e3);
    fmt::print("real-time budget at {:.0f} Hz: {:.1f} us\n", 1.0 / cfg.ts_s, cfg.ts_s * 1e6);
    if (!std::isfinite(sink)) return divergence;
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive-observer frequency and RoCoF estimation"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* c_synth = app.add_subcommand("synth", "Synthesize samples.csv and truth.csv from a scenario file");
    c_synth->add_option("scenario", synth.scenario, "Scenario file")->required();
    c_synth->add_option("--fs", synth.fs, "Sampling rate in Hz");
    c_synth->add_option("--seed", synth.seed, "Noise seed");
    c_synth->add_option("--out", synth.out, "Output directory");

    EstimateArgs estimate;
    auto* c_est = app.add_subcommand("estimate", "Run the estimator over a sample CSV");
    c_est->add_option("samples", estimate.samples, "Sample CSV (t,value)")->required();
    estimate.config.add(c_est);
    c_est->add_option("--out", estimate.out, "Estimate CSV");
    c_est->add_option("--baseline-window", estimate.baseline_window, "Also write rolling-window RoCoF (s)");
    c_est->add_option("--baseline-out", estimate.baseline_out, "Rolling-window RoCoF CSV");

    MetricsArgs metrics;
    auto* c_met = app.add_subcommand("metrics", "FE/RE metrics from files or a Monte Carlo scenario run");
    c_met->add_option("estimates", metrics.estimates, "Estimate CSV");
    c_met->add_option("truth", metrics.truth, "Truth CSV");
    c_met->add_option("--scenario", metrics.scenario, "Synthesize and estimate this scenario instead");
    metrics.config.add(c_met);
    c_met->add_option("--latency-ms", metrics.latency_ms, "Latency alignment in ms");
    c_met->add_option("--exclude-s", metrics.exclude_s, "Leading transient to exclude in s");
    c_met->add_option("--seeds", metrics.seeds, "Monte Carlo runs")->check(CLI::PositiveNumber);
    c_met->add_option("--seed", metrics.seed, "First seed");
    c_met->add_option("--threads", metrics.threads, "Worker threads for Monte Carlo runs");
    c_met->add_option("--out", metrics.out, "Report CSV");
    metrics.bounds.add(c_met);

    SweepArgs sweep;
    auto* c_sweep = app.add_subcommand("sweep-eta", "RMSE versus fixed learning rate ratio");
    c_sweep->add_option("scenario", sweep.scenario, "Scenario file")->required();
    sweep.config.add(c_sweep);
    c_sweep->add_option("--ratios", sweep.ratios, "Comma-separated eta/eta_opt ratios");
    c_sweep->add_option("--latency-ms", sweep.latency_ms, "Latency alignment in ms");
    c_sweep->add_option("--exclude-s", sweep.exclude_s, "Leading transient to exclude in s");
    c_sweep->add_option("--seeds", sweep.seeds, "Monte Carlo runs per ratio")->check(CLI::PositiveNumber);
    c_sweep->add_option("--seed", sweep.seed, "First seed");
    c_sweep->add_option("--threads", sweep.threads, "Worker threads");
    c_sweep->add_option("--out", sweep.out, "Table CSV");

    TuneArgs tune;
    auto* c_tune = app.add_subcommand("tune", "PSO gain tuning against ISE over a scenario battery");
    c_tune->add_option("scenarios", tune.scenarios, "Scenario files");
    tune.config.add(c_tune);
    c_tune->add_option("--dim", tune.dims, "Search dimension key=lower:upper[:log] (repeatable)");
    c_tune->add_option("--swarm", tune.pso.swarm_size, "Swarm size");
    c_tune->add_option("--iterations", tune.pso.iterations, "Iterations");
    c_tune->add_option("--inertia", tune.pso.inertia, "Inertia weight");
    c_tune->add_option("--c1", tune.pso.c1, "Cognitive coefficient");
    c_tune->add_option("--c2", tune.pso.c2, "Social coefficient");
    c_tune->add_option("--seed", tune.pso.seed, "PSO seed");
    c_tune->add_option("--threads", tune.pso.threads, "Worker threads for fitness evaluation");
    c_tune->add_option("--fs", tune.fs, "Sampling rate in Hz");
    c_tune->add_option("--out", tune.out, "Tuned config file");
    c_tune->add_option("--history", tune.history, "History CSV (iteration,best_score)");
    c_tune->add_option("--sphere", tune.sphere, "Run the sphere-function self-test in this many dimensions");

    BenchArgs bench;
    auto* c_bench = app.add_subcommand("bench", "Per-step timing");
    bench.config.add(c_bench);
    c_bench->add_option("--steps", bench.steps, "Number of steps");
    c_bench->add_option("--seed", bench.seed, "Noise seed of the synthetic input");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return input_error;
    }

    try {
        if (c_synth->parsed()) return cmd_synth(synth);
        if (c_est->parsed()) return cmd_estimate(estimate);
        if (c_met->parsed()) return cmd_metrics(metrics);
        if (c_sweep->parsed()) return cmd_sweep_eta(sweep);
        if (c_tune->parsed()) return cmd_tune(tune);
        if (c_bench->parsed()) return cmd_bench(bench);
    } catch (const InputError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return input_error;
    } catch (const DivergedError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return divergence;
    }
    return input_error;
}

}  // namespace admfreq::cli
