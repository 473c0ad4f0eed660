#include "admfreq/runner.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <tuple>

#include "admfreq/error.hpp"

namespace admfreq {

MetricsReport evaluate(const EstimateSeries& series, const GroundTruth& truth, const AlignOptions& opt) {
    auto pairs = align(series, truth, opt);
    auto r = fe_re(pairs);
    r.latency_s = opt.latency_s;
    r.exclude_s = opt.exclude_s;
    return r;
}

RunOutcome run_scenario(const ScenarioSpec& spec, const EstimatorConfig& cfg, std::uint64_t seed,
                        const AlignOptions& opt) {
    RunOutcome out;
    std::tie(out.stream, out.truth) = synthesize(spec, 1.0 / cfg.ts_s, seed);
    out.stream.ts = cfg.ts_s;
    out.series = run(out.stream, cfg);
    if (!out.series.records.empty()) out.report = evaluate(out.series, out.truth, opt);
    return out;
}

std::vector<std::uint64_t> seed_list(std::uint64_t first, int count) {
    std::vector<std::uint64_t> out;
    for (int i = 0; i < count; ++i) out.push_back(first + static_cast<std::uint64_t>(i));
    return out;
}

MonteCarloResult monte_carlo(const ScenarioSpec& spec, const EstimatorConfig& cfg, std::span<const std::uint64_t> seeds,
                             const AlignOptions& opt, int threads) {
    if (seeds.empty()) throw InputError("Monte Carlo run needs at least one seed");
    cfg.validate();
    const std::size_t n = seeds.size();
    std::vector<MetricsReport> reports(n);
    std::vector<char> diverged(n, 0);
    std::vector<std::string> errors(n);
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < n; i += stride) {
            try {
                auto o = run_scenario(spec, cfg, seeds[i], opt);
                reports[i] = o.report;
                diverged[i] = o.series.diverged_at.has_value();
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const auto t = static_cast<std::size_t>(std::clamp(threads, 1, static_cast<int>(n)));
    if (t == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < t; ++w) pool.emplace_back(work, w, t);
    }
    for (const auto& e : errors)
        if (!e.empty()) throw InputError(e);

    MonteCarloResult res;
    res.reports = std::move(reports);
    for (std::size_t i = 0; i < n; ++i)
        if (diverged[i]) res.diverged_seeds.push_back(seeds[i]);
    res.summary = aggregate(res.reports);
    return res;
}

EstimatorConfig fixed_eta(const EstimatorConfig& cfg, double ratio) {
    EstimatorConfig c = cfg;
    c.eta_opt = cfg.eta_opt * ratio;
    c.eta_band = 0.0;
    return c;
}

std::vector<SweepRow> sweep_eta(const ScenarioSpec& spec, const EstimatorConfig& cfg, std::span<const double> ratios,
                                std::span<const std::uint64_t> seeds, const AlignOptions& opt, int threads) {
    std::vector<SweepRow> rows;
    for (double r : ratios) {
        if (!(r >= 1.0)) throw InputError("sweep ratios must be >= 1");
        auto mc = monte_carlo(spec, fixed_eta(cfg, r), seeds, opt, threads);
        rows.push_back({r, mc.summary, mc.diverged_seeds});
    }
    return rows;
}

namespace {

struct FeTrack {
    std::vector<double> t;
    std::vector<double> fe;
};

FeTrack fe_track(const EstimateSeries& series, const GroundTruth& truth) {
    FeTrack out;
    std::size_t hint = 0;
    for (const auto& r : series.records) {
        while (hint + 1 < truth.size() && truth.t[hint + 1] <= r.t) ++hint;
        double f = truth.freq_hz[hint];
        if (hint + 1 < truth.size() && truth.t[hint] < r.t) {
            const double u = (r.t - truth.t[hint]) / (truth.t[hint + 1] - truth.t[hint]);
            f += u * (truth.freq_hz[hint + 1] - truth.freq_hz[hint]);
        }
        out.t.push_back(r.t);
        out.fe.push_back(r.f_hz - f);
    }
    return out;
}

StepRecovery recovery(std::span<const FeTrack> tracks, double onset_s, double horizon_s, double pre_s,
                      double window_s) {
    if (tracks.empty()) throw InputError("step recovery needs at least one run");
    auto rmse = [&](double a, double b) {
        double s = 0.0;
        std::size_t n = 0;
        for (const auto& tr : tracks) {
            for (std::size_t i = 0; i < tr.t.size(); ++i) {
                if (tr.t[i] >= a && tr.t[i] < b) {
                    s += tr.fe[i] * tr.fe[i];
                    ++n;
                }
            }
        }
        return n ? std::sqrt(s / static_cast<double>(n)) : std::nan("");
    };
    StepRecovery out;
    const double eps = 1e-9;
    out.pre_rmse = rmse(onset_s - pre_s, onset_s);
    out.rolling_rmse = rmse(onset_s + horizon_s - window_s + eps, onset_s + horizon_s + eps);
    out.recovery_s = -1.0;
    for (double t : tracks.front().t) {
        if (t < onset_s + window_s) continue;
        if (rmse(t - window_s + eps, t + eps) <= 2.0 * out.pre_rmse) {
            out.recovery_s = t - onset_s;
            break;
        }
    }
    return out;
}

}  // namespace

StepRecovery step_recovery(const EstimateSeries& series, const GroundTruth& truth, double onset_s, double horizon_s,
                           double pre_s, double window_s) {
    const FeTrack one[] = {fe_track(series, truth)};
    auto out = recovery(one, onset_s, horizon_s, pre_s, window_s);
    out.diverged = series.diverged_at.has_value();
    return out;
}

StepRecovery step_recovery(std::span<const RunOutcome> runs, double onset_s, double horizon_s, double pre_s,
                           double window_s) {
    std::vector<FeTrack> tracks;
    bool diverged = false;
    for (const auto& r : runs) {
        tracks.push_back(fe_track(r.series, r.truth));
        diverged = diverged || r.series.diverged_at.has_value();
    }
    auto out = recovery(tracks, onset_s, horizon_s, pre_s, window_s);
    out.diverged = diverged;
    return out;
}

}  // namespace admfreq
