#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "admfreq/config.hpp"
#include "admfreq/estimator.hpp"
#include "admfreq/metrics.hpp"
#include "admfreq/signal.hpp"

namespace admfreq {

MetricsReport evaluate(const EstimateSeries& series, const GroundTruth& truth, const AlignOptions& opt);

struct RunOutcome {
    SampleStream stream;
    GroundTruth truth;
    EstimateSeries series;
    MetricsReport report;
};

/// Synthesize at fs = 1 / cfg.ts_s, estimate and score.
RunOutcome run_scenario(const ScenarioSpec& spec, const EstimatorConfig& cfg, std::uint64_t seed,
                        const AlignOptions& opt);

std::vector<std::uint64_t> seed_list(std::uint64_t first, int count);

struct MonteCarloResult {
    std::vector<MetricsReport> reports;
    AggregateReport summary;
    std::vector<std::uint64_t> diverged_seeds;
};

/// Independent runs over seeds; threads > 1 fans out, results stay in seed order.
MonteCarloResult monte_carlo(const ScenarioSpec& spec, const EstimatorConfig& cfg, std::span<const std::uint64_t> seeds,
                             const AlignOptions& opt, int threads = 1);

struct SweepRow {
    double ratio = 1.0;
    AggregateReport summary;
    std::vector<std::uint64_t> diverged_seeds;
};

/// Fixed learning rate eta = ratio * eta_opt (band clamp off) per row.
std::vector<SweepRow> sweep_eta(const ScenarioSpec& spec, const EstimatorConfig& cfg, std::span<const double> ratios,
                                std::span<const std::uint64_t> seeds, const AlignOptions& opt, int threads = 1);

EstimatorConfig fixed_eta(const EstimatorConfig& cfg, double ratio);

/// Recovery check after a disturbance at onset.
struct StepRecovery {
    double pre_rmse = 0.0;       // FE RMSE over [onset - pre_s, onset)
    double rolling_rmse = 0.0;   // FE RMSE over window ending at onset + horizon_s
    double recovery_s = 0.0;     // first time after onset the rolling RMSE drops below 2x pre, -1 if never
    bool diverged = false;
};

StepRecovery step_recovery(const EstimateSeries& series, const GroundTruth& truth, double onset_s,
                           double horizon_s = 1.0, double pre_s = 2.0, double window_s = 0.2);

/// Same check on the ensemble: window RMSEs pool the squared FE of every run.
StepRecovery step_recovery(std::span<const RunOutcome> runs, double onset_s, double horizon_s = 1.0,
                           double pre_s = 2.0, double window_s = 0.2);

}  // namespace admfreq
