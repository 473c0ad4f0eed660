#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "admfreq/config.hpp"
#include "admfreq/model.hpp"
#include "admfreq/signal.hpp"

namespace admfreq {

struct EstimatorState {
    ParameterVector theta;
    double f_hz = 0.0;
    double omega1 = 0.0;
    double phase_acc = 0.0;
    std::uint64_t k = 0;
    double t_anchor = 0.0;
    double t_elapsed = 0.0;
    double eta_k = 0.0;
    double zfilt = 0.0;
    double last_f = 0.0;
    bool diverged = false;

    // RoCoF smoothing window.
    std::vector<double> rocof_buf;
    std::size_t rocof_head = 0;
    std::size_t rocof_count = 0;
    double rocof_sum = 0.0;
};

/// Intermediate quantities of the most recent step.
struct StepTrace {
    double prediction = 0.0;
    double residual = 0.0;  // filtered observation residual
    double gradient = 0.0;
    double eta = 0.0;
    double rocof_raw = 0.0;
    double f_before = 0.0;
    double f_after = 0.0;
};

struct EstimateRecord {
    double t = 0.0;
    double f_hz = 0.0;
    double rocof_hzps = 0.0;
    double residual = 0.0;
    double a_dc = 0.0;
    double a_dc1 = 0.0;
    std::vector<double> amps;
    std::vector<double> phases;
    // Carrier phase and DC time origin at t; NaN when loaded from CSV.
    double phase_acc = std::numeric_limits<double>::quiet_NaN();
    double t_anchor = std::numeric_limits<double>::quiet_NaN();
};

struct EstimateSeries {
    int n = 0;
    double report_interval_s = 0.0;
    std::vector<EstimateRecord> records;
    std::optional<std::size_t> diverged_at;
};

EstimatorState init(const EstimatorConfig& cfg);
std::vector<double> regressor(const EstimatorState& state, const EstimatorConfig& cfg);
double predict(const EstimatorState& state, const EstimatorConfig& cfg);
double eta_raw(double gradient, const EstimatorConfig& cfg);
double adapt_eta(double gradient, const EstimatorConfig& cfg);
std::pair<double, double> amp_phase(double a_s, double a_c);

inline constexpr double kGradientFloor = 1e-6;

/// Streaming estimator. One instance per channel; not thread-safe.
class Estimator {
public:
    explicit Estimator(EstimatorConfig cfg, double t0 = 0.0);

    void reset();

    /// Process one sample. Returns a record every report_every samples.
    /// Throws DivergedError once the state has diverged.
    std::optional<EstimateRecord> step(double sample);

    const EstimatorConfig& config() const { return cfg_; }
    const EstimatorState& state() const { return state_; }
    EstimatorState& state() { return state_; }
    const StepTrace& trace() const { return trace_; }
    std::optional<std::size_t> diverged_at() const { return diverged_at_; }
    double smoothed_rocof() const;

private:
    EstimateRecord make_record(double t) const;

    EstimatorConfig cfg_;
    EstimatorState state_;
    StepTrace trace_;
    double t0_;
    double lp_alpha_ = 0.0;
    std::optional<std::size_t> diverged_at_;
    std::vector<double> sin_, cos_;
};

EstimateSeries run(const SampleStream& stream, const EstimatorConfig& cfg);

struct PeGram {
    int dim = 0;
    std::vector<double> matrix;  // row-major dim x dim
    double rho_min = 0.0;
    double rho_max = 0.0;

    double at(int r, int c) const { return matrix[static_cast<std::size_t>(r * dim + c)]; }
};

/// Regressor Gram matrix over one fundamental period, sinusoidal entries only.
/// normalized divides the period integral by its length.
PeGram pe_gram(double omega1, int n, double fs, bool normalized = true);

struct EtaCalibration {
    double mean_g2 = 0.0;
    double eta_for_beta = 0.0;   // beta_omega / (ts * mean_g2)
    double beta_for_eta = 0.0;   // eta_opt * ts * mean_g2
};

/// Mean-square frequency gradient over a calibration run, skipping the first settle_s.
EtaCalibration calibrate_eta(const SampleStream& stream, const EstimatorConfig& cfg, double settle_s = 0.5);

}  // namespace admfreq
