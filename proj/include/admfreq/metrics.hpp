#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "admfreq/config.hpp"
#include "admfreq/estimator.hpp"
#include "admfreq/signal.hpp"

namespace admfreq {

struct AlignedPair {
    double t = 0.0;
    double f_est = 0.0;
    double f_true = 0.0;
    double rocof_est = 0.0;
    double rocof_true = 0.0;
};

struct AlignOptions {
    double latency_s = 0.1;
    double exclude_s = 0.5;  // leading transient, relative to the first record
};

struct MetricsReport {
    double max_fe = 0.0;
    double rmse_fe = 0.0;
    double max_re = 0.0;
    double rmse_re = 0.0;
    double latency_s = 0.0;
    double exclude_s = 0.0;
    std::size_t n_samples = 0;
    std::optional<double> recon_error;
};

/// Pair each record at t with truth at t - latency (linear interpolation).
std::vector<AlignedPair> align(const EstimateSeries& est, const GroundTruth& truth, const AlignOptions& opt);

MetricsReport fe_re(std::span<const AlignedPair> pairs);

/// ||measured - ahat|| / ||measured|| over samples with t in [t_begin, t_end].
double reconstruction_error(const EstimateSeries& est, const SampleStream& measured, double t_begin, double t_end);

/// Integral of squared frequency error, sum((f_est - f_true)^2) * ts.
double integral_square_error(std::span<const double> f_est, std::span<const double> f_true, double ts);

struct AggregateReport {
    MetricsReport mean;
    MetricsReport worst;
    std::size_t runs = 0;
};

AggregateReport aggregate(std::span<const MetricsReport> reports);

/// Console table with the row labels used in the accuracy tables.
std::string format_report(const MetricsReport& r);
std::string format_aggregate(const AggregateReport& a);
void write_report_csv(const std::string& path, const MetricsReport& r);
void write_aggregate_csv(const std::string& path, const AggregateReport& a);

}  // namespace admfreq
