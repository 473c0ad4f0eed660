#pragma once

#include <string>
#include <vector>

#include "admfreq/keyvalue.hpp"

namespace admfreq {

enum class ObsFilter { identity, lowpass };

struct EstimatorConfig {
    int n = 7;
    double f0_hz = 50.0;
    double ts_s = 1.0 / 1200.0;
    std::vector<double> gamma_c;
    std::vector<double> gamma_s;
    double gamma_dc = 2.5;
    double gamma_dc1 = 0.1;
    double beta_omega = 0.02866;
    double eta_opt = 1100.0;
    double eta_band = 0.05;
    ObsFilter obs_filter = ObsFilter::identity;
    double obs_cutoff_hz = 500.0;
    int rocof_smooth_window = 120;
    int report_every = 12;
    double t_reset_s = 10.0;
    // Cap on the time multiplier of the frequency gradient; <= 0 uses t_anchor as is.
    double grad_horizon_s = 0.25;

    /// Tuned defaults for harmonic order n.
    static EstimatorConfig defaults(int n = 7);

    /// Throws InputError on any violated invariant.
    void validate() const;

    // Resize the gain vectors to n, filling new slots with default gains.
    void resize_gains(int new_n);
};

double default_gain(int harmonic);

/// Set one config key from text. Unknown keys throw InputError.
void set_config_value(EstimatorConfig& cfg, const std::string& key, const std::string& value);
void set_config_value(EstimatorConfig& cfg, const std::string& key, double value);

EstimatorConfig parse_config(const KeyValueFile& kv);
EstimatorConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
EstimatorConfig load_config(const std::string& path);

std::string config_to_text(const EstimatorConfig& cfg);
void save_config(const EstimatorConfig& cfg, const std::string& path);

}  // namespace admfreq
