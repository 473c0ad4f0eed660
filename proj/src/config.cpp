#include "admfreq/config.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "admfreq/error.hpp"
#include "admfreq/format.hpp"

namespace admfreq {

double default_gain(int harmonic) { return harmonic == 1 ? 25.0 : 5.0; }

EstimatorConfig EstimatorConfig::defaults(int n) {
    EstimatorConfig cfg;
    cfg.n = n;
    cfg.resize_gains(n);
    return cfg;
}

void EstimatorConfig::resize_gains(int new_n) {
    const auto old = static_cast<int>(gamma_c.size());
    const auto size = static_cast<std::size_t>(std::max(new_n, 0));
    gamma_c.resize(size);
    gamma_s.resize(size);
    for (int i = old; i < new_n; ++i) {
        gamma_c[static_cast<std::size_t>(i)] = default_gain(i + 1);
        gamma_s[static_cast<std::size_t>(i)] = default_gain(i + 1);
    }
}

void EstimatorConfig::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (n < 1) throw InputError("config: n must be >= 1");
    if (!positive(f0_hz)) throw InputError("config: f0_hz must be positive");
    if (!positive(ts_s)) throw InputError("config: ts_s must be positive");
    if (!(n * f0_hz < 1.0 / (2.0 * ts_s)))
        throw InputError("config: n * f0_hz must stay below the Nyquist rate 1/(2 ts_s)");
    if (gamma_c.size() != static_cast<std::size_t>(n) || gamma_s.size() != static_cast<std::size_t>(n))
        throw InputError("config: gain vectors must have n entries");
    for (int i = 0; i < n; ++i) {
        if (!positive(gamma_c[static_cast<std::size_t>(i)]))
            throw InputError("config: gamma_c_" + std::to_string(i + 1) + " must be positive");
        if (!positive(gamma_s[static_cast<std::size_t>(i)]))
            throw InputError("config: gamma_s_" + std::to_string(i + 1) + " must be positive");
    }
    if (!positive(gamma_dc)) throw InputError("config: gamma_dc must be positive");
    if (!positive(gamma_dc1)) throw InputError("config: gamma_dc1 must be positive");
    if (!(beta_omega > 0.0 && beta_omega < 2.0)) throw InputError("config: beta_omega must lie in (0, 2)");
    if (!positive(eta_opt)) throw InputError("config: eta_opt must be positive");
    if (!(eta_band >= 0.0 && eta_band <= 0.5)) throw InputError("config: eta_band must lie in [0, 0.5]");
    if (obs_filter == ObsFilter::lowpass && !(positive(obs_cutoff_hz) && obs_cutoff_hz < 0.5 / ts_s))
        throw InputError("config: obs_cutoff_hz must lie in (0, fs/2)");
    if (rocof_smooth_window < 1) throw InputError("config: rocof_smooth_window must be >= 1");
    if (report_every < 1) throw InputError("config: report_every must be >= 1");
    if (!positive(t_reset_s)) throw InputError("config: t_reset_s must be positive");
    if (!std::isfinite(grad_horizon_s)) throw InputError("config: grad_horizon_s must be finite");
}

namespace {

int to_int(const std::string& key, double v) {
    if (v != std::floor(v) || std::abs(v) > 1e9) throw InputError("config: " + key + " must be an integer");
    return static_cast<int>(v);
}

}  // namespace

void set_config_value(EstimatorConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "obs_filter") {
        if (value == "identity") cfg.obs_filter = ObsFilter::identity;
        else if (value == "lowpass") cfg.obs_filter = ObsFilter::lowpass;
        else throw InputError("config: obs_filter must be identity or lowpass");
        return;
    }
    set_config_value(cfg, key, parse_double(value));
}

void set_config_value(EstimatorConfig& cfg, const std::string& key, double v) {
    static const std::regex gain(R"(^gamma_([cs])_([0-9]+)$)");
    std::smatch m;
    if (std::regex_match(key, m, gain)) {
        const int i = std::stoi(m[2]);
        if (i < 1 || i > cfg.n) throw InputError("config: " + key + " exceeds harmonic order n");
        auto& vec = m[1] == "c" ? cfg.gamma_c : cfg.gamma_s;
        vec[static_cast<std::size_t>(i - 1)] = v;
    } else if (key == "n") {
        cfg.n = to_int(key, v);
        cfg.resize_gains(cfg.n);
    } else if (key == "f0_hz") {
        cfg.f0_hz = v;
    } else if (key == "ts_s") {
        cfg.ts_s = v;
    } else if (key == "gamma_dc") {
        cfg.gamma_dc = v;
    } else if (key == "gamma_dc1") {
        cfg.gamma_dc1 = v;
    } else if (key == "beta_omega") {
        cfg.beta_omega = v;
    } else if (key == "eta_opt") {
        cfg.eta_opt = v;
    } else if (key == "eta_band") {
        cfg.eta_band = v;
    } else if (key == "obs_cutoff_hz") {
        cfg.obs_cutoff_hz = v;
    } else if (key == "rocof_smooth_window") {
        cfg.rocof_smooth_window = to_int(key, v);
    } else if (key == "report_every") {
        cfg.report_every = to_int(key, v);
    } else if (key == "t_reset_s") {
        cfg.t_reset_s = v;
    } else if (key == "grad_horizon_s") {
        cfg.grad_horizon_s = v;
    } else {
        throw InputError("config: unknown key '" + key + "'");
    }
}

EstimatorConfig parse_config(const KeyValueFile& kv) {
    EstimatorConfig cfg = EstimatorConfig::defaults(7);
    if (kv.has("n")) {
        try {
            set_config_value(cfg, "n", *kv.text("n"));
        } catch (const InputError& e) {
            kv.fail("n", e.what());
        }
        if (cfg.n < 1) kv.fail("n", "config: n must be >= 1");
    }
    for (const auto& key : kv.keys()) {
        if (key == "n") continue;
        try {
            set_config_value(cfg, key, *kv.text(key));
        } catch (const InputError& e) {
            kv.fail(key, e.what());
        }
    }
    cfg.validate();
    return cfg;
}

EstimatorConfig parse_config_text(const std::string& text, const std::string& source) {
    return parse_config(KeyValueFile::parse(text, source));
}

EstimatorConfig load_config(const std::string& path) { return parse_config(KeyValueFile::load(path)); }

std::string config_to_text(const EstimatorConfig& cfg) {
    std::ostringstream out;
    auto put = [&](const std::string& k, double v) { out << k << " = " << format_double(v) << '\n'; };
    out << "n = " << cfg.n << '\n';
    put("f0_hz", cfg.f0_hz);
    put("ts_s", cfg.ts_s);
    for (int i = 0; i < cfg.n; ++i) {
        put("gamma_c_" + std::to_string(i + 1), cfg.gamma_c[static_cast<std::size_t>(i)]);
        put("gamma_s_" + std::to_string(i + 1), cfg.gamma_s[static_cast<std::size_t>(i)]);
    }
    put("gamma_dc", cfg.gamma_dc);
    put("gamma_dc1", cfg.gamma_dc1);
    put("beta_omega", cfg.beta_omega);
    put("eta_opt", cfg.eta_opt);
    put("eta_band", cfg.eta_band);
    out << "obs_filter = " << (cfg.obs_filter == ObsFilter::identity ? "identity" : "lowpass") << '\n';
    put("obs_cutoff_hz", cfg.obs_cutoff_hz);
    out << "rocof_smooth_window = " << cfg.rocof_smooth_window << '\n';
    out << "report_every = " << cfg.report_every << '\n';
    put("t_reset_s", cfg.t_reset_s);
    put("grad_horizon_s", cfg.grad_horizon_s);
    return out.str();
}

void save_config(const EstimatorConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << config_to_text(cfg);
    if (!out) throw InputError("write failed for " + path);
}

}  // namespace admfreq
