#include "admfreq/estimator.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "admfreq/error.hpp"

namespace admfreq {

EstimatorState init(const EstimatorConfig& cfg) {
    cfg.validate();
    EstimatorState s;
    s.theta = ParameterVector(cfg.n);
    s.f_hz = cfg.f0_hz;
    s.omega1 = kTwoPi * cfg.f0_hz;
    s.last_f = cfg.f0_hz;
    s.eta_k = cfg.eta_opt;
    s.rocof_buf.assign(static_cast<std::size_t>(cfg.rocof_smooth_window), 0.0);
    return s;
}

std::vector<double> regressor(const EstimatorState& state, const EstimatorConfig& cfg) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(2 * cfg.n + 2));
    for (int i = 1; i <= cfg.n; ++i) {
        out.push_back(std::cos(i * state.phase_acc));
        out.push_back(std::sin(i * state.phase_acc));
    }
    out.push_back(1.0);
    out.push_back(-state.t_anchor);
    return out;
}

double predict(const EstimatorState& state, const EstimatorConfig& cfg) {
    const auto s = regressor(state, cfg);
    const auto theta = state.theta.flatten();
    double v = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) v += theta[i] * s[i];
    return v;
}

double eta_raw(double gradient, const EstimatorConfig& cfg) {
    return cfg.beta_omega / (cfg.ts_s * std::max(gradient * gradient, kGradientFloor));
}

double adapt_eta(double gradient, const EstimatorConfig& cfg) {
    return std::clamp(eta_raw(gradient, cfg), (1.0 - cfg.eta_band) * cfg.eta_opt, (1.0 + cfg.eta_band) * cfg.eta_opt);
}

std::pair<double, double> amp_phase(double a_s, double a_c) {
    const double amp = std::hypot(a_s, a_c);
    if (amp == 0.0) return {0.0, 0.0};
    return {amp, std::atan2(a_s, a_c)};
}

Estimator::Estimator(EstimatorConfig cfg, double t0) : cfg_(std::move(cfg)), t0_(t0) {
    reset();
}

void Estimator::reset() {
    state_ = init(cfg_);
    trace_ = {};
    diverged_at_.reset();
    sin_.assign(static_cast<std::size_t>(cfg_.n), 0.0);
    cos_.assign(static_cast<std::size_t>(cfg_.n), 0.0);
    lp_alpha_ = cfg_.obs_filter == ObsFilter::lowpass ? std::exp(-kTwoPi * cfg_.obs_cutoff_hz * cfg_.ts_s) : 0.0;
}

double Estimator::smoothed_rocof() const {
    if (state_.rocof_count == 0) return 0.0;
    return state_.rocof_sum / static_cast<double>(state_.rocof_count);
}

std::optional<EstimateRecord> Estimator::step(double sample) {
    auto& s = state_;
    if (s.diverged) throw DivergedError(*diverged_at_);
    const int n = cfg_.n;
    const double ts = cfg_.ts_s;
    auto& a_c = s.theta.a_c;
    auto& a_s = s.theta.a_s;

    const double s1 = std::sin(s.phase_acc);
    const double c1 = std::cos(s.phase_acc);
    sin_[0] = s1;
    cos_[0] = c1;
    for (int i = 1; i < n; ++i) {
        sin_[i] = sin_[i - 1] * c1 + cos_[i - 1] * s1;
        cos_[i] = cos_[i - 1] * c1 - sin_[i - 1] * s1;
    }

    double ahat = s.theta.a_dc - s.theta.a_dc1 * s.t_anchor;
    for (int i = 0; i < n; ++i) ahat += a_c[i] * sin_[i] + a_s[i] * cos_[i];

    const double r = sample - ahat;
    if (cfg_.obs_filter == ObsFilter::lowpass) s.zfilt = lp_alpha_ * s.zfilt + (1.0 - lp_alpha_) * r;
    else s.zfilt = r;
    const double z = s.zfilt;

    const double tz = ts * z;
    for (int i = 0; i < n; ++i) {
        a_c[i] += tz * cfg_.gamma_c[i] * sin_[i];
        a_s[i] += tz * cfg_.gamma_s[i] * cos_[i];
    }
    s.theta.a_dc += tz * cfg_.gamma_dc;
    s.theta.a_dc1 -= s.t_anchor * tz * cfg_.gamma_dc1;

    const double t_grad = cfg_.grad_horizon_s > 0.0 ? std::min(s.t_elapsed, cfg_.grad_horizon_s) : s.t_anchor;
    double g = 0.0;
    for (int i = 0; i < n; ++i) g += (i + 1) * (a_c[i] * cos_[i] - a_s[i] * sin_[i]);
    g *= t_grad;

    const double eta = adapt_eta(g, cfg_);
    // Descent on J = E^2/2 with E = ahat - a = -z.
    const double rocof = eta * z * g / kTwoPi;
    const double f_before = s.f_hz;
    const double f_after = f_before + ts * rocof;

    trace_ = {ahat, z, g, eta, rocof, f_before, f_after};

    bool finite = std::isfinite(f_after) && std::isfinite(s.theta.a_dc) && std::isfinite(s.theta.a_dc1);
    for (int i = 0; i < n && finite; ++i) finite = std::isfinite(a_c[i]) && std::isfinite(a_s[i]);
    if (!finite || std::abs(f_after - cfg_.f0_hz) > cfg_.f0_hz / 2.0) {
        s.diverged = true;
        diverged_at_ = static_cast<std::size_t>(s.k);
        return std::nullopt;
    }

    s.last_f = f_before;
    s.f_hz = f_after;
    s.omega1 = kTwoPi * f_after;
    s.eta_k = eta;

    const std::size_t w = s.rocof_buf.size();
    if (s.rocof_count == w) s.rocof_sum -= s.rocof_buf[s.rocof_head];
    else ++s.rocof_count;
    s.rocof_buf[s.rocof_head] = rocof;
    s.rocof_sum += rocof;
    s.rocof_head = (s.rocof_head + 1) % w;
    if (s.rocof_head == 0) {
        double sum = 0.0;
        for (std::size_t i = 0; i < s.rocof_count; ++i) sum += s.rocof_buf[i];
        s.rocof_sum = sum;
    }

    std::optional<EstimateRecord> rec;
    if (s.k % static_cast<std::uint64_t>(cfg_.report_every) == 0)
        rec = make_record(t0_ + static_cast<double>(s.k) * ts);

    s.phase_acc += kTwoPi * f_after * ts;
    if (s.phase_acc >= kTwoPi) s.phase_acc -= kTwoPi;
    if (s.phase_acc < 0.0 || s.phase_acc >= kTwoPi) s.phase_acc = wrap_phase(s.phase_acc);

    ++s.k;
    s.t_elapsed = static_cast<double>(s.k) * ts;
    s.t_anchor += ts;
    if (s.t_anchor >= cfg_.t_reset_s - 0.5 * ts) {
        s.theta.a_dc -= s.theta.a_dc1 * s.t_anchor;
        s.t_anchor = 0.0;
    }
    return rec;
}

EstimateRecord Estimator::make_record(double t) const {
    EstimateRecord rec;
    rec.t = t;
    rec.f_hz = state_.f_hz;
    rec.rocof_hzps = smoothed_rocof();
    rec.residual = trace_.residual;
    rec.a_dc = state_.theta.a_dc;
    rec.a_dc1 = state_.theta.a_dc1;
    rec.amps.resize(static_cast<std::size_t>(cfg_.n));
    rec.phases.resize(static_cast<std::size_t>(cfg_.n));
    for (std::size_t i = 0; i < rec.amps.size(); ++i) {
        auto [amp, phase] = amp_phase(state_.theta.a_s[i], state_.theta.a_c[i]);
        rec.amps[i] = amp;
        rec.phases[i] = phase;
    }
    rec.phase_acc = state_.phase_acc;
    rec.t_anchor = state_.t_anchor;
    return rec;
}

EstimateSeries run(const SampleStream& stream, const EstimatorConfig& cfg) {
    cfg.validate();
    EstimateSeries series;
    series.n = cfg.n;
    series.report_interval_s = cfg.ts_s * cfg.report_every;
    if (stream.values.empty()) return series;
    if (std::abs(stream.ts - cfg.ts_s) > 1e-9)
        throw InputError("stream sampling interval does not match config ts_s");
    Estimator est(cfg, stream.t0);
    series.records.reserve(stream.size() / static_cast<std::size_t>(cfg.report_every) + 1);
    for (double v : stream.values) {
        auto rec = est.step(v);
        if (est.diverged_at()) {
            series.diverged_at = est.diverged_at();
            break;
        }
        if (rec) series.records.push_back(std::move(*rec));
    }
    return series;
}

PeGram pe_gram(double omega1, int n, double fs, bool normalized) {
    if (n < 1) throw InputError("pe_gram: n must be >= 1");
    if (!(omega1 > 0.0)) throw InputError("pe_gram: omega1 must be positive");
    if (!(fs > 2.0 * n * omega1 / kTwoPi)) throw InputError("pe_gram: fs below Nyquist for harmonic order n");
    const double period = kTwoPi / omega1;
    const auto samples = static_cast<int>(std::ceil(fs * period - 1e-9));
    const double h = period / samples;
    const int dim = 2 * n;

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd s(dim);
    for (int j = 0; j < samples; ++j) {
        const double t = j * h;
        for (int i = 1; i <= n; ++i) {
            s(2 * (i - 1)) = std::cos(i * omega1 * t);
            s(2 * (i - 1) + 1) = std::sin(i * omega1 * t);
        }
        m.noalias() += s * s.transpose();
    }
    m *= normalized ? 1.0 / samples : h;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
    PeGram out;
    out.dim = dim;
    out.matrix.resize(static_cast<std::size_t>(dim * dim));
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) out.matrix[static_cast<std::size_t>(r * dim + c)] = m(r, c);
    out.rho_min = eig.eigenvalues().minCoeff();
    out.rho_max = eig.eigenvalues().maxCoeff();
    return out;
}

EtaCalibration calibrate_eta(const SampleStream& stream, const EstimatorConfig& cfg, double settle_s) {
    if (std::abs(stream.ts - cfg.ts_s) > 1e-9)
        throw InputError("stream sampling interval does not match config ts_s");
    Estimator est(cfg, stream.t0);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < stream.size(); ++k) {
        est.step(stream.values[k]);
        if (est.diverged_at()) throw InputError("calibration run diverged");
        if (stream.time(k) - stream.t0 < settle_s) continue;
        sum += est.trace().gradient * est.trace().gradient;
        ++count;
    }
    if (count == 0) throw InputError("calibration stream shorter than the settle time");
    EtaCalibration c;
    c.mean_g2 = sum / static_cast<double>(count);
    c.eta_for_beta = cfg.beta_omega / (cfg.ts_s * c.mean_g2);
    c.beta_for_eta = cfg.eta_opt * cfg.ts_s * c.mean_g2;
    return c;
}

}  // namespace admfreq
