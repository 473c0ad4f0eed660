#include "admfreq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "admfreq/error.hpp"
#include "admfreq/format.hpp"

namespace admfreq {

namespace {

double interp(const std::vector<double>& t, const std::vector<double>& v, double x, std::size_t& hint) {
    while (hint + 1 < t.size() && t[hint + 1] <= x) ++hint;
    if (hint + 1 >= t.size() || t[hint] >= x) return v[hint];
    const double u = (x - t[hint]) / (t[hint + 1] - t[hint]);
    return v[hint] + u * (v[hint + 1] - v[hint]);
}

}  // namespace

std::vector<AlignedPair> align(const EstimateSeries& est, const GroundTruth& truth, const AlignOptions& opt) {
    if (opt.latency_s < 0.0) throw InputError("latency must be non-negative");
    if (truth.size() == 0 || est.records.empty()) throw InputError("no overlap between estimates and truth");
    const double t_first = est.records.front().t;
    const double lo = truth.t.front();
    const double hi = truth.t.back();
    const double eps = 1e-9 * std::max(1.0, std::abs(hi));

    std::vector<AlignedPair> pairs;
    pairs.reserve(est.records.size());
    std::size_t hint = 0;
    std::size_t hint_r = 0;
    for (const auto& r : est.records) {
        if (r.t < t_first + opt.exclude_s - eps) continue;
        const double x = r.t - opt.latency_s;
        if (x < lo - eps || x > hi + eps) continue;
        const double xc = std::clamp(x, lo, hi);
        AlignedPair p;
        p.t = r.t;
        p.f_est = r.f_hz;
        p.rocof_est = r.rocof_hzps;
        p.f_true = interp(truth.t, truth.freq_hz, xc, hint);
        p.rocof_true = interp(truth.t, truth.rocof_hzps, xc, hint_r);
        pairs.push_back(p);
    }
    if (pairs.empty()) throw InputError("no overlap between estimates and truth");
    return pairs;
}

MetricsReport fe_re(std::span<const AlignedPair> pairs) {
    if (pairs.empty()) throw InputError("fe_re needs at least one pair");
    MetricsReport r;
    double sfe = 0.0;
    double sre = 0.0;
    for (const auto& p : pairs) {
        const double fe = std::abs(p.f_est - p.f_true);
        const double re = std::abs(p.rocof_est - p.rocof_true);
        r.max_fe = std::max(r.max_fe, fe);
        r.max_re = std::max(r.max_re, re);
        sfe += fe * fe;
        sre += re * re;
    }
    const auto n = static_cast<double>(pairs.size());
    r.rmse_fe = std::sqrt(sfe / n);
    r.rmse_re = std::sqrt(sre / n);
    r.n_samples = pairs.size();
    return r;
}

double reconstruction_error(const EstimateSeries& est, const SampleStream& measured, double t_begin, double t_end) {
    if (est.records.empty()) throw InputError("empty estimate series");
    for (const auto& r : est.records)
        if (std::isnan(r.phase_acc) || std::isnan(r.t_anchor))
            throw InputError("estimate series lacks the carrier phase track needed for reconstruction");
    std::size_t j = 0;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < measured.size(); ++k) {
        const double t = measured.time(k);
        if (t < t_begin || t > t_end) continue;
        while (j + 1 < est.records.size() && est.records[j + 1].t <= t) ++j;
        const auto& r = est.records[j];
        if (r.t > t + 1e-9 * measured.ts) throw InputError("estimate series does not cover the measured span");
        const double dt = t - r.t;
        const double phase = r.phase_acc + kTwoPi * r.f_hz * dt;
        double ahat = r.a_dc - r.a_dc1 * (r.t_anchor + dt);
        for (std::size_t i = 0; i < r.amps.size(); ++i)
            ahat += r.amps[i] * std::sin(static_cast<double>(i + 1) * phase + r.phases[i]);
        const double m = measured.values[k];
        num += (m - ahat) * (m - ahat);
        den += m * m;
    }
    if (!(den > 0.0)) throw InputError("measured signal has zero energy over the evaluation span");
    return std::sqrt(num / den);
}

double integral_square_error(std::span<const double> f_est, std::span<const double> f_true, double ts) {
    if (f_est.size() != f_true.size()) throw InputError("ISE inputs differ in length");
    double s = 0.0;
    for (std::size_t k = 0; k < f_est.size(); ++k) {
        const double e = f_est[k] - f_true[k];
        s += e * e;
    }
    return s * ts;
}

AggregateReport aggregate(std::span<const MetricsReport> reports) {
    if (reports.empty()) throw InputError("nothing to aggregate");
    AggregateReport a;
    a.runs = reports.size();
    const auto n = static_cast<double>(reports.size());
    a.mean.latency_s = a.worst.latency_s = reports.front().latency_s;
    a.mean.exclude_s = a.worst.exclude_s = reports.front().exclude_s;
    for (const auto& r : reports) {
        a.mean.max_fe += r.max_fe / n;
        a.mean.rmse_fe += r.rmse_fe / n;
        a.mean.max_re += r.max_re / n;
        a.mean.rmse_re += r.rmse_re / n;
        a.mean.n_samples += r.n_samples;
        a.worst.max_fe = std::max(a.worst.max_fe, r.max_fe);
        a.worst.rmse_fe = std::max(a.worst.rmse_fe, r.rmse_fe);
        a.worst.max_re = std::max(a.worst.max_re, r.max_re);
        a.worst.rmse_re = std::max(a.worst.rmse_re, r.rmse_re);
        a.worst.n_samples = std::max(a.worst.n_samples, r.n_samples);
    }
    a.mean.n_samples /= reports.size();
    return a;
}

std::string format_report(const MetricsReport& r) {
    std::string out = fmt::format("latency {:.0f} ms, first {:.2f} s excluded, {} frames\n", r.latency_s * 1e3,
                                  r.exclude_s, r.n_samples);
    out += fmt::format("{:<18}{:>12.4f}\n", "Max (FE) (Hz)", r.max_fe);
    out += fmt::format("{:<18}{:>12.4f}\n", "RMSE (FE) (Hz)", r.rmse_fe);
    out += fmt::format("{:<18}{:>12.4f}\n", "Max (RE) (Hz/s)", r.max_re);
    out += fmt::format("{:<18}{:>12.4f}\n", "RMSE (RE) (Hz/s)", r.rmse_re);
    if (r.recon_error) out += fmt::format("{:<18}{:>12.4f}\n", "Recon error", *r.recon_error);
    return out;
}

std::string format_aggregate(const AggregateReport& a) {
    std::string out = fmt::format("latency {:.0f} ms, first {:.2f} s excluded, {} runs\n", a.mean.latency_s * 1e3,
                                  a.mean.exclude_s, a.runs);
    out += fmt::format("{:<18}{:>12}{:>12}\n", "", "mean", "worst");
    out += fmt::format("{:<18}{:>12.4f}{:>12.4f}\n", "Max (FE) (Hz)", a.mean.max_fe, a.worst.max_fe);
    out += fmt::format("{:<18}{:>12.4f}{:>12.4f}\n", "RMSE (FE) (Hz)", a.mean.rmse_fe, a.worst.rmse_fe);
    out += fmt::format("{:<18}{:>12.4f}{:>12.4f}\n", "Max (RE) (Hz/s)", a.mean.max_re, a.worst.max_re);
    out += fmt::format("{:<18}{:>12.4f}{:>12.4f}\n", "RMSE (RE) (Hz/s)", a.mean.rmse_re, a.worst.rmse_re);
    return out;
}

void write_report_csv(const std::string& path, const MetricsReport& r) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << "# latency_s = " << format_double(r.latency_s) << ", excluded_s = " << format_double(r.exclude_s)
        << ", frames = " << r.n_samples << '\n';
    out << "metric,value\n";
    out << "Max (FE) (Hz)," << format_double(r.max_fe) << '\n';
    out << "RMSE (FE) (Hz)," << format_double(r.rmse_fe) << '\n';
    out << "Max (RE) (Hz/s)," << format_double(r.max_re) << '\n';
    out << "RMSE (RE) (Hz/s)," << format_double(r.rmse_re) << '\n';
    if (r.recon_error) out << "Recon error," << format_double(*r.recon_error) << '\n';
}

void write_aggregate_csv(const std::string& path, const AggregateReport& a) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << "# latency_s = " << format_double(a.mean.latency_s) << ", excluded_s = " << format_double(a.mean.exclude_s)
        << ", runs = " << a.runs << '\n';
    out << "metric,mean,worst\n";
    out << "Max (FE) (Hz)," << format_double(a.mean.max_fe) << ',' << format_double(a.worst.max_fe) << '\n';
    out << "RMSE (FE) (Hz)," << format_double(a.mean.rmse_fe) << ',' << format_double(a.worst.rmse_fe) << '\n';
    out << "Max (RE) (Hz/s)," << format_double(a.mean.max_re) << ',' << format_double(a.worst.max_re) << '\n';
    out << "RMSE (RE) (Hz/s)," << format_double(a.mean.rmse_re) << ',' << format_double(a.worst.rmse_re) << '\n';
}

}  // namespace admfreq
