#include "admfreq/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "admfreq/error.hpp"
#include "admfreq/estimator.hpp"
#include "admfreq/format.hpp"
#include "admfreq/metrics.hpp"

namespace admfreq {

void SearchSpace::validate(bool require_positive) const {
    if (dims.empty()) throw InputError("search space has no dimensions");
    for (const auto& d : dims) {
        if (!(d.lower < d.upper)) throw InputError("search bounds for '" + d.key + "' need lower < upper");
        if ((require_positive || d.log_scale) && !(d.lower > 0.0))
            throw InputError("search bounds for '" + d.key + "' must be positive");
    }
}

namespace {

double to_search(const SearchDim& d, double v) { return d.log_scale ? std::log(v) : v; }
double from_search(const SearchDim& d, double u) { return d.log_scale ? std::exp(u) : u; }

void evaluate_all(const Objective& objective, const std::vector<std::vector<double>>& positions,
                  std::vector<double>& scores, int threads) {
    const std::size_t n = positions.size();
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < n; i += stride) {
            const double s = objective(positions[i]);
            scores[i] = std::isnan(s) ? std::numeric_limits<double>::infinity() : s;
        }
    };
    const auto t = static_cast<std::size_t>(std::clamp(threads, 1, static_cast<int>(n)));
    if (t == 1) {
        work(0, 1);
        return;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < t; ++w) pool.emplace_back(work, w, t);
}

}  // namespace

PsoResult pso_minimize(const SearchSpace& space, const Objective& objective, const PsoParams& pso) {
    space.validate(false);
    if (pso.swarm_size < 2) throw InputError("swarm size must be >= 2");
    if (pso.iterations < 1) throw InputError("iterations must be >= 1");
    const std::size_t dim = space.size();
    const auto swarm = static_cast<std::size_t>(pso.swarm_size);

    std::vector<double> lo(dim), hi(dim), vmax(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        lo[d] = to_search(space.dims[d], space.dims[d].lower);
        hi[d] = to_search(space.dims[d], space.dims[d].upper);
        vmax[d] = hi[d] - lo[d];
    }

    std::mt19937_64 rng(pso.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::vector<double>> x(swarm, std::vector<double>(dim));
    std::vector<std::vector<double>> v(swarm, std::vector<double>(dim));
    for (std::size_t p = 0; p < swarm; ++p) {
        for (std::size_t d = 0; d < dim; ++d) {
            x[p][d] = lo[d] + unit(rng) * (hi[d] - lo[d]);
            v[p][d] = (2.0 * unit(rng) - 1.0) * vmax[d];
        }
    }

    std::vector<std::vector<double>> real(swarm, std::vector<double>(dim));
    auto to_real = [&] {
        for (std::size_t p = 0; p < swarm; ++p)
            for (std::size_t d = 0; d < dim; ++d)
                real[p][d] = std::clamp(from_search(space.dims[d], x[p][d]), space.dims[d].lower, space.dims[d].upper);
    };

    PsoResult res;
    std::vector<double> scores(swarm);
    to_real();
    evaluate_all(objective, real, scores, pso.threads);
    res.evaluations += swarm;

    auto pbest = x;
    auto pbest_score = scores;
    std::size_t g = 0;
    for (std::size_t p = 1; p < swarm; ++p)
        if (pbest_score[p] < pbest_score[g]) g = p;
    std::vector<double> gbest = pbest[g];
    double gbest_score = pbest_score[g];

    for (int it = 0; it < pso.iterations; ++it) {
        for (std::size_t p = 0; p < swarm; ++p) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double r1 = unit(rng);
                const double r2 = unit(rng);
                double vel = pso.inertia * v[p][d] + pso.c1 * r1 * (pbest[p][d] - x[p][d]) +
                             pso.c2 * r2 * (gbest[d] - x[p][d]);
                vel = std::clamp(vel, -vmax[d], vmax[d]);
                double pos = x[p][d] + vel;
                if (pos < lo[d] || pos > hi[d]) {
                    pos = std::clamp(pos, lo[d], hi[d]);
                    vel = 0.0;
                }
                v[p][d] = vel;
                x[p][d] = pos;
            }
        }
        to_real();
        evaluate_all(objective, real, scores, pso.threads);
        res.evaluations += swarm;
        for (std::size_t p = 0; p < swarm; ++p) {
            if (scores[p] < pbest_score[p]) {
                pbest_score[p] = scores[p];
                pbest[p] = x[p];
            }
            if (scores[p] < gbest_score) {
                gbest_score = scores[p];
                gbest = x[p];
            }
        }
        res.history.push_back(gbest_score);
    }

    res.best_position.resize(dim);
    for (std::size_t d = 0; d < dim; ++d)
        res.best_position[d] = std::clamp(from_search(space.dims[d], gbest[d]), space.dims[d].lower, space.dims[d].upper);
    res.best_score = gbest_score;
    return res;
}

double ise_fitness(const EstimatorConfig& cfg, std::span<const Scenario> scenarios) {
    if (scenarios.empty()) throw InputError("ise_fitness needs at least one scenario");
    double score = 0.0;
    for (const auto& [stream, truth] : scenarios) {
        if (truth.size() != stream.size()) throw InputError("scenario truth and stream lengths differ");
        if (std::abs(stream.ts - cfg.ts_s) > 1e-9) throw InputError("scenario sampling interval does not match config");
        Estimator est(cfg, stream.t0);
        double s = 0.0;
        for (std::size_t k = 0; k < stream.size(); ++k) {
            est.step(stream.values[k]);
            if (est.diverged_at()) {
                s += kDivergencePenalty;
                break;
            }
            const double e = est.state().f_hz - truth.freq_hz[k];
            s += e * e * cfg.ts_s;
        }
        score += s;
    }
    return score;
}

EstimatorConfig apply_position(const EstimatorConfig& base, const SearchSpace& space, std::span<const double> x) {
    if (x.size() != space.size()) throw InputError("position size does not match search space");
    EstimatorConfig cfg = base;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const auto& key = space.dims[d].key;
        if (key == "gamma_fund") {
            cfg.gamma_c[0] = cfg.gamma_s[0] = x[d];
        } else if (key == "gamma_harm") {
            for (std::size_t i = 1; i < cfg.gamma_c.size(); ++i) cfg.gamma_c[i] = cfg.gamma_s[i] = x[d];
        } else {
            set_config_value(cfg, key, x[d]);
        }
    }
    return cfg;
}

TuneResult pso_tune(const SearchSpace& space, std::span<const Scenario> scenarios, const PsoParams& pso,
                    const EstimatorConfig& base) {
    space.validate(true);
    if (scenarios.empty()) throw InputError("tuning needs at least one scenario");
    base.validate();
    apply_position(base, space, std::vector<double>(space.size(), 1.0));

    auto objective = [&](std::span<const double> x) {
        EstimatorConfig cfg = apply_position(base, space, x);
        try {
            cfg.validate();
        } catch (const InputError&) {
            return kDivergencePenalty * static_cast<double>(scenarios.size());
        }
        return ise_fitness(cfg, scenarios);
    };
    TuneResult out;
    out.pso = pso_minimize(space, objective, pso);
    out.config = apply_position(base, space, out.pso.best_position);
    return out;
}

SearchDim parse_search_dim(const std::string& text) {
    auto eq = text.find('=');
    if (eq == std::string::npos) throw InputError("search dimension '" + text + "' must look like key=lower:upper[:log]");
    SearchDim d;
    d.key = std::string(trim(std::string_view(text).substr(0, eq)));
    std::string rest = text.substr(eq + 1);
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto c = rest.find(':', start);
        parts.push_back(rest.substr(start, c - start));
        if (c == std::string::npos) break;
        start = c + 1;
    }
    if (parts.size() < 2 || parts.size() > 3 || (parts.size() == 3 && trim(parts[2]) != "log"))
        throw InputError("search dimension '" + text + "' must look like key=lower:upper[:log]");
    d.lower = parse_double(parts[0]);
    d.upper = parse_double(parts[1]);
    d.log_scale = parts.size() == 3;
    return d;
}

}  // namespace admfreq
