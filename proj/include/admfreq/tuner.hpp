#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "admfreq/config.hpp"
#include "admfreq/signal.hpp"

namespace admfreq {

/// One search dimension. key names the config entry it drives; the
/// pseudo-keys gamma_fund and gamma_harm set the c and s gains of the
/// fundamental and of every higher harmonic together.
struct SearchDim {
    std::string key;
    double lower = 0.0;
    double upper = 1.0;
    bool log_scale = false;
};

struct SearchSpace {
    std::vector<SearchDim> dims;

    std::size_t size() const { return dims.size(); }
    void validate(bool require_positive = true) const;
};

struct PsoParams {
    int swarm_size = 30;
    int iterations = 50;
    double inertia = 0.7;
    double c1 = 1.5;
    double c2 = 1.5;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct PsoResult {
    std::vector<double> best_position;
    double best_score = 0.0;
    std::vector<double> history;  // best score after each iteration
    std::size_t evaluations = 0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Global-best PSO. Objective calls within an iteration may run on several
/// threads; results are merged by particle index.
PsoResult pso_minimize(const SearchSpace& space, const Objective& objective, const PsoParams& pso);

using Scenario = std::pair<SampleStream, GroundTruth>;

inline constexpr double kDivergencePenalty = 1e6;

/// Sum over scenarios of sum_k (f_k - f_true_k)^2 * ts, plus the penalty per diverged run.
double ise_fitness(const EstimatorConfig& cfg, std::span<const Scenario> scenarios);

/// Apply a search position to a config.
EstimatorConfig apply_position(const EstimatorConfig& base, const SearchSpace& space, std::span<const double> x);

struct TuneResult {
    EstimatorConfig config;
    PsoResult pso;
};

TuneResult pso_tune(const SearchSpace& space, std::span<const Scenario> scenarios, const PsoParams& pso,
                    const EstimatorConfig& base);

/// Parse "key=lower:upper[:log]".
SearchDim parse_search_dim(const std::string& text);

}  // namespace admfreq
