#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ebmc/config.hpp"
#include "ebmc/env.hpp"

namespace ebmc {

// One row per (run, episode): what that episode's training looked like plus
// the greedy-policy test metric measured right after it.
struct MetricsRecord {
    int run;
    int episode;
    double train_return;
    int train_steps;
    double test_metric;
    double epsilon;

    bool operator==(const MetricsRecord&) const = default;
};

// Per-episode mean and standard error of the test metric across runs.
struct AggregateCurve {
    std::vector<double> mean;
    std::vector<double> std_error;  // sample std / sqrt(runs); 0 for a single run
    std::vector<int> count;

    std::size_t size() const { return mean.size(); }
};

struct NamedCurve {
    std::string name;
    AggregateCurve curve;
};

// Whether larger test-metric values mean better performance for this
// environment (steps-to-goal counts down, everything else counts up).
bool metric_higher_is_better(EnvKind kind);

std::unique_ptr<Env> make_env(const ExperimentConfig& cfg);

// Executes config.runs independent runs (each seeded base_seed + run and
// given its own RNG streams) and concatenates their records in run order.
// The result is independent of the parallelism degree.
std::vector<MetricsRecord> run_experiment(const ExperimentConfig& cfg, int parallelism = 1);

// Across-run mean and standard error per episode. Runs that stopped early
// carry their last observed test metric forward so curves stay aligned.
AggregateCurve aggregate(std::span<const MetricsRecord> records);

}  // namespace ebmc
