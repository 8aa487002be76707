#include "ebmc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "ebmc/agent.hpp"

namespace ebmc {

bool metric_higher_is_better(EnvKind kind) { return kind != EnvKind::gridworld; }

std::unique_ptr<Env> make_env(const ExperimentConfig& cfg) {
    switch (cfg.env) {
        case EnvKind::gridworld: return std::make_unique<GridWorld>(cfg.gridworld);
        case EnvKind::cartpole: return std::make_unique<CartPole>(cfg.cartpole);
        case EnvKind::supplychain: return std::make_unique<SupplyChain>(cfg.supplychain);
    }
    throw std::logic_error("make_env: unhandled environment kind");
}

namespace {

double test_metric_of(const ExperimentConfig& cfg, const EpisodeStats& stats) {
    // gridworld and cartpole curves count steps; supply-chain curves count return
    if (cfg.env == EnvKind::supplychain) return stats.undiscounted_return;
    return static_cast<double>(stats.steps);
}

double run_test_protocol(const ExperimentConfig& cfg, Env& env, const QTable& q, Rng& test_rng) {
    const int trials = cfg.test.kind == TestProtocol::Kind::averaged ? cfg.test.trials : 1;
    double total = 0.0;
    for (int i = 0; i < trials; ++i) {
        const EpisodeStats stats = greedy_rollout(env, q, test_rng, cfg.max_steps);
        total += test_metric_of(cfg, stats);
    }
    return total / trials;
}

bool metric_is_perfect(const ExperimentConfig& cfg, double metric) {
    if (!cfg.early_stop) return false;
    return metric_higher_is_better(cfg.env) ? metric >= cfg.early_stop->target
                                            : metric <= cfg.early_stop->target;
}

std::vector<MetricsRecord> execute_run(const ExperimentConfig& cfg, int run) {
    RunStreams streams = RunStreams::derive(cfg.base_seed + static_cast<std::uint64_t>(run));

    const auto env = make_env(cfg);
    QTable q = cfg.agent.q_init.hi > cfg.agent.q_init.lo
                   ? QTable::uniform_init(env->num_states(), env->num_actions(),
                                          cfg.agent.q_init.lo, cfg.agent.q_init.hi,
                                          streams.q_init)
                   : QTable(env->num_states(), env->num_actions());
    EpsilonStrategy strategy(cfg.strategy);

    std::vector<MetricsRecord> records;
    records.reserve(static_cast<std::size_t>(cfg.episodes));
    int perfect_streak = 0;

    for (int episode = 0; episode < cfg.episodes; ++episode) {
        strategy.begin_episode(episode);
        const EpisodeStats train = run_episode(*env, q, strategy, cfg.agent, episode,
                                               streams.env, streams.agent, cfg.max_steps);
        const double metric = run_test_protocol(cfg, *env, q, streams.test_env);

        records.push_back(MetricsRecord{run, episode, train.undiscounted_return, train.steps,
                                        metric, train.epsilon_end});

        if (cfg.early_stop) {
            perfect_streak = metric_is_perfect(cfg, metric) ? perfect_streak + 1 : 0;
            if (perfect_streak >= cfg.early_stop->consecutive_perfect) break;
        }
    }
    return records;
}

}  // namespace

std::vector<MetricsRecord> run_experiment(const ExperimentConfig& cfg, int parallelism) {
    if (parallelism < 1) throw std::invalid_argument("run_experiment: parallelism must be >= 1");

    std::vector<std::vector<MetricsRecord>> per_run(static_cast<std::size_t>(cfg.runs));

    const int workers = std::min(parallelism, cfg.runs);
    if (workers <= 1) {
        for (int run = 0; run < cfg.runs; ++run) {
            try {
                per_run[static_cast<std::size_t>(run)] = execute_run(cfg, run);
            } catch (const std::exception& e) {
                throw std::runtime_error(
                    "run with seed " +
                    std::to_string(cfg.base_seed + static_cast<std::uint64_t>(run)) +
                    " failed: " + e.what());
            }
        }
    } else {
        std::atomic<int> next{0};
        std::atomic<bool> failed{false};
        std::string failure;
        std::mutex failure_mutex;

        auto worker = [&] {
            for (;;) {
                const int run = next.fetch_add(1);
                if (run >= cfg.runs || failed.load()) return;
                try {
                    per_run[static_cast<std::size_t>(run)] = execute_run(cfg, run);
                } catch (const std::exception& e) {
                    const std::scoped_lock lock(failure_mutex);
                    failed.store(true);
                    if (failure.empty()) {
                        failure = "run with seed " +
                                  std::to_string(cfg.base_seed + static_cast<std::uint64_t>(run)) +
                                  " failed: " + e.what();
                    }
                    return;
                }
            }
        };

        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (failed.load()) throw std::runtime_error(failure);
    }

    std::vector<MetricsRecord> records;
    records.reserve(static_cast<std::size_t>(cfg.runs) * static_cast<std::size_t>(cfg.episodes));
    for (auto& chunk : per_run) {
        records.insert(records.end(), chunk.begin(), chunk.end());
    }
    return records;
}

AggregateCurve aggregate(std::span<const MetricsRecord> records) {
    AggregateCurve curve;
    if (records.empty()) return curve;

    int max_run = 0;
    int max_episode = 0;
    for (const auto& r : records) {
        max_run = std::max(max_run, r.run);
        max_episode = std::max(max_episode, r.episode);
    }
    const std::size_t runs = static_cast<std::size_t>(max_run) + 1;
    const std::size_t episodes = static_cast<std::size_t>(max_episode) + 1;

    // metric per (run, episode), with early-stopped runs carrying their last
    // observed test metric forward
    std::vector<std::vector<double>> metric(runs);
    std::vector<int> last_episode(runs, -1);
    for (auto& m : metric) m.assign(episodes, 0.0);
    for (const auto& r : records) {
        metric[static_cast<std::size_t>(r.run)][static_cast<std::size_t>(r.episode)] =
            r.test_metric;
        last_episode[static_cast<std::size_t>(r.run)] =
            std::max(last_episode[static_cast<std::size_t>(r.run)], r.episode);
    }
    for (std::size_t run = 0; run < runs; ++run) {
        if (last_episode[run] < 0) {
            throw std::invalid_argument("aggregate: run " + std::to_string(run) +
                                        " has no records");
        }
        for (std::size_t ep = static_cast<std::size_t>(last_episode[run]) + 1; ep < episodes; ++ep) {
            metric[run][ep] = metric[run][static_cast<std::size_t>(last_episode[run])];
        }
    }

    curve.mean.resize(episodes);
    curve.std_error.resize(episodes);
    curve.count.resize(episodes);
    for (std::size_t ep = 0; ep < episodes; ++ep) {
        double sum = 0.0;
        for (std::size_t run = 0; run < runs; ++run) sum += metric[run][ep];
        const double mean = sum / static_cast<double>(runs);
        double sq = 0.0;
        for (std::size_t run = 0; run < runs; ++run) {
            const double d = metric[run][ep] - mean;
            sq += d * d;
        }
        curve.mean[ep] = mean;
        curve.count[ep] = static_cast<int>(runs);
        curve.std_error[ep] =
            runs > 1 ? std::sqrt(sq / static_cast<double>(runs - 1)) /
                           std::sqrt(static_cast<double>(runs))
                     : 0.0;
    }
    return curve;
}

}  // namespace ebmc
