#pragma once

#include <span>
#include <vector>

#include "ebmc/env.hpp"
#include "ebmc/epsilon.hpp"
#include "ebmc/qtable.hpp"
#include "ebmc/rng.hpp"

namespace ebmc {

struct Transition {
    int s;
    int a;
    double r;
    int s_next;
    bool done;
};

enum class Bootstrap { q_learning, sarsa, expected_sarsa };

// eta(episode) = max(init * rho^episode, floor); rho = 1 gives a constant rate
struct EtaSchedule {
    double init = 0.7;
    double rho = 1.0;
    double floor = 0.0;

    double at(int episode) const;
};

struct QInit {
    double lo = 0.0;
    double hi = 0.0;  // lo == hi == 0 means zeros
};

struct AgentConfig {
    double gamma = 0.99;
    EtaSchedule eta;
    Bootstrap bootstrap = Bootstrap::expected_sarsa;
    QInit q_init;
};

void validate(const AgentConfig& cfg);

// Action distribution of the epsilon-greedy policy over one Q row: the greedy
// index gets 1 - eps + eps/|A|, everything else eps/|A|.
std::vector<double> egreedy_probs(std::span<const double> q_row, double epsilon);

// One draw from the epsilon-greedy policy.
int sample_action(std::span<const double> q_row, double epsilon, Rng& rng);

// Bootstrapped return targets. All of them reduce to the immediate reward on
// a terminal transition.
double target_greedy(const QTable& q, const Transition& t, double gamma);
double target_uniform(const QTable& q, const Transition& t, double gamma);
double target_sarsa(const QTable& q, const Transition& t, int next_action, double gamma);
double target_expected_sarsa(const QTable& q, const Transition& t, double epsilon, double gamma);

struct EpisodeStats {
    double undiscounted_return = 0.0;
    int steps = 0;
    double epsilon_end = 0.0;
    bool reached_terminal = false;
};

// One training episode: per step, read epsilon from the strategy, act, compute
// the greedy/uniform/expected bootstraps from the pre-update Q table, apply
// the configured TD update, and feed the strategy. env_rng drives environment
// randomness, agent_rng drives action sampling.
EpisodeStats run_episode(Env& env, QTable& q, EpsilonStrategy& strategy, const AgentConfig& cfg,
                         int episode, Rng& env_rng, Rng& agent_rng, int max_steps);

// One evaluation episode under the greedy policy; no learning, no exploration.
EpisodeStats greedy_rollout(Env& env, const QTable& q, Rng& env_rng, int max_steps);

}  // namespace ebmc
