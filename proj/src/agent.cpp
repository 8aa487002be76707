#include "ebmc/agent.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace ebmc {

double EtaSchedule::at(int episode) const {
    return std::max(init * std::pow(rho, static_cast<double>(episode)), floor);
}

void validate(const AgentConfig& cfg) {
    if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) {
        throw std::invalid_argument("agent: gamma must be in (0,1)");
    }
    if (!(cfg.eta.init > 0.0 && cfg.eta.init <= 1.0)) {
        throw std::invalid_argument("agent: eta init must be in (0,1]");
    }
    if (!(cfg.eta.rho > 0.0 && cfg.eta.rho <= 1.0)) {
        throw std::invalid_argument("agent: eta rho must be in (0,1]");
    }
    if (!(cfg.eta.floor >= 0.0 && cfg.eta.floor <= cfg.eta.init)) {
        throw std::invalid_argument("agent: eta floor must be in [0, init]");
    }
    if (cfg.q_init.hi < cfg.q_init.lo) {
        throw std::invalid_argument("agent: q_init hi must be >= lo");
    }
}

std::vector<double> egreedy_probs(std::span<const double> q_row, double epsilon) {
    const int n = static_cast<int>(q_row.size());
    std::vector<double> probs(static_cast<std::size_t>(n), epsilon / n);
    probs[static_cast<std::size_t>(argmax_lowest(q_row))] += 1.0 - epsilon;
    return probs;
}

int sample_action(std::span<const double> q_row, double epsilon, Rng& rng) {
    const int n = static_cast<int>(q_row.size());
    if (rng.uniform01() < epsilon) return rng.uniform_int(n);
    return argmax_lowest(q_row);
}

double target_greedy(const QTable& q, const Transition& t, double gamma) {
    if (t.done) return t.r;
    const auto row = q.row(t.s_next);
    return t.r + gamma * row[static_cast<std::size_t>(argmax_lowest(row))];
}

double target_uniform(const QTable& q, const Transition& t, double gamma) {
    if (t.done) return t.r;
    const auto row = q.row(t.s_next);
    double sum = 0.0;
    for (double v : row) sum += v;
    return t.r + gamma * sum / static_cast<double>(row.size());
}

double target_sarsa(const QTable& q, const Transition& t, int next_action, double gamma) {
    if (t.done) return t.r;
    return t.r + gamma * q.at(t.s_next, next_action);
}

double target_expected_sarsa(const QTable& q, const Transition& t, double epsilon, double gamma) {
    if (t.done) return t.r;
    const auto row = q.row(t.s_next);
    const int n = static_cast<int>(row.size());
    const int greedy = argmax_lowest(row);
    const double p_other = epsilon / n;
    const double p_greedy = 1.0 - epsilon + p_other;
    double expectation = 0.0;
    for (int a = 0; a < n; ++a) {
        expectation += (a == greedy ? p_greedy : p_other) * row[static_cast<std::size_t>(a)];
    }
    return t.r + gamma * expectation;
}

EpisodeStats run_episode(Env& env, QTable& q, EpsilonStrategy& strategy, const AgentConfig& cfg,
                         int episode, Rng& env_rng, Rng& agent_rng, int max_steps) {
    if (max_steps < 1) throw std::invalid_argument("run_episode: max_steps must be >= 1");

    int s = env.reset(env_rng);
    const double eta = cfg.eta.at(episode);
    EpisodeStats stats;
    std::optional<int> carried_action;  // sarsa commits to the next action at update time

    for (int step = 0; step < max_steps; ++step) {
        const double eps = strategy.epsilon();
        const int a = carried_action ? *carried_action : sample_action(q.row(s), eps, agent_rng);
        carried_action.reset();

        const StepResult out = env.step(a, env_rng);
        const Transition tr{s, a, out.reward, out.state, out.done};

        const double g_greedy = target_greedy(q, tr, cfg.gamma);
        const double g_uniform = target_uniform(q, tr, cfg.gamma);
        const double g_expected = target_expected_sarsa(q, tr, eps, cfg.gamma);

        double bootstrap = g_expected;
        if (cfg.bootstrap == Bootstrap::q_learning) {
            bootstrap = g_greedy;
        } else if (cfg.bootstrap == Bootstrap::sarsa) {
            if (out.done) {
                bootstrap = tr.r;
            } else {
                const int a_next = sample_action(q.row(out.state), eps, agent_rng);
                carried_action = a_next;
                bootstrap = target_sarsa(q, tr, a_next, cfg.gamma);
            }
        }

        const double td_error = bootstrap - q.at(s, a);
        q.apply_td(s, a, bootstrap, eta);
        strategy.observe(g_greedy, g_uniform, g_expected, td_error);

        stats.undiscounted_return += out.reward;
        ++stats.steps;
        s = out.state;
        if (out.done) {
            stats.reached_terminal = true;
            break;
        }
    }
    stats.epsilon_end = strategy.epsilon();
    return stats;
}

EpisodeStats greedy_rollout(Env& env, const QTable& q, Rng& env_rng, int max_steps) {
    if (max_steps < 1) throw std::invalid_argument("greedy_rollout: max_steps must be >= 1");

    int s = env.reset(env_rng);
    EpisodeStats stats;
    for (int step = 0; step < max_steps; ++step) {
        const int a = argmax_lowest(q.row(s));
        const StepResult out = env.step(a, env_rng);
        stats.undiscounted_return += out.reward;
        ++stats.steps;
        s = out.state;
        if (out.done) {
            stats.reached_terminal = true;
            break;
        }
    }
    return stats;
}

}  // namespace ebmc
