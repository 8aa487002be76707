#pragma once

#include <utility>
#include <vector>

#include "ebmc/env.hpp"

namespace ebmc {

// Deterministic grid navigation with ordered sub-goals. The agent-visible
// state packs the position together with a bitmask of sub-goals collected so
// far: state = position * 2^k + flags. Moving off the grid leaves the
// position unchanged at a higher cost. The episode ends on the goal cell once
// every sub-goal has been collected in order.
struct GridWorldSpec {
    int width = 5;
    int height = 5;
    std::pair<int, int> start{0, 0};  // row, col
    std::pair<int, int> goal{4, 4};
    std::vector<std::pair<int, int>> subgoals{{2, 1}, {1, 3}};  // must be visited in this order
    double step_cost = -0.1;
    double invalid_cost = -0.2;

    int num_positions() const { return width * height; }
    int num_flag_sets() const { return 1 << static_cast<int>(subgoals.size()); }
    int num_states() const { return num_positions() * num_flag_sets(); }
};

void validate(const GridWorldSpec& spec);

// actions: 0 = up (row-1), 1 = down, 2 = left, 3 = right
inline constexpr int kGridWorldActions = 4;

int gridworld_encode(const GridWorldSpec& spec, int row, int col, unsigned flags);
struct GridCell {
    int row;
    int col;
    unsigned flags;
};
GridCell gridworld_decode(const GridWorldSpec& spec, int state);

// Pure transition on the encoded state.
StepResult gridworld_step(const GridWorldSpec& spec, int state, int action);

// Minimal number of steps from the start to task completion, by breadth-first
// search over the position-times-flags graph. Used as the optimality oracle
// for greedy-policy evaluation.
int bfs_optimal_steps(const GridWorldSpec& spec);

class GridWorld final : public Env {
public:
    explicit GridWorld(GridWorldSpec spec);

    int num_states() const override { return spec_.num_states(); }
    int num_actions() const override { return kGridWorldActions; }
    int reset(Rng& rng) override;
    StepResult step(int action, Rng& rng) override;

    const GridWorldSpec& spec() const { return spec_; }

private:
    GridWorldSpec spec_;
    int state_ = 0;
};

}  // namespace ebmc
