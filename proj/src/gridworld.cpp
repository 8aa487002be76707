#include "ebmc/gridworld.hpp"

#include <deque>
#include <stdexcept>
#include <string>

namespace ebmc {

void validate(const GridWorldSpec& spec) {
    if (spec.width <= 0 || spec.height <= 0) {
        throw std::invalid_argument("gridworld: width and height must be positive");
    }
    auto check_cell = [&](std::pair<int, int> cell, const char* what) {
        if (cell.first < 0 || cell.first >= spec.height || cell.second < 0 ||
            cell.second >= spec.width) {
            throw std::invalid_argument(std::string("gridworld: ") + what + " cell out of range");
        }
    };
    check_cell(spec.start, "start");
    check_cell(spec.goal, "goal");
    for (const auto& sg : spec.subgoals) check_cell(sg, "subgoal");
    if (spec.subgoals.size() > 16) {
        throw std::invalid_argument("gridworld: too many subgoals (flag mask limit is 16)");
    }
}

int gridworld_encode(const GridWorldSpec& spec, int row, int col, unsigned flags) {
    const int pos = row * spec.width + col;
    return pos * spec.num_flag_sets() + static_cast<int>(flags);
}

GridCell gridworld_decode(const GridWorldSpec& spec, int state) {
    const int flag_sets = spec.num_flag_sets();
    const unsigned flags = static_cast<unsigned>(state % flag_sets);
    const int pos = state / flag_sets;
    return GridCell{pos / spec.width, pos % spec.width, flags};
}

StepResult gridworld_step(const GridWorldSpec& spec, int state, int action) {
    const GridCell cell = gridworld_decode(spec, state);
    int row = cell.row;
    int col = cell.col;
    switch (action) {
        case 0: row -= 1; break;
        case 1: row += 1; break;
        case 2: col -= 1; break;
        case 3: col += 1; break;
        default: throw std::invalid_argument("gridworld_step: action out of range");
    }

    const bool valid = row >= 0 && row < spec.height && col >= 0 && col < spec.width;
    if (!valid) {
        return StepResult{state, spec.invalid_cost, false};
    }

    unsigned flags = cell.flags;
    const unsigned all = static_cast<unsigned>(spec.num_flag_sets() - 1);
    for (std::size_t i = 0; i < spec.subgoals.size(); ++i) {
        // a sub-goal counts only when every earlier one is already collected
        if (spec.subgoals[i].first == row && spec.subgoals[i].second == col &&
            flags == ((1u << i) - 1u)) {
            flags |= 1u << i;
        }
    }

    const bool done = row == spec.goal.first && col == spec.goal.second && flags == all;
    return StepResult{gridworld_encode(spec, row, col, flags), spec.step_cost, done};
}

int bfs_optimal_steps(const GridWorldSpec& spec) {
    validate(spec);
    const int n = spec.num_states();
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    const int start = gridworld_encode(spec, spec.start.first, spec.start.second, 0u);

    // Handle a start that already satisfies the termination condition.
    if (spec.subgoals.empty() && spec.start == spec.goal) return 0;

    std::deque<int> queue{start};
    dist[static_cast<std::size_t>(start)] = 0;
    while (!queue.empty()) {
        const int s = queue.front();
        queue.pop_front();
        for (int a = 0; a < kGridWorldActions; ++a) {
            const StepResult r = gridworld_step(spec, s, a);
            if (r.done) return dist[static_cast<std::size_t>(s)] + 1;
            if (dist[static_cast<std::size_t>(r.state)] < 0) {
                dist[static_cast<std::size_t>(r.state)] = dist[static_cast<std::size_t>(s)] + 1;
                queue.push_back(r.state);
            }
        }
    }
    throw std::runtime_error("bfs_optimal_steps: task is unreachable from the start cell");
}

GridWorld::GridWorld(GridWorldSpec spec) : spec_(std::move(spec)) {
    validate(spec_);
    state_ = gridworld_encode(spec_, spec_.start.first, spec_.start.second, 0u);
}

int GridWorld::reset(Rng&) {
    state_ = gridworld_encode(spec_, spec_.start.first, spec_.start.second, 0u);
    return state_;
}

StepResult GridWorld::step(int action, Rng&) {
    const StepResult r = gridworld_step(spec_, state_, action);
    state_ = r.state;
    return r;
}

}  // namespace ebmc
