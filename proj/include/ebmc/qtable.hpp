#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "ebmc/rng.hpp"

namespace ebmc {

// Dense tabular action-value function, row per state.
class QTable {
public:
    QTable(int num_states, int num_actions)
        : num_states_(num_states), num_actions_(num_actions) {
        if (num_states <= 0 || num_actions <= 0) {
            throw std::invalid_argument("QTable: dimensions must be positive");
        }
        values_.assign(static_cast<std::size_t>(num_states) * num_actions, 0.0);
    }

    static QTable uniform_init(int num_states, int num_actions, double lo, double hi, Rng& rng) {
        QTable q(num_states, num_actions);
        for (double& v : q.values_) v = rng.uniform(lo, hi);
        return q;
    }

    int num_states() const { return num_states_; }
    int num_actions() const { return num_actions_; }

    double at(int s, int a) const { return values_[index(s, a)]; }

    std::span<const double> row(int s) const {
        return {values_.data() + index(s, 0), static_cast<std::size_t>(num_actions_)};
    }

    // Q(s,a) <- (1-eta)*Q(s,a) + eta*target
    void apply_td(int s, int a, double target, double eta) {
        double& q = values_[index(s, a)];
        q += eta * (target - q);
    }

    bool operator==(const QTable& other) const = default;

private:
    std::size_t index(int s, int a) const {
        return static_cast<std::size_t>(s) * num_actions_ + a;
    }

    int num_states_;
    int num_actions_;
    std::vector<double> values_;
};

// Greedy action with deterministic tie-breaking toward the lowest index.
inline int argmax_lowest(std::span<const double> row) {
    int best = 0;
    for (int a = 1; a < static_cast<int>(row.size()); ++a) {
        if (row[a] > row[best]) best = a;
    }
    return best;
}

}  // namespace ebmc
