#pragma once

#include "ebmc/rng.hpp"

namespace ebmc {

struct StepResult {
    int state;
    double reward;
    bool done;
};

// Episodic environment with a discrete state index space. Instances own any
// hidden continuous state; reset starts a fresh episode.
class Env {
public:
    virtual ~Env() = default;

    virtual int num_states() const = 0;
    virtual int num_actions() const = 0;
    virtual int reset(Rng& rng) = 0;
    virtual StepResult step(int action, Rng& rng) = 0;
};

}  // namespace ebmc
