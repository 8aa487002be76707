#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "ebmc/bayes.hpp"
#include "ebmc/running_moments.hpp"

namespace ebmc {

// Beta posterior over the mixture weight given to the uniform return model.
// Its mean is the exploration rate.
struct BetaWeight {
    double alpha = 1.0;
    double beta = 1.0;

    double mean() const { return alpha / (alpha + beta); }
};

inline void validate(const BetaWeight& w) {
    if (!(w.alpha > 0.0) || !(w.beta > 0.0)) {
        throw std::invalid_argument("BetaWeight: alpha and beta must be > 0");
    }
}

// One moment-matched Bayes step of the weight posterior given the evidences of
// the uniform and greedy return models. Returns nullopt when the step carries
// no information (both evidences zero, or the matched variance collapsed), in
// which case the caller keeps the previous weight.
std::optional<BetaWeight> beta_moment_match(const BetaWeight& w, double evidence_uniform,
                                            double evidence_greedy);

// Full adaptive-epsilon state: weight posterior, global return moments, and
// the precision prior they feed.
struct BmcState {
    BetaWeight weight;
    RunningMoments moments;
    NormalGammaPrior prior;
    double eps_min = 0.0;
};

inline double bmc_epsilon(const BmcState& s) {
    const double e = s.weight.mean();
    return e < s.eps_min ? s.eps_min : e;
}

// Posterior step for one observed return: advances the moments, recomputes the
// precision posterior, evaluates both model evidences in log space (rebalanced
// by their max so joint underflow is the only degenerate case), and
// moment-matches the weight posterior. Moments always advance; the weight is
// left unchanged on a degenerate evidence step.
void bmc_update(BmcState& s, double g_greedy, double g_uniform, double observation);

// Moving-average epsilon driven by TD-error magnitude (baseline).
struct VdbeState {
    double epsilon = 0.5;
};

inline VdbeState vdbe_update(VdbeState s, double td_error, double sigma, double delta) {
    if (!(sigma > 0.0)) throw std::invalid_argument("vdbe_update: sigma must be > 0");
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("vdbe_update: delta in (0,1]");
    const double w = std::exp(-std::abs(td_error) / sigma);
    const double f = (1.0 - w) / (1.0 + w);
    s.epsilon = delta * f + (1.0 - delta) * s.epsilon;
    return s;
}

// ---------------------------------------------------------------------------
// Epsilon production strategies

struct ConstantSchedule {
    double c = 0.05;
};
struct GeometricSchedule {
    double rho = 0.99;  // epsilon = 0.5 * rho^episode
};
struct PowerSchedule {
    double exponent = 1.0;  // epsilon = 0.5 * (episode + 1)^-exponent
};
struct VdbeSpec {
    double sigma = 1.0;
    double delta = 0.25;  // typically 1/|A|
    double eps0 = 0.5;
};
struct BmcSpec {
    NormalGammaPrior prior;
    double alpha0 = 1.0;
    double beta0 = 1.01;
    double eps_min = 0.0;
};

using ScheduleSpec = std::variant<ConstantSchedule, GeometricSchedule, PowerSchedule, VdbeSpec, BmcSpec>;

void validate(const ScheduleSpec& spec);
std::string strategy_name(const ScheduleSpec& spec);

// Episode-indexed value of a stateless schedule. The stateful variants have no
// closed form per episode; calling this with one is a contract violation.
double schedule_epsilon(const ScheduleSpec& spec, int episode);

// Runtime epsilon source used by the training loop. Stateless schedules
// refresh once per episode; vdbe and bmc adapt on every observed step.
class EpsilonStrategy {
public:
    explicit EpsilonStrategy(const ScheduleSpec& spec);

    void begin_episode(int episode);
    double epsilon() const { return current_; }

    // per-step feedback from the agent (pre-update bootstrap values)
    void observe(double g_greedy, double g_uniform, double g_expected, double td_error);

    const BmcState* bmc_state() const;
    const VdbeState* vdbe_state() const;

private:
    ScheduleSpec spec_;
    BmcState bmc_;
    VdbeState vdbe_;
    double current_ = 0.0;
};

}  // namespace ebmc
