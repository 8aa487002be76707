#include "ebmc/epsilon.hpp"

#include <algorithm>
#include <cmath>

namespace ebmc {

std::optional<BetaWeight> beta_moment_match(const BetaWeight& w, double evidence_uniform,
                                            double evidence_greedy) {
    if (!(evidence_uniform >= 0.0) || !(evidence_greedy >= 0.0) ||
        !std::isfinite(evidence_uniform) || !std::isfinite(evidence_greedy)) {
        return std::nullopt;
    }
    if (evidence_uniform == 0.0 && evidence_greedy == 0.0) return std::nullopt;

    // A likelihood constant in the weight leaves the posterior untouched.
    if (evidence_uniform == evidence_greedy) return w;

    // When one evidence vanishes the true posterior is itself a Beta and the
    // moment match is exact; return that limit directly.
    if (evidence_uniform == 0.0) return BetaWeight{w.alpha, w.beta + 1.0};
    if (evidence_greedy == 0.0) return BetaWeight{w.alpha + 1.0, w.beta};

    const double a = w.alpha;
    const double b = w.beta;
    const double s = a + b;
    const double denom = evidence_uniform * a + evidence_greedy * b;
    if (!(denom > 0.0) || !std::isfinite(denom)) return std::nullopt;

    // Matched Beta parameters. With u = e_u / (e_u*a + e_q*b), the textbook
    // mean/variance match
    //   m = a/(s+1) * (e_u*(a+1) + e_q*b) / (e_u*a + e_q*b)
    //   v = a/(s+1) * (a+1)/(s+2) * (e_u*(a+2) + e_q*b) / (e_u*a + e_q*b)
    //   r = (m - v)/(v - m^2),  alpha' = m*r,  beta' = (1-m)*r
    // reduces, via e_u*(a+k) + e_q*b = denom + k*e_u, to
    //   alpha' = a*(1+u) * [(b+1) + u*(b-a)] / N
    //   beta'  = (b+1-a*u) * [(b+1) + u*(b-a)] / N
    //   N      = (b+1)*(1+2u) - a*u^2*(s+2)
    // which avoids the cancellation in v - m^2 for concentrated weights.
    const double u = evidence_uniform / denom;
    const double big_n = (b + 1.0) * (1.0 + 2.0 * u) - a * u * u * (s + 2.0);

    // v - m^2 in the original variables; a collapsed matched variance or a
    // non-positive concentration carries no usable information.
    const double spread = a * big_n / ((s + 1.0) * (s + 1.0) * (s + 2.0));
    if (!(spread > 1e-300)) return std::nullopt;

    const double common = (b + 1.0) + u * (b - a);
    const double next_alpha = a * (1.0 + u) * common / big_n;
    const double next_beta = (b + 1.0 - a * u) * common / big_n;
    if (!(next_alpha > 0.0) || !(next_beta > 0.0) || !std::isfinite(next_alpha) ||
        !std::isfinite(next_beta)) {
        return std::nullopt;
    }
    return BetaWeight{next_alpha, next_beta};
}

void bmc_update(BmcState& s, double g_greedy, double g_uniform, double observation) {
    if (!std::isfinite(g_greedy) || !std::isfinite(g_uniform)) {
        throw std::invalid_argument("bmc_update: non-finite model return");
    }
    s.moments.update(observation);  // rejects non-finite observations

    const GammaPosterior post = gamma_posterior(s.prior, s.moments);
    const double log_eq = student_t_log_density(predictive_params(g_greedy, post), observation);
    const double log_eu = student_t_log_density(predictive_params(g_uniform, post), observation);

    // Rebalance by the larger log evidence before exponentiating; the match is
    // scale invariant, so this only removes the underflow risk.
    const double log_max = std::max(log_eq, log_eu);
    if (!std::isfinite(log_max)) return;  // both evidences underflowed
    const double e_greedy = std::exp(log_eq - log_max);
    const double e_uniform = std::exp(log_eu - log_max);

    if (const auto next = beta_moment_match(s.weight, e_uniform, e_greedy)) {
        s.weight = *next;
    }
}

void validate(const ScheduleSpec& spec) {
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantSchedule>) {
                if (!(v.c >= 0.0 && v.c <= 1.0))
                    throw std::invalid_argument("constant schedule: c in [0,1]");
            } else if constexpr (std::is_same_v<T, GeometricSchedule>) {
                if (!(v.rho > 0.0 && v.rho < 1.0))
                    throw std::invalid_argument("geometric schedule: rho in (0,1)");
            } else if constexpr (std::is_same_v<T, PowerSchedule>) {
                if (!(v.exponent > 0.0))
                    throw std::invalid_argument("power schedule: exponent must be > 0");
            } else if constexpr (std::is_same_v<T, VdbeSpec>) {
                if (!(v.sigma > 0.0)) throw std::invalid_argument("vdbe: sigma must be > 0");
                if (!(v.delta > 0.0 && v.delta <= 1.0))
                    throw std::invalid_argument("vdbe: delta in (0,1]");
                if (!(v.eps0 >= 0.0 && v.eps0 <= 1.0))
                    throw std::invalid_argument("vdbe: eps0 in [0,1]");
            } else {
                validate(v.prior);
                validate(BetaWeight{v.alpha0, v.beta0});
                if (!(v.eps_min >= 0.0 && v.eps_min < 1.0))
                    throw std::invalid_argument("bmc: eps_min in [0,1)");
            }
        },
        spec);
}

std::string strategy_name(const ScheduleSpec& spec) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantSchedule>) {
                return "constant(" + std::to_string(v.c) + ")";
            } else if constexpr (std::is_same_v<T, GeometricSchedule>) {
                return "geometric(" + std::to_string(v.rho) + ")";
            } else if constexpr (std::is_same_v<T, PowerSchedule>) {
                return "power(" + std::to_string(v.exponent) + ")";
            } else if constexpr (std::is_same_v<T, VdbeSpec>) {
                return "vdbe(" + std::to_string(v.sigma) + ")";
            } else {
                return "bmc";
            }
        },
        spec);
}

double schedule_epsilon(const ScheduleSpec& spec, int episode) {
    if (episode < 0) throw std::invalid_argument("schedule_epsilon: negative episode");
    if (const auto* c = std::get_if<ConstantSchedule>(&spec)) return c->c;
    if (const auto* g = std::get_if<GeometricSchedule>(&spec)) {
        return 0.5 * std::pow(g->rho, static_cast<double>(episode));
    }
    if (const auto* p = std::get_if<PowerSchedule>(&spec)) {
        return 0.5 * std::pow(static_cast<double>(episode) + 1.0, -p->exponent);
    }
    throw std::logic_error("schedule_epsilon: stateful strategy has no closed-form schedule");
}

EpsilonStrategy::EpsilonStrategy(const ScheduleSpec& spec) : spec_(spec) {
    validate(spec_);
    if (const auto* b = std::get_if<BmcSpec>(&spec_)) {
        bmc_.weight = BetaWeight{b->alpha0, b->beta0};
        bmc_.prior = b->prior;
        bmc_.eps_min = b->eps_min;
        current_ = bmc_epsilon(bmc_);
    } else if (const auto* v = std::get_if<VdbeSpec>(&spec_)) {
        vdbe_.epsilon = v->eps0;
        current_ = vdbe_.epsilon;
    } else {
        current_ = schedule_epsilon(spec_, 0);
    }
}

void EpsilonStrategy::begin_episode(int episode) {
    if (!std::holds_alternative<BmcSpec>(spec_) && !std::holds_alternative<VdbeSpec>(spec_)) {
        current_ = schedule_epsilon(spec_, episode);
    }
}

void EpsilonStrategy::observe(double g_greedy, double g_uniform, double g_expected,
                              double td_error) {
    if (std::holds_alternative<BmcSpec>(spec_)) {
        bmc_update(bmc_, g_greedy, g_uniform, g_expected);
        current_ = bmc_epsilon(bmc_);
    } else if (const auto* v = std::get_if<VdbeSpec>(&spec_)) {
        vdbe_ = vdbe_update(vdbe_, td_error, v->sigma, v->delta);
        current_ = vdbe_.epsilon;
    }
    // stateless schedules ignore step feedback
}

const BmcState* EpsilonStrategy::bmc_state() const {
    return std::holds_alternative<BmcSpec>(spec_) ? &bmc_ : nullptr;
}

const VdbeState* EpsilonStrategy::vdbe_state() const {
    return std::holds_alternative<VdbeSpec>(spec_) ? &vdbe_ : nullptr;
}

}  // namespace ebmc
