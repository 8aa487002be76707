#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ebmc/running_moments.hpp"

namespace ebmc {

// Normal-gamma prior over the mean and precision of observed returns.
// Only the gamma marginal over the precision is ever consumed downstream.
struct NormalGammaPrior {
    double mu0 = 0.0;
    double tau0 = 1.0;
    double a0 = 500.0;
    double b0 = 500.0;
};

inline void validate(const NormalGammaPrior& p) {
    if (!(p.tau0 > 0.0) || !(p.a0 > 0.0) || !(p.b0 > 0.0)) {
        throw std::invalid_argument("NormalGammaPrior: tau0, a0, b0 must be > 0");
    }
    if (!std::isfinite(p.mu0)) {
        throw std::invalid_argument("NormalGammaPrior: mu0 must be finite");
    }
}

// Gamma posterior over the return precision.
struct GammaPosterior {
    double a;
    double b;
};

// Three-parameter Student-t: location, precision lambda, degrees of freedom nu.
struct StudentTParams {
    double location;
    double precision;
    double dof;
};

// Conjugate update of the precision marginal from the observed moments:
//   a = a0 + t/2
//   b = b0 + (t/2) * (var + tau0/(tau0+t) * (mean - mu0)^2)
inline GammaPosterior gamma_posterior(const NormalGammaPrior& prior, const RunningMoments& m) {
    const double t = static_cast<double>(m.count());
    const double a = prior.a0 + 0.5 * t;
    if (m.count() == 0) return GammaPosterior{a, prior.b0};
    const double dev = m.mean() - prior.mu0;
    const double shrink = prior.tau0 / (prior.tau0 + t);
    const double b = prior.b0 + 0.5 * t * (m.variance() + shrink * dev * dev);
    return GammaPosterior{a, b};
}

// Predictive distribution of one observation located at a model's return
// estimate, with the precision integrated out against its gamma posterior.
inline StudentTParams predictive_params(double model_return, const GammaPosterior& post) {
    return StudentTParams{model_return, post.a / post.b, 2.0 * post.a};
}

// Log density of the three-parameter Student-t. Kept in log space: the
// normalizer overflows in linear space once dof grows into the thousands.
inline double student_t_log_density(const StudentTParams& p, double x) {
    if (!(p.precision > 0.0) || !(p.dof > 0.0)) {
        throw std::invalid_argument("StudentTParams: precision and dof must be > 0");
    }
    const double half_nu_plus_one = 0.5 * (p.dof + 1.0);
    const double dev = x - p.location;
    const double z = p.precision * dev * dev / p.dof;
    return std::lgamma(half_nu_plus_one) - std::lgamma(0.5 * p.dof) +
           0.5 * std::log(p.precision / (std::numbers::pi * p.dof)) -
           half_nu_plus_one * std::log1p(z);
}

// Density of observing d under the candidate model's predictive Student-t.
// May underflow to 0 for extreme observations; callers that care rebalance
// in log space before exponentiating.
inline double model_evidence(double model_return, const GammaPosterior& post, double d) {
    return std::exp(student_t_log_density(predictive_params(model_return, post), d));
}

}  // namespace ebmc
