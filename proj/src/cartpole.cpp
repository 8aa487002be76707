#include "ebmc/cartpole.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ebmc {

void validate(const CartPoleSpec& spec) {
    if (!(spec.gravity > 0.0) || !(spec.cart_mass > 0.0) || !(spec.pole_mass > 0.0) ||
        !(spec.pole_half_length > 0.0) || !(spec.timestep > 0.0)) {
        throw std::invalid_argument("cartpole: physics constants must be positive");
    }
    if (!(spec.angle_threshold > 0.0) || !(spec.position_threshold > 0.0) ||
        !(spec.velocity_clamp > 0.0) || !(spec.angular_velocity_clamp > 0.0)) {
        throw std::invalid_argument("cartpole: thresholds must be positive");
    }
    for (int b : spec.bins) {
        if (b <= 0) throw std::invalid_argument("cartpole: bin counts must be positive");
    }
    if (!(spec.init_range >= 0.0)) {
        throw std::invalid_argument("cartpole: init_range must be >= 0");
    }
}

CartState cartpole_dynamics(const CartPoleSpec& spec, const CartState& s, int action) {
    if (action != 0 && action != 1) {
        throw std::invalid_argument("cartpole_dynamics: action out of range");
    }
    const double force = action == 1 ? spec.force_mag : -spec.force_mag;
    const double total_mass = spec.cart_mass + spec.pole_mass;
    const double pole_mass_length = spec.pole_mass * spec.pole_half_length;

    const double cos_theta = std::cos(s.theta);
    const double sin_theta = std::sin(s.theta);
    const double temp =
        (force + pole_mass_length * s.theta_dot * s.theta_dot * sin_theta) / total_mass;
    const double theta_acc =
        (spec.gravity * sin_theta - cos_theta * temp) /
        (spec.pole_half_length * (4.0 / 3.0 - spec.pole_mass * cos_theta * cos_theta / total_mass));
    const double x_acc = temp - pole_mass_length * theta_acc * cos_theta / total_mass;

    CartState next;
    next.x = s.x + spec.timestep * s.x_dot;
    next.x_dot = s.x_dot + spec.timestep * x_acc;
    next.theta = s.theta + spec.timestep * s.theta_dot;
    next.theta_dot = s.theta_dot + spec.timestep * theta_acc;
    return next;
}

bool cartpole_failed(const CartPoleSpec& spec, const CartState& s) {
    return std::abs(s.theta) > spec.angle_threshold || std::abs(s.x) > spec.position_threshold;
}

namespace {

int bin_index(double v, double lo, double hi, int n) {
    v = std::clamp(v, lo, hi);
    const int b = static_cast<int>((v - lo) / (hi - lo) * n);
    return std::min(b, n - 1);
}

}  // namespace

int discretize(const CartPoleSpec& spec, const CartState& s) {
    const int b0 = bin_index(s.x, -spec.position_threshold, spec.position_threshold, spec.bins[0]);
    const int b1 = bin_index(s.x_dot, -spec.velocity_clamp, spec.velocity_clamp, spec.bins[1]);
    const int b2 = bin_index(s.theta, -spec.angle_threshold, spec.angle_threshold, spec.bins[2]);
    const int b3 = bin_index(s.theta_dot, -spec.angular_velocity_clamp,
                             spec.angular_velocity_clamp, spec.bins[3]);
    return ((b0 * spec.bins[1] + b1) * spec.bins[2] + b2) * spec.bins[3] + b3;
}

CartPole::CartPole(CartPoleSpec spec) : spec_(spec) { validate(spec_); }

int CartPole::reset(Rng& rng) {
    state_.x = rng.uniform(-spec_.init_range, spec_.init_range);
    state_.x_dot = rng.uniform(-spec_.init_range, spec_.init_range);
    state_.theta = rng.uniform(-spec_.init_range, spec_.init_range);
    state_.theta_dot = rng.uniform(-spec_.init_range, spec_.init_range);
    return discretize(spec_, state_);
}

StepResult CartPole::step(int action, Rng&) {
    state_ = cartpole_dynamics(spec_, state_, action);
    return StepResult{discretize(spec_, state_), 1.0, cartpole_failed(spec_, state_)};
}

}  // namespace ebmc
