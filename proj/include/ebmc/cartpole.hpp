#pragma once

#include <array>
#include <numbers>

#include "ebmc/env.hpp"

namespace ebmc {

// Classic cart-pole balancing with the standard benchmark constants, Euler
// integration, and a fixed-grid discretizer that exposes a tabular state
// index. Reward is 1.0 per step; the episode fails when the pole angle or
// cart position leaves its threshold.
struct CartPoleSpec {
    double gravity = 9.8;
    double cart_mass = 1.0;
    double pole_mass = 0.1;
    double pole_half_length = 0.5;
    double force_mag = 10.0;
    double timestep = 0.02;
    double angle_threshold = 12.0 * std::numbers::pi / 180.0;
    double position_threshold = 2.4;
    // clamp ranges for the unbounded velocity dimensions
    double velocity_clamp = 3.0;
    double angular_velocity_clamp = 3.5;
    std::array<int, 4> bins{3, 3, 4, 3};  // x, x_dot, theta, theta_dot
    double init_range = 0.05;             // reset draws each dimension from +-init_range

    int num_states() const { return bins[0] * bins[1] * bins[2] * bins[3]; }
};

void validate(const CartPoleSpec& spec);

inline constexpr int kCartPoleActions = 2;  // 0 = push left, 1 = push right

struct CartState {
    double x = 0.0;
    double x_dot = 0.0;
    double theta = 0.0;
    double theta_dot = 0.0;
};

// One Euler step of the cart-pole dynamics.
CartState cartpole_dynamics(const CartPoleSpec& spec, const CartState& s, int action);

bool cartpole_failed(const CartPoleSpec& spec, const CartState& s);

// Clamp each dimension to its range, map to an equal-width bin, and combine
// by mixed-radix encoding.
int discretize(const CartPoleSpec& spec, const CartState& s);

class CartPole final : public Env {
public:
    explicit CartPole(CartPoleSpec spec);

    int num_states() const override { return spec_.num_states(); }
    int num_actions() const override { return kCartPoleActions; }
    int reset(Rng& rng) override;
    StepResult step(int action, Rng& rng) override;

    const CartState& continuous_state() const { return state_; }
    const CartPoleSpec& spec() const { return spec_; }

private:
    CartPoleSpec spec_;
    CartState state_;
};

}  // namespace ebmc
