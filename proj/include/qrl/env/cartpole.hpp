#pragma once

#include <array>
#include <span>

#include "qrl/rng.hpp"

namespace qrl::env {

struct CartPoleState {
    double x = 0.0;
    double x_dot = 0.0;
    double theta = 0.0;
    double theta_dot = 0.0;

    std::array<double, 4> as_array() const { return {x, x_dot, theta, theta_dot}; }
};

struct StepResult {
    CartPoleState next_state;
    double reward = 1.0;
    bool done = false;      // pole fell or cart left the track
    bool truncated = false; // episode hit the step cap instead
};

// Cart-pole balancing with the v0 step cap of 200. Explicit Euler at 20 ms,
// +-10 N bang-bang force, reward 1 per step. Episodes end when |x| > 2.4,
// |theta| > 12 degrees, or 200 steps have elapsed.
class CartPole {
public:
    static constexpr double kGravity = 9.8;
    static constexpr double kMassCart = 1.0;
    static constexpr double kMassPole = 0.1;
    static constexpr double kTotalMass = kMassCart + kMassPole;
    static constexpr double kLength = 0.5; // half the pole
    static constexpr double kPoleMassLength = kMassPole * kLength;
    static constexpr double kForceMag = 10.0;
    static constexpr double kTau = 0.02;
    static constexpr double kXThreshold = 2.4;
    static constexpr double kThetaThreshold = 12.0 * 3.141592653589793 / 180.0;
    static constexpr int kMaxSteps = 200;

    explicit CartPole(Rng rng) : rng_(rng) {}

    // all four components drawn uniformly from [-0.05, 0.05]
    CartPoleState reset();

    // throws std::logic_error before the first reset or after the episode
    // ended; action must be 0 (push left) or 1 (push right)
    StepResult step(int action);

    // one Euler update of the physics, no episode bookkeeping
    static CartPoleState dynamics(const CartPoleState& s, int action);

    static bool out_of_bounds(const CartPoleState& s);

    const CartPoleState& state() const { return state_; }
    int steps() const { return steps_; }
    bool episode_over() const { return episode_over_; }

private:
    Rng rng_;
    CartPoleState state_;
    int steps_ = 0;
    bool episode_over_ = true;
};

// Total reward of a recorded episode; empty trajectories score 0.
double episode_return(std::span<const StepResult> trajectory);

} // namespace qrl::env
