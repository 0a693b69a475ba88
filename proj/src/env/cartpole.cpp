#include "qrl/env/cartpole.hpp"

#include <cmath>
#include <stdexcept>

namespace qrl::env {

CartPoleState CartPole::reset() {
    state_.x = rng_.uniform(-0.05, 0.05);
    state_.x_dot = rng_.uniform(-0.05, 0.05);
    state_.theta = rng_.uniform(-0.05, 0.05);
    state_.theta_dot = rng_.uniform(-0.05, 0.05);
    steps_ = 0;
    episode_over_ = false;
    return state_;
}

CartPoleState CartPole::dynamics(const CartPoleState& s, int action) {
    if (action != 0 && action != 1)
        throw std::invalid_argument("CartPole: action must be 0 or 1");
    const double force = action == 1 ? kForceMag : -kForceMag;
    const double cos_theta = std::cos(s.theta);
    const double sin_theta = std::sin(s.theta);

    const double temp = (force + kPoleMassLength * s.theta_dot * s.theta_dot * sin_theta) / kTotalMass;
    const double theta_acc = (kGravity * sin_theta - cos_theta * temp) /
                             (kLength * (4.0 / 3.0 - kMassPole * cos_theta * cos_theta / kTotalMass));
    const double x_acc = temp - kPoleMassLength * theta_acc * cos_theta / kTotalMass;

    // semi-implicit would be sturdier; the reference dynamics use plain Euler
    // with positions advanced by the old velocities
    CartPoleState n;
    n.x = s.x + kTau * s.x_dot;
    n.x_dot = s.x_dot + kTau * x_acc;
    n.theta = s.theta + kTau * s.theta_dot;
    n.theta_dot = s.theta_dot + kTau * theta_acc;
    return n;
}

bool CartPole::out_of_bounds(const CartPoleState& s) {
    return std::abs(s.x) > kXThreshold || std::abs(s.theta) > kThetaThreshold;
}

StepResult CartPole::step(int action) {
    if (episode_over_)
        throw std::logic_error("CartPole::step: episode is over, call reset first");
    state_ = dynamics(state_, action);
    ++steps_;

    StepResult r;
    r.next_state = state_;
    r.reward = 1.0;
    r.done = out_of_bounds(state_);
    r.truncated = !r.done && steps_ >= kMaxSteps;
    episode_over_ = r.done || r.truncated;
    return r;
}

double episode_return(std::span<const StepResult> trajectory) {
    double g = 0.0;
    for (const StepResult& r : trajectory) g += r.reward;
    return g;
}

} // namespace qrl::env
