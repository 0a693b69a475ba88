#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrl/agent/adam.hpp"
#include "qrl/agent/qfunction.hpp"
#include "qrl/agent/replay_buffer.hpp"
#include "qrl/xval/config.hpp"
#include "qrl/xval/runlog.hpp"

namespace qrl::agent {

// Epsilon-greedy with one exploration draw per call; exploit breaks Q ties
// toward the lower action index. In sampled mode (shots > 0) the greedy
// branch estimates Q from measurements using shot_rng.
int select_action(const QFunction& q, const Obs& s, double epsilon, Rng& rng,
                  int shots = 0, Rng* shot_rng = nullptr);

// One TD(0) regression target per transition: r + gamma * max_a Q'(s', a),
// without the bootstrap term on terminal transitions, and on truncated ones
// only when bootstrap_on_truncation is set. The target network is a constant
// here; no gradient flows through it.
std::vector<double> td_targets(std::span<const Transition> batch, const QFunction& target_q,
                               double gamma, bool bootstrap_on_truncation,
                               int shots = 0, Rng* shot_rng = nullptr);

// Mean squared TD error and its exact gradient for a fixed batch and fixed
// targets. Exposed separately so the gradient can be checked against finite
// differences of the same loss.
double loss_and_gradient(const QFunction& q, std::span<const Transition> batch,
                         std::span<const double> targets, std::vector<double>& grad_out,
                         int shots = 0, Rng* shot_rng = nullptr);

// One mini-batch step: sample, build targets, one Adam update. Returns the
// pre-update loss.
double train_step(QFunction& q, const QFunction& target_q, const ReplayBuffer& buffer,
                  AdamState& adam, double lr, double gamma, std::size_t batch_size,
                  Rng& sample_rng, bool bootstrap_on_truncation,
                  int shots = 0, Rng* shot_rng = nullptr);

// hard copy, policy -> target
void update_target(const QFunction& q, QFunction& target_q);

// mean of the last 25 greedy returns at or above 196
bool solved(std::span<const double> validation_returns);

// Side counters a run exposes for schedule cross-checks.
struct RunStats {
    long long training_steps = 0;
    long long target_updates = 0;
    long long episodes = 0;
};

// Full run: warm-up, epsilon-greedy sampling, scheduled training and target
// syncs, a greedy validation episode every validate_every steps, early stop
// once solved. Everything random flows from named substreams of `seed`, so
// equal (hp, kind, seed) give equal logs. Validation is always exact;
// `shots` only affects the behavior policy and the TD regression values.
xval::RunLog run_training(const xval::HyperParams& hp, xval::ModelKind kind, std::uint64_t seed,
                          int shots = 0, RunStats* stats = nullptr);

// The Q-function a run starts from, exposed for tests and tooling.
std::unique_ptr<QFunction> make_q_function(const xval::HyperParams& hp, xval::ModelKind kind,
                                           std::uint64_t seed);

} // namespace qrl::agent
