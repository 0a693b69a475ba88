#include "qrl/agent/trainer.hpp"

#include <algorithm>
#include <stdexcept>

#include "qrl/agent/schedule.hpp"
#include "qrl/env/cartpole.hpp"
#include "qrl/vqc/encoding.hpp"

namespace qrl::agent {

namespace {

int argmax_low_tie(const std::vector<double>& q) {
    int best = 0;
    for (int a = 1; a < static_cast<int>(q.size()); ++a)
        if (q[a] > q[best]) best = a;
    return best;
}

int greedy_action(const QFunction& q, const Obs& s, int shots, Rng* shot_rng) {
    const std::vector<double> vals =
        shots > 0 ? q.q_values_sampled(s, shots, *shot_rng) : q.q_values(s);
    return argmax_low_tie(vals);
}

double validation_episode(const QFunction& q, std::uint64_t seed, std::uint64_t index) {
    env::CartPole venv(derive_stream(seed, "validation", index));
    Obs s = venv.reset().as_array();
    double ret = 0.0;
    while (true) {
        const env::StepResult r = venv.step(greedy_action(q, s, 0, nullptr));
        ret += r.reward;
        if (r.done || r.truncated) return ret;
        s = r.next_state.as_array();
    }
}

} // namespace

int select_action(const QFunction& q, const Obs& s, double epsilon, Rng& rng,
                  int shots, Rng* shot_rng) {
    if (rng.uniform() < epsilon) return rng.uniform_int(q.n_actions());
    return greedy_action(q, s, shots, shot_rng);
}

std::vector<double> td_targets(std::span<const Transition> batch, const QFunction& target_q,
                               double gamma, bool bootstrap_on_truncation,
                               int shots, Rng* shot_rng) {
    std::vector<double> y(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Transition& tr = batch[i];
        const bool bootstrap = !tr.terminal && (!tr.truncated || bootstrap_on_truncation);
        double target = tr.reward;
        if (bootstrap) {
            const std::vector<double> qn = shots > 0
                                               ? target_q.q_values_sampled(tr.next_state, shots, *shot_rng)
                                               : target_q.q_values(tr.next_state);
            target += gamma * *std::max_element(qn.begin(), qn.end());
        }
        y[i] = target;
    }
    return y;
}

double loss_and_gradient(const QFunction& q, std::span<const Transition> batch,
                         std::span<const double> targets, std::vector<double>& grad_out,
                         int shots, Rng* shot_rng) {
    if (batch.size() != targets.size())
        throw std::invalid_argument("loss_and_gradient: batch/target size mismatch");
    if (batch.empty())
        throw std::invalid_argument("loss_and_gradient: empty batch");

    const std::size_t n = q.n_params();
    grad_out.assign(n, 0.0);
    double loss = 0.0;
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Transition& tr = batch[i];
        const std::vector<double> qv = shots > 0
                                           ? q.q_values_sampled(tr.state, shots, *shot_rng)
                                           : q.q_values(tr.state);
        const double residual = qv[tr.action] - targets[i];
        loss += residual * residual * inv;
        const std::vector<std::vector<double>> g = q.q_gradient(tr.state);
        const std::vector<double>& row = g[tr.action];
        const double scale = 2.0 * residual * inv;
        for (std::size_t j = 0; j < n; ++j) grad_out[j] += scale * row[j];
    }
    return loss;
}

double train_step(QFunction& q, const QFunction& target_q, const ReplayBuffer& buffer,
                  AdamState& adam, double lr, double gamma, std::size_t batch_size,
                  Rng& sample_rng, bool bootstrap_on_truncation, int shots, Rng* shot_rng) {
    const std::vector<Transition> batch = buffer.sample(batch_size, sample_rng);
    const std::vector<double> y = td_targets(batch, target_q, gamma, bootstrap_on_truncation,
                                             shots, shot_rng);
    std::vector<double> grad;
    const double loss = loss_and_gradient(q, batch, y, grad, shots, shot_rng);
    std::vector<double> params = q.get_params();
    adam.update(params, grad, lr);
    q.set_params(params);
    return loss;
}

void update_target(const QFunction& q, QFunction& target_q) {
    target_q.set_params(q.get_params());
}

bool solved(std::span<const double> validation_returns) {
    constexpr std::size_t kWindow = 25;
    constexpr double kThreshold = 196.0;
    if (validation_returns.size() < kWindow) return false;
    double sum = 0.0;
    for (std::size_t i = validation_returns.size() - kWindow; i < validation_returns.size(); ++i)
        sum += validation_returns[i];
    return sum / static_cast<double>(kWindow) >= kThreshold;
}

std::unique_ptr<QFunction> make_q_function(const xval::HyperParams& hp, xval::ModelKind kind,
                                           std::uint64_t seed) {
    if (kind == xval::ModelKind::Classical) {
        Rng init_rng = derive_stream(seed, "net-init");
        return std::make_unique<ClassicalNet>(ClassicalNet::init(init_rng));
    }
    vqc::ExtractionSpec ext;
    if (hp.extraction == "LS") ext = vqc::ExtractionSpec::local_scaling(2);
    else if (hp.extraction == "GS") ext = vqc::ExtractionSpec::global_scaling();
    else if (hp.extraction == "GSP") ext = vqc::ExtractionSpec::global_scaling_pooling();
    else throw std::invalid_argument("make_q_function: unknown extraction " + hp.extraction);
    const vqc::Architecture arch = hp.architecture == 'A' ? vqc::Architecture::A : vqc::Architecture::B;
    vqc::VqcModel model = vqc::VqcModel::make(arch, static_cast<int>(hp.layers),
                                              vqc::cartpole_encoding(hp.encoding), ext,
                                              hp.reuploading, hp.reparam);
    return std::make_unique<VqcQFunction>(std::move(model));
}

xval::RunLog run_training(const xval::HyperParams& hp, xval::ModelKind kind, std::uint64_t seed,
                          int shots, RunStats* stats) {
    if (hp.eta_start <= 0.0 || hp.eta_duration < 1 || hp.epsilon_duration < 1 ||
        hp.gamma <= 0.0 || hp.gamma > 1.0)
        throw std::invalid_argument("run_training: cross-validated fields not set");

    Rng eps_rng = derive_stream(seed, "epsilon");
    Rng replay_rng = derive_stream(seed, "replay");
    Rng shot_rng = derive_stream(seed, "shots");

    std::unique_ptr<QFunction> q = make_q_function(hp, kind, seed);
    std::unique_ptr<QFunction> target_q = q->clone();
    ReplayBuffer buffer(static_cast<std::size_t>(hp.replay_capacity));
    AdamState adam(q->n_params());

    const LinearSchedule eta_sched{hp.eta_start, hp.eta_end(), 0, hp.eta_duration};
    const LinearSchedule update_sched{static_cast<double>(hp.update_every_start),
                                      static_cast<double>(hp.update_every_end), 0,
                                      hp.update_every_duration};

    env::CartPole train_env(derive_stream(seed, "env"));
    Obs state = train_env.reset().as_array();
    double episode_reward = 0.0;

    xval::RunLog log;
    RunStats local_stats;
    std::vector<double> validation_returns;
    long long last_sync = 0;
    long long train_count = 0;
    std::uint64_t validation_count = 0;

    const long long effective_every = hp.train_mode == xval::TrainMode::SkolikRepro ? 30 : hp.train_every;

    for (long long t = 1; t <= hp.num_steps; ++t) {
        const double eps = epsilon_at(t, hp.train_after, hp.epsilon_duration,
                                      hp.epsilon_start, hp.epsilon_end);
        const int action = select_action(*q, state, eps, eps_rng, shots, &shot_rng);
        const env::StepResult sr = train_env.step(action);

        Transition tr;
        tr.state = state;
        tr.action = action;
        tr.reward = sr.reward;
        tr.next_state = sr.next_state.as_array();
        tr.terminal = sr.done;
        tr.truncated = sr.truncated;
        buffer.push(tr);
        episode_reward += sr.reward;

        const bool episode_ended = sr.done || sr.truncated;
        if (episode_ended) {
            log.add(t, xval::LogKind::EpisodeReturn, episode_reward);
            ++local_stats.episodes;
            episode_reward = 0.0;
            state = train_env.reset().as_array();
        } else {
            state = tr.next_state;
        }

        bool do_train = t > hp.train_after &&
                        buffer.size() >= static_cast<std::size_t>(hp.batch_size);
        if (do_train) {
            if (hp.train_mode == xval::TrainMode::PerEpisode)
                do_train = episode_ended;
            else
                do_train = (t - hp.train_after) % effective_every == 0;
        }
        if (do_train) {
            const double lr = eta_sched.value(train_count);
            const double loss = train_step(*q, *target_q, buffer, adam, lr, hp.gamma,
                                           static_cast<std::size_t>(hp.batch_size), replay_rng,
                                           hp.bootstrap_on_truncation, shots, &shot_rng);
            log.add(t, xval::LogKind::Loss, loss);
            ++train_count;
            ++local_stats.training_steps;
        }

        if (static_cast<double>(t - last_sync) >= update_sched.value(t)) {
            update_target(*q, *target_q);
            last_sync = t;
            ++local_stats.target_updates;
        }

        if (t % hp.validate_every == 0) {
            log.add(t, xval::LogKind::Epsilon, eps);
            log.add(t, xval::LogKind::Eta, eta_sched.value(train_count));
            const double ret = validation_episode(*q, seed, validation_count++);
            log.add(t, xval::LogKind::ValidationReturn, ret);
            validation_returns.push_back(ret);
            if (solved(validation_returns)) {
                log.add(t, xval::LogKind::Solved, 1.0);
                break;
            }
        }
    }

    if (stats) *stats = local_stats;
    return log;
}

} // namespace qrl::agent
