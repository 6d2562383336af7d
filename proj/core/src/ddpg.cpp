#include "uamcap/ddpg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "uamcap/airspace.hpp"
#include "uamcap/rng.hpp"

namespace uam {

void DdpgHyperparams::validate() const {
    auto fail = [](const char* what) { throw std::invalid_argument(std::string("ddpg: ") + what); };
    if (!(discount >= 0.0 && discount < 1.0)) fail("discount must be in [0, 1)");
    if (!(tau > 0.0 && tau <= 1.0)) fail("tau must be in (0, 1]");
    if (!(lr_critic >= 0.0) || !(lr_actor >= 0.0)) fail("learning rates must be non-negative");
    if (batch_size < 1) fail("batch_size must be at least 1");
    if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0)) fail("epsilon_start must be in [0, 1]");
    if (!(epsilon_end >= 0.0 && epsilon_end <= 1.0)) fail("epsilon_end must be in [0, 1]");
    if (!(epsilon_fraction > 0.0 && epsilon_fraction <= 1.0)) fail("epsilon_fraction must be in (0, 1]");
    if (replay_capacity == 0) fail("replay_capacity must be positive");
    if (hidden_sizes.empty()) fail("hidden_sizes must name at least one layer");
    for (int h : hidden_sizes) {
        if (h < 1) fail("hidden_sizes entries must be positive");
    }
}

double epsilon_at(const DdpgHyperparams& h, int episode, int total_episodes) {
    const int ramp = std::max(1, static_cast<int>(h.epsilon_fraction * total_episodes));
    if (episode >= ramp) return h.epsilon_end;
    return h.epsilon_start + (h.epsilon_end - h.epsilon_start) * episode / ramp;
}

Agent::Agent(Mlp actor_, Mlp critic_, Mlp actor_target_, Mlp critic_target_,
             const DdpgHyperparams& hyper_, std::uint64_t master_seed,
             std::uint64_t batch_stream_index)
    : actor(std::move(actor_)),
      critic(std::move(critic_)),
      actor_target(std::move(actor_target_)),
      critic_target(std::move(critic_target_)),
      buffer(hyper_.replay_capacity),
      hyper(hyper_),
      batch_rng(make_engine(master_seed, SeedStream::BatchSample, batch_stream_index)) {
    hyper.validate();
    if (!actor.same_architecture(actor_target) || !critic.same_architecture(critic_target)) {
        throw std::invalid_argument("Agent: target architecture differs from its source");
    }
    if (critic.input_size() != actor.input_size() + actor.output_size() || critic.output_size() != 1) {
        throw std::invalid_argument("Agent: critic shape does not match actor observation+action");
    }
    scratch.critic_grads.make_like(critic);
    scratch.actor_grads.make_like(actor);
    scratch.critic_input.resize(static_cast<std::size_t>(critic.input_size()));
}

Agent make_agent(int obs_dim, int action_dim, const DdpgHyperparams& hyper,
                 std::uint64_t master_seed, std::uint64_t batch_stream_index) {
    hyper.validate();
    std::vector<int> actor_sizes{obs_dim};
    actor_sizes.insert(actor_sizes.end(), hyper.hidden_sizes.begin(), hyper.hidden_sizes.end());
    actor_sizes.push_back(action_dim);
    std::vector<int> critic_sizes{obs_dim + action_dim};
    critic_sizes.insert(critic_sizes.end(), hyper.hidden_sizes.begin(), hyper.hidden_sizes.end());
    critic_sizes.push_back(1);

    auto actor_rng = make_engine(master_seed, SeedStream::NetworkInit, 0);
    auto critic_rng = make_engine(master_seed, SeedStream::NetworkInit, 1);
    Mlp actor = init_random(actor_sizes, OutputActivation::TanhScaled, kMaxAccel, actor_rng);
    Mlp critic = init_random(critic_sizes, OutputActivation::Linear, 1.0, critic_rng);
    Mlp actor_target = actor;
    Mlp critic_target = critic;
    return Agent(std::move(actor), std::move(critic), std::move(actor_target),
                 std::move(critic_target), hyper, master_seed, batch_stream_index);
}

Vec2 select_action(Agent& agent, std::span<const double> state, double epsilon, std::mt19937_64& rng) {
    if (epsilon > 0.0 && uniform_double(rng, 0.0, 1.0) < epsilon) {
        return {uniform_double(rng, -kMaxAccel, kMaxAccel), uniform_double(rng, -kMaxAccel, kMaxAccel)};
    }
    auto out = forward(agent.actor, state, agent.scratch.actor_cache);
    return {out[0], out[1]};
}

namespace {

void fill_critic_input(std::vector<double>& in, std::span<const double> state,
                       std::span<const double> action) {
    std::copy(state.begin(), state.end(), in.begin());
    std::copy(action.begin(), action.end(), in.begin() + state.size());
}

}  // namespace

void bellman_targets(Agent& agent, std::span<const Transition> batch, std::vector<double>& out) {
    out.resize(batch.size());
    auto& s = agent.scratch;
    for (std::size_t j = 0; j < batch.size(); ++j) {
        const Transition& t = batch[j];
        if (t.terminal) {
            out[j] = t.reward;
            continue;
        }
        auto a_next = forward(agent.actor_target, t.next_state, s.target_actor_cache);
        fill_critic_input(s.critic_input, t.next_state, a_next);
        auto q_next = forward(agent.critic_target, s.critic_input, s.target_critic_cache);
        out[j] = t.reward + agent.hyper.discount * q_next[0];
    }
}

double critic_update(Agent& agent, std::span<const Transition> batch, std::span<const double> targets) {
    if (batch.empty() || batch.size() != targets.size()) {
        throw std::invalid_argument("critic_update: batch and targets must align");
    }
    auto& s = agent.scratch;
    s.critic_grads.set_zero();
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    double ograd[1];
    for (std::size_t j = 0; j < batch.size(); ++j) {
        const Transition& t = batch[j];
        const double action[2] = {t.action.x, t.action.y};
        fill_critic_input(s.critic_input, t.state, action);
        auto q = forward(agent.critic, s.critic_input, s.critic_cache);
        const double err = q[0] - targets[j];
        loss += err * err;
        ograd[0] = 2.0 * err * inv_n;
        backward(agent.critic, s.critic_cache, std::span<const double>(ograd, 1), s.critic_grads, true);
    }
    loss *= inv_n;
    if (!std::isfinite(loss)) throw std::runtime_error("critic_update: non-finite loss");
    apply_gradients(agent.critic, s.critic_grads, agent.hyper.lr_critic);
    return loss;
}

double actor_update(Agent& agent, std::span<const Transition> batch) {
    if (batch.empty()) throw std::invalid_argument("actor_update: empty batch");
    auto& s = agent.scratch;
    s.actor_grads.set_zero();
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    const int obs_dim = agent.observation_dim();
    const int act_dim = agent.action_dim();
    s.action_grad.resize(static_cast<std::size_t>(act_dim));
    double objective = 0.0;
    const double q_grad[1] = {1.0};
    for (const Transition& t : batch) {
        auto a = forward(agent.actor, t.state, s.actor_cache);
        fill_critic_input(s.critic_input, t.state, a);
        auto q = forward(agent.critic, s.critic_input, s.critic_cache);
        objective += q[0];
        backward_input(agent.critic, s.critic_cache, q_grad, s.input_grad);
        // Descend on -Q: the actor's output gradient is -(1/N) dQ/da.
        for (int k = 0; k < act_dim; ++k) {
            s.action_grad[static_cast<std::size_t>(k)] = -inv_n * s.input_grad[static_cast<std::size_t>(obs_dim + k)];
        }
        backward(agent.actor, s.actor_cache, s.action_grad, s.actor_grads, true);
    }
    objective *= inv_n;
    if (!std::isfinite(objective)) throw std::runtime_error("actor_update: non-finite objective");
    apply_gradients(agent.actor, s.actor_grads, agent.hyper.lr_actor);
    return objective;
}

LearnDiagnostics agent_learn_step(Agent& agent) {
    LearnDiagnostics d;
    const std::size_t gate = std::max(agent.hyper.learn_start,
                                      static_cast<std::size_t>(agent.hyper.batch_size));
    if (agent.buffer.size() < gate) return d;
    auto& s = agent.scratch;
    agent.buffer.sample(static_cast<std::size_t>(agent.hyper.batch_size), agent.batch_rng, s.batch);
    bellman_targets(agent, s.batch, s.targets);
    d.critic_loss = critic_update(agent, s.batch, s.targets);
    d.actor_objective = actor_update(agent, s.batch);
    soft_update(agent.actor_target, agent.actor, agent.hyper.tau);
    soft_update(agent.critic_target, agent.critic, agent.hyper.tau);
    d.performed = true;
    return d;
}

}  // namespace uam
