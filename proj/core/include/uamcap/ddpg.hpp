#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "uamcap/mlp.hpp"
#include "uamcap/replay.hpp"
#include "uamcap/vec2.hpp"

namespace uam {

struct DdpgHyperparams {
    double discount = 0.9;
    double tau = 0.01;
    double lr_critic = 5e-4;
    double lr_actor = 5e-5;
    int batch_size = 64;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    double epsilon_fraction = 0.2;  // share of episodes spent ramping down
    std::size_t learn_start = 1'000;
    std::size_t replay_capacity = 1'000'000;
    std::vector<int> hidden_sizes = {64, 64};

    void validate() const;  // throws std::invalid_argument naming the field
};

/// Linear ramp from epsilon_start to epsilon_end over the first
/// epsilon_fraction of episodes, flat afterwards.
double epsilon_at(const DdpgHyperparams& h, int episode, int total_episodes);

/// Actor maps the observation to a bounded acceleration; the critic scores
/// observation+action pairs. Targets start as exact copies. Scratch holds
/// every buffer the learn step needs, so steady-state learning does not
/// allocate.
struct Agent {
    Mlp actor;
    Mlp critic;
    Mlp actor_target;
    Mlp critic_target;
    ReplayBuffer buffer;
    DdpgHyperparams hyper;
    std::mt19937_64 batch_rng;

    struct Scratch {
        std::vector<Transition> batch;
        std::vector<double> targets;
        std::vector<double> critic_input;
        std::vector<double> input_grad;
        std::vector<double> action_grad;
        ForwardCache actor_cache;
        ForwardCache critic_cache;
        ForwardCache target_actor_cache;
        ForwardCache target_critic_cache;
        GradientSet critic_grads;
        GradientSet actor_grads;
    } scratch;

    Agent(Mlp actor_, Mlp critic_, Mlp actor_target_, Mlp critic_target_,
          const DdpgHyperparams& hyper_, std::uint64_t master_seed, std::uint64_t batch_stream_index = 0);

    int observation_dim() const { return actor.input_size(); }
    int action_dim() const { return actor.output_size(); }
};

/// Fresh agent: actor/critic drawn from the network-init stream of
/// master_seed, targets copied, empty buffer of hyper.replay_capacity.
Agent make_agent(int obs_dim, int action_dim, const DdpgHyperparams& hyper,
                 std::uint64_t master_seed, std::uint64_t batch_stream_index = 0);

struct LearnDiagnostics {
    bool performed = false;
    double critic_loss = 0.0;
    double actor_objective = 0.0;
};

/// With probability epsilon, a uniform draw from the acceleration box;
/// otherwise the greedy actor output. epsilon = 0 consumes no randomness.
Vec2 select_action(Agent& agent, std::span<const double> state, double epsilon, std::mt19937_64& rng);

/// y_j = r_j + discount * Q'(s'_j, mu'(s'_j)), with y_j = r_j on terminal
/// transitions (no bootstrap past the end of an episode).
void bellman_targets(Agent& agent, std::span<const Transition> batch, std::vector<double>& out);

/// One SGD step on the critic against mean squared error to the targets;
/// returns the pre-update loss. Throws std::runtime_error on a non-finite
/// loss.
double critic_update(Agent& agent, std::span<const Transition> batch, std::span<const double> targets);

/// Deterministic policy gradient: ascend mean Q(s, mu(s)) through the
/// critic's action-input gradient; returns the pre-update mean Q.
double actor_update(Agent& agent, std::span<const Transition> batch);

/// sample -> targets -> critic step -> actor step -> soft-update both
/// targets. A no-op (performed = false) until the buffer holds
/// max(learn_start, batch_size) transitions.
LearnDiagnostics agent_learn_step(Agent& agent);

}  // namespace uam
