#include <doctest.h>

#include <uamcap/airspace.hpp>
#include <uamcap/ddpg.hpp>
#include <uamcap/replay.hpp>
#include <uamcap/rng.hpp>

#include <cmath>
#include <stdexcept>
#include <deque>
#include <ostream>
#include <set>
#include <vector>

using namespace uam;

namespace {

Transition make_transition(std::mt19937_64& rng, bool terminal = false) {
    Transition t;
    for (auto& v : t.state) v = uniform_double(rng, -1.0, 1.0);
    for (auto& v : t.next_state) v = uniform_double(rng, -1.0, 1.0);
    t.action = {uniform_double(rng, -kMaxAccel, kMaxAccel), uniform_double(rng, -kMaxAccel, kMaxAccel)};
    t.reward = uniform_double(rng, -2.0, 2.0);
    t.terminal = terminal;
    return t;
}

DdpgHyperparams small_hyper() {
    DdpgHyperparams h;
    h.hidden_sizes = {8, 8};
    h.batch_size = 4;
    h.learn_start = 4;
    h.replay_capacity = 256;
    return h;
}

bool same_parameters(const Mlp& a, const Mlp& b) {
    if (!a.same_architecture(b)) return false;
    for (std::size_t l = 0; l < a.weights.size(); ++l) {
        if (a.weights[l].data != b.weights[l].data) return false;
        if (a.biases[l] != b.biases[l]) return false;
    }
    return true;
}

// Critic computing Q(s, a) = -(|a.x - ax| + |a.y - ay|) from rectifier units.
Mlp l1_bowl_critic(double ax, double ay) {
    Mlp net;
    net.layer_sizes = {kObservationDim + kActionDim, 4, 1};
    net.output_activation = OutputActivation::Linear;
    net.weights.emplace_back(4, kObservationDim + kActionDim);
    net.biases.push_back({-ax, ax, -ay, ay});
    net.weights[0].at(0, kObservationDim + 0) = 1.0;
    net.weights[0].at(1, kObservationDim + 0) = -1.0;
    net.weights[0].at(2, kObservationDim + 1) = 1.0;
    net.weights[0].at(3, kObservationDim + 1) = -1.0;
    net.weights.emplace_back(1, 4);
    for (int c = 0; c < 4; ++c) net.weights[1].at(0, c) = -1.0;
    net.biases.push_back({0.0});
    return net;
}

}  // namespace

TEST_CASE("replay buffer keeps FIFO order and evicts oldest first") {
    ReplayBuffer buf(2);
    std::mt19937_64 rng(1);
    Transition a = make_transition(rng);
    Transition b = make_transition(rng);
    Transition c = make_transition(rng);
    a.reward = 1;
    b.reward = 2;
    c.reward = 3;

    buf.push(a);
    CHECK(buf.size() == 1);
    buf.push(b);
    buf.push(c);
    CHECK(buf.size() == 2);
    CHECK(buf.total_pushed() == 3);
    CHECK(buf.at(0).reward == 2);
    CHECK(buf.at(1).reward == 3);
}

TEST_CASE("replay buffer rejects zero capacity") {
    CHECK_THROWS_AS(ReplayBuffer(0), std::invalid_argument);
}

TEST_CASE("replay buffer matches a deque model under 10000 random pushes") {
    const std::size_t cap = 64;
    ReplayBuffer buf(cap);
    std::deque<double> model;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10'000; ++i) {
        Transition t = make_transition(rng);
        t.reward = i;
        buf.push(t);
        model.push_back(i);
        if (model.size() > cap) model.pop_front();
        REQUIRE(buf.size() <= buf.capacity());
        REQUIRE(buf.size() == model.size());
    }
    for (std::size_t i = 0; i < model.size(); ++i) {
        REQUIRE(buf.at(i).reward == model[i]);
    }
}

TEST_CASE("replay sampling is uniform-with-replacement and seeded") {
    ReplayBuffer buf(128);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        Transition t = make_transition(rng);
        t.reward = i;
        buf.push(t);
    }

    SUBCASE("single-element buffer returns that element") {
        ReplayBuffer one(4);
        Transition t = make_transition(rng);
        t.reward = 42;
        one.push(t);
        std::vector<Transition> out;
        one.sample(1, rng, out);
        CHECK(out.size() == 1);
        CHECK(out[0].reward == 42);
    }

    SUBCASE("undersized buffer raises") {
        std::vector<Transition> out;
        CHECK_THROWS_AS(buf.sample(101, rng, out), std::invalid_argument);
    }

    SUBCASE("identical seeds give identical batches") {
        auto rng_a = make_engine(5, SeedStream::BatchSample, 0);
        auto rng_b = make_engine(5, SeedStream::BatchSample, 0);
        std::vector<Transition> out_a, out_b;
        buf.sample(32, rng_a, out_a);
        buf.sample(32, rng_b, out_b);
        REQUIRE(out_a.size() == out_b.size());
        for (std::size_t i = 0; i < out_a.size(); ++i) CHECK(out_a[i].reward == out_b[i].reward);
    }

    SUBCASE("10000 draws visit every stored index") {
        auto draw_rng = make_engine(6, SeedStream::BatchSample, 0);
        std::set<int> seen;
        std::vector<Transition> out;
        for (int i = 0; i < 10'000 / 8; ++i) {
            buf.sample(8, draw_rng, out);
            for (const auto& t : out) seen.insert(static_cast<int>(t.reward));
        }
        CHECK(seen.size() == 100);
    }
}

TEST_CASE("hyperparameter validation names the offending field") {
    DdpgHyperparams h;
    h.discount = 1.0;
    CHECK_THROWS_WITH_AS(h.validate(), "ddpg: discount must be in [0, 1)", std::invalid_argument);
    h = DdpgHyperparams{};
    h.tau = 0.0;
    CHECK_THROWS_AS(h.validate(), std::invalid_argument);
    h = DdpgHyperparams{};
    h.batch_size = 0;
    CHECK_THROWS_AS(h.validate(), std::invalid_argument);
    h = DdpgHyperparams{};
    h.hidden_sizes = {};
    CHECK_THROWS_AS(h.validate(), std::invalid_argument);
}

TEST_CASE("epsilon schedule ramps linearly then holds the floor") {
    DdpgHyperparams h;  // 1.0 -> 0.05 over the first 20%
    CHECK(epsilon_at(h, 0, 1000) == doctest::Approx(1.0));
    CHECK(epsilon_at(h, 100, 1000) == doctest::Approx(1.0 + (0.05 - 1.0) * 100.0 / 200.0));
    CHECK(epsilon_at(h, 200, 1000) == doctest::Approx(0.05));
    CHECK(epsilon_at(h, 999, 1000) == doctest::Approx(0.05));
    CHECK(epsilon_at(h, 3, 1) == doctest::Approx(0.05));
}

TEST_CASE("make_agent starts with targets equal to sources and is seed-reproducible") {
    auto hyper = small_hyper();
    Agent a = make_agent(kObservationDim, kActionDim, hyper, 11);
    Agent b = make_agent(kObservationDim, kActionDim, hyper, 11);
    CHECK(same_parameters(a.actor, a.actor_target));
    CHECK(same_parameters(a.critic, a.critic_target));
    CHECK(same_parameters(a.actor, b.actor));
    CHECK(same_parameters(a.critic, b.critic));

    Agent c = make_agent(kObservationDim, kActionDim, hyper, 12);
    CHECK_FALSE(same_parameters(a.actor, c.actor));
}

TEST_CASE("select_action: greedy branch returns exactly the actor output") {
    auto hyper = small_hyper();
    Agent agent = make_agent(kObservationDim, kActionDim, hyper, 21);
    std::mt19937_64 rng(9);
    std::array<double, kObservationDim> s{0.1, -0.2, 0.3, 0.4, -0.5, 0.6, 0.7, -0.8};
    const auto before = rng;
    Vec2 a = select_action(agent, s, 0.0, rng);
    CHECK(rng == before);  // greedy consumes no randomness
    auto out = forward(agent.actor, s);
    CHECK(a.x == out[0]);
    CHECK(a.y == out[1]);
}

TEST_CASE("select_action: epsilon = 1 samples uniformly inside the acceleration box") {
    auto hyper = small_hyper();
    Agent agent = make_agent(kObservationDim, kActionDim, hyper, 22);
    auto rng = make_engine(23, SeedStream::Exploration, 0);
    std::array<double, kObservationDim> s{};
    double sum_x = 0, sum_y = 0;
    const int n = 10'000;
    for (int i = 0; i < n; ++i) {
        Vec2 a = select_action(agent, s, 1.0, rng);
        REQUIRE(std::abs(a.x) <= kMaxAccel);
        REQUIRE(std::abs(a.y) <= kMaxAccel);
        sum_x += a.x;
        sum_y += a.y;
    }
    CHECK(std::abs(sum_x / n) < 0.1);
    CHECK(std::abs(sum_y / n) < 0.1);
}

TEST_CASE("select_action: seeded branch choices reproduce") {
    auto hyper = small_hyper();
    Agent agent = make_agent(kObservationDim, kActionDim, hyper, 24);
    auto rng_a = make_engine(25, SeedStream::Exploration, 0);
    auto rng_b = make_engine(25, SeedStream::Exploration, 0);
    std::array<double, kObservationDim> s{0.5, 0.5, 0, 0, -0.5, 0.1, 0.2, 0.3};
    for (int i = 0; i < 200; ++i) {
        Vec2 a = select_action(agent, s, 0.5, rng_a);
        Vec2 b = select_action(agent, s, 0.5, rng_b);
        CHECK(a.x == b.x);
        CHECK(a.y == b.y);
    }
}

TEST_CASE("bellman targets follow r + discount * target-critic value with terminal masking") {
    auto hyper = small_hyper();
    Agent agent = make_agent(kObservationDim, kActionDim, hyper, 31);

    // Force the target critic to a constant 2: zero weights, output bias 2.
    for (auto& m : agent.critic_target.weights) std::fill(m.data.begin(), m.data.end(), 0.0);
    for (auto& b : agent.critic_target.biases) std::fill(b.begin(), b.end(), 0.0);
    agent.critic_target.biases.back()[0] = 2.0;

    std::mt19937_64 rng(32);
    std::vector<Transition> batch{make_transition(rng), make_transition(rng), make_transition(rng)};
    batch[0].reward = 1.0;
    batch[0].terminal = false;
    batch[1].reward = 100.0;
    batch[1].terminal = true;
    batch[2].reward = -5.0;
    batch[2].terminal = false;

    std::vector<double> y;
    bellman_targets(agent, batch, y);
    CHECK(y[0] == doctest::Approx(1.0 + 0.9 * 2.0).epsilon(1e-12));
    CHECK(y[1] == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(y[2] == doctest::Approx(-5.0 + 0.9 * 2.0).epsilon(1e-12));

    SUBCASE("discount zero reduces targets to rewards") {
        agent.hyper.discount = 0.0;
        bellman_targets(agent, batch, y);
        CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(y[2] == doctest::Approx(-5.0).epsilon(1e-12));
    }

    SUBCASE("targets ignore the source networks entirely") {
        std::vector<double> before;
        bellman_targets(agent, batch, before);
        for (auto& m : agent.critic.weights)
            for (auto& w : m.data) w += 1.0;
        for (auto& m : agent.actor.weights)
            for (auto& w : m.data) w -= 0.5;
        std::vector<double> after;
        bellman_targets(agent, batch, after);
        CHECK(before == after);
    }
}

TEST_CASE("critic_update reproduces the textbook MSE and steps downhill") {
    // Single linear layer Q = action.x lets the loss be computed by hand.
    Mlp critic;
    critic.layer_sizes = {kObservationDim + kActionDim, 1};
    critic.weights.emplace_back(1, kObservationDim + kActionDim);
    critic.biases.push_back({0.0});
    critic.weights[0].at(0, kObservationDim) = 1.0;

    auto rng = make_engine(41, SeedStream::NetworkInit, 0);
    Mlp actor = init_random({kObservationDim, 4, kActionDim}, OutputActivation::TanhScaled, kMaxAccel, rng);

    auto hyper = small_hyper();
    hyper.lr_critic = 0.0;  // isolate the loss computation first
    Agent agent(actor, critic, actor, critic, hyper, 42);

    std::mt19937_64 trng(43);
    std::vector<Transition> batch{make_transition(trng), make_transition(trng)};
    batch[0].action = {0.0, 0.0};  // Q = 0
    batch[1].action = {2.0, 0.0};  // Q = 2
    const std::vector<double> y{1.0, 2.0};

    const double loss = critic_update(agent, batch, y);
    CHECK(loss == doctest::Approx(0.5).epsilon(1e-12));

    SUBCASE("perfect targets give zero loss and freeze parameters") {
        const std::vector<double> exact{0.0, 2.0};
        agent.hyper.lr_critic = 5e-4;
        const Mlp before = agent.critic;
        const double l0 = critic_update(agent, batch, exact);
        CHECK(l0 == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(same_parameters(agent.critic, before));
    }

    SUBCASE("one update on a frozen batch never increases the loss") {
        std::mt19937_64 meta(44);
        for (int trial = 0; trial < 100; ++trial) {
            auto h = small_hyper();
            h.lr_critic = 1e-3;
            Agent random_agent = make_agent(kObservationDim, kActionDim, h, 4500 + trial);
            std::vector<Transition> b{make_transition(meta), make_transition(meta),
                                      make_transition(meta), make_transition(meta)};
            std::vector<double> targets;
            bellman_targets(random_agent, b, targets);
            const double before = critic_update(random_agent, b, targets);
            random_agent.hyper.lr_critic = 0.0;
            const double after = critic_update(random_agent, b, targets);
            CHECK(after <= before + 1e-12);
        }
    }
}

TEST_CASE("actor_update ascends the critic and tracks a hand-built optimum") {
    const Vec2 target_action{1.0, -0.5};
    Mlp critic = l1_bowl_critic(target_action.x, target_action.y);

    auto rng = make_engine(51, SeedStream::NetworkInit, 0);
    Mlp actor = init_random({kObservationDim, 16, kActionDim}, OutputActivation::TanhScaled, kMaxAccel, rng);

    auto hyper = small_hyper();
    hyper.lr_actor = 5e-3;
    Agent agent(actor, critic, actor, critic, hyper, 52);

    std::mt19937_64 trng(53);
    std::vector<Transition> batch;
    for (int i = 0; i < 8; ++i) batch.push_back(make_transition(trng));

    auto mean_l1_to_target = [&]() {
        double total = 0;
        for (const auto& t : batch) {
            auto a = forward(agent.actor, t.state);
            total += std::abs(a[0] - target_action.x) + std::abs(a[1] - target_action.y);
        }
        return total / batch.size();
    };

    const double initial = mean_l1_to_target();
    for (int i = 0; i < 3000; ++i) actor_update(agent, batch);
    const double final_dist = mean_l1_to_target();
    CHECK(final_dist < 0.15);
    CHECK(final_dist < initial * 0.25);

    SUBCASE("zero learning rate leaves the actor untouched") {
        const Mlp before = agent.actor;
        agent.hyper.lr_actor = 0.0;
        actor_update(agent, batch);
        CHECK(same_parameters(agent.actor, before));
    }
}

TEST_CASE("actor_update does not decrease the batch objective for small steps") {
    std::mt19937_64 meta(61);
    for (int trial = 0; trial < 100; ++trial) {
        auto hyper = small_hyper();
        hyper.lr_actor = 1e-4;
        Agent agent = make_agent(kObservationDim, kActionDim, hyper, 6100 + trial);
        std::vector<Transition> batch{make_transition(meta), make_transition(meta),
                                      make_transition(meta), make_transition(meta)};
        const double before = actor_update(agent, batch);
        agent.hyper.lr_actor = 0.0;
        const double after = actor_update(agent, batch);
        CHECK(after >= before - 1e-12);
    }
}

TEST_CASE("soft updates shrink the target gap by exactly one minus tau") {
    auto rng = make_engine(71, SeedStream::NetworkInit, 0);
    Mlp source = init_random({4, 8, 2}, OutputActivation::Linear, 1.0, rng);
    Mlp target = init_random({4, 8, 2}, OutputActivation::Linear, 1.0, rng);
    const double tau = 0.01;

    std::vector<double> gap_before;
    for (std::size_t l = 0; l < source.weights.size(); ++l)
        for (std::size_t i = 0; i < source.weights[l].data.size(); ++i)
            gap_before.push_back(target.weights[l].data[i] - source.weights[l].data[i]);

    soft_update(target, source, tau);

    std::size_t k = 0;
    for (std::size_t l = 0; l < source.weights.size(); ++l) {
        for (std::size_t i = 0; i < source.weights[l].data.size(); ++i) {
            const double gap_after = target.weights[l].data[i] - source.weights[l].data[i];
            CHECK(gap_after == doctest::Approx((1.0 - tau) * gap_before[k]).epsilon(1e-12));
            ++k;
        }
    }
}

TEST_CASE("agent_learn_step gates on the learn threshold and batch size") {
    auto hyper = small_hyper();
    hyper.learn_start = 100;
    hyper.batch_size = 8;
    Agent agent = make_agent(kObservationDim, kActionDim, hyper, 81);

    std::mt19937_64 rng(82);
    for (int i = 0; i < 99; ++i) agent.buffer.push(make_transition(rng));
    auto d = agent_learn_step(agent);
    CHECK_FALSE(d.performed);

    agent.buffer.push(make_transition(rng));
    d = agent_learn_step(agent);
    CHECK(d.performed);
    CHECK(std::isfinite(d.critic_loss));
    CHECK(std::isfinite(d.actor_objective));
}

TEST_CASE("agent_learn_step with tau = 1 copies sources into targets") {
    auto hyper = small_hyper();
    hyper.tau = 1.0;
    Agent agent = make_agent(kObservationDim, kActionDim, hyper, 91);
    std::mt19937_64 rng(92);
    for (int i = 0; i < 16; ++i) agent.buffer.push(make_transition(rng));

    auto d = agent_learn_step(agent);
    REQUIRE(d.performed);
    CHECK(same_parameters(agent.actor, agent.actor_target));
    CHECK(same_parameters(agent.critic, agent.critic_target));
}

TEST_CASE("a seeded learn step is bitwise reproducible") {
    auto build = []() {
        auto hyper = small_hyper();
        Agent agent = make_agent(kObservationDim, kActionDim, hyper, 101);
        std::mt19937_64 rng(102);
        for (int i = 0; i < 32; ++i) agent.buffer.push(make_transition(rng, i % 7 == 0));
        return agent;
    };
    Agent a = build();
    Agent b = build();
    for (int i = 0; i < 10; ++i) {
        auto da = agent_learn_step(a);
        auto db = agent_learn_step(b);
        REQUIRE(da.performed);
        CHECK(da.critic_loss == db.critic_loss);
        CHECK(da.actor_objective == db.actor_objective);
    }
    CHECK(same_parameters(a.actor, b.actor));
    CHECK(same_parameters(a.critic, b.critic));
    CHECK(same_parameters(a.actor_target, b.actor_target));
    CHECK(same_parameters(a.critic_target, b.critic_target));
}
