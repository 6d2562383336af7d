#include <benchmark/benchmark.h>

#include <uamcap/airspace.hpp>
#include <uamcap/ddpg.hpp>
#include <uamcap/rng.hpp>

#include <vector>

using namespace uam;

namespace {

Mlp desk_actor() {
    auto rng = make_engine(1, SeedStream::NetworkInit, 0);
    return init_random({kObservationDim, 64, 64, kActionDim}, OutputActivation::TanhScaled,
                       kMaxAccel, rng);
}

Mlp paper_actor() {
    auto rng = make_engine(1, SeedStream::NetworkInit, 1);
    return init_random({kObservationDim, 300, 400, kActionDim}, OutputActivation::TanhScaled,
                       kMaxAccel, rng);
}

std::vector<double> probe_input(int n) {
    auto rng = make_engine(2, SeedStream::Evaluation, 0);
    std::vector<double> x(n);
    for (auto& v : x) v = uniform_double(rng, -1.0, 1.0);
    return x;
}

void forward_bench(benchmark::State& state, const Mlp& net) {
    const auto x = probe_input(net.input_size());
    ForwardCache cache;
    for (auto _ : state) {
        auto y = forward(net, x, cache);
        benchmark::DoNotOptimize(y.data());
    }
}

void backward_bench(benchmark::State& state, Mlp net) {
    const auto x = probe_input(net.input_size());
    ForwardCache cache;
    GradientSet grads;
    grads.make_like(net);
    std::vector<double> ograd(static_cast<std::size_t>(net.output_size()), 1.0);
    for (auto _ : state) {
        forward(net, x, cache);
        backward(net, cache, ograd, grads);
        benchmark::DoNotOptimize(grads.weights.data());
    }
}

void BM_ForwardDesk(benchmark::State& state) { forward_bench(state, desk_actor()); }
void BM_ForwardPaper(benchmark::State& state) { forward_bench(state, paper_actor()); }
void BM_BackwardDesk(benchmark::State& state) { backward_bench(state, desk_actor()); }
void BM_BackwardPaper(benchmark::State& state) { backward_bench(state, paper_actor()); }

void BM_AgentLearnStep(benchmark::State& state) {
    DdpgHyperparams h;
    h.learn_start = 64;
    Agent agent = make_agent(kObservationDim, kActionDim, h, 3);
    auto rng = make_engine(3, SeedStream::Exploration, 0);
    for (int i = 0; i < 4096; ++i) {
        Transition t;
        for (auto& v : t.state) v = uniform_double(rng, -1.0, 1.0);
        t.action = {uniform_double(rng, -kMaxAccel, kMaxAccel),
                    uniform_double(rng, -kMaxAccel, kMaxAccel)};
        t.reward = uniform_double(rng, -2.0, 1.0);
        for (auto& v : t.next_state) v = uniform_double(rng, -1.0, 1.0);
        agent.buffer.push(t);
    }
    for (auto _ : state) {
        auto diag = agent_learn_step(agent);
        benchmark::DoNotOptimize(diag.critic_loss);
    }
}

void BM_EnvStepAndObserve(benchmark::State& state) {
    ScenarioConfig cfg;
    cfg.bounds = 4'000.0;
    cfg.n_statics = 2;
    cfg.n_dynamics = 1;
    cfg.n_ppzs = 1;
    auto rng = make_engine(4, SeedStream::Scenario, 0);
    const EnvInstance env = sample_scenario(cfg, rng);
    UavState u;
    u.position = env.origin;
    const Vec2 a{1.0, 0.5};
    for (auto _ : state) {
        UavState next = step_kinematics(u, a, env.dt);
        next.status = classify(env, next);
        auto obs = observed_state(env, next);
        benchmark::DoNotOptimize(obs.data());
        if (next.status != UavStatus::Flying) next.status = UavStatus::Flying;
        if (!env.inside(next.position)) next.position = env.origin;
        u = next;
        u.step_count = 0;  // keep the episode rolling forever
    }
}

BENCHMARK(BM_ForwardDesk)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ForwardPaper)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BackwardDesk)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BackwardPaper)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AgentLearnStep)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EnvStepAndObserve)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
