// Acceptance gate: nine end-to-end checks, one verdict line each. Every
// tolerance is a named constant below; the exit code is nonzero when any
// criterion fails. Training-backed criteria share their runs: the reward
// comparison supplies the obstacle-free arms, and the curriculum policy
// feeds both evaluation criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <uamcap/airspace.hpp>
#include <uamcap/checkpoint.hpp>
#include <uamcap/config.hpp>
#include <uamcap/ddpg.hpp>
#include <uamcap/evaluation.hpp>
#include <uamcap/rng.hpp>
#include <uamcap/training.hpp>

#include "finite_difference.hpp"

using namespace uam;

namespace {

constexpr double kFdStep = 1e-5;
constexpr double kGradRelTol = 1e-4;
constexpr double kGradTimeLimit = 10.0;       // seconds
constexpr double kExactTol = 1e-12;
constexpr double kDeterminismTimeLimit = 120.0;
constexpr int kTrainSeeds[3] = {1, 2, 3};
constexpr double kTrainSuccessFloor = 0.90;   // rolling(100), need 2 of 3 seeds
constexpr int kSeedsNeeded = 2;
constexpr double kModeGapFloor = 0.10;        // dot minus distance, final rolling
constexpr double kPpzSuccessFloor = 0.95;     // over 50 single-zone trials
constexpr double kPpzClearanceFloor = 1000.0; // meters, strict, successful trials
constexpr double kSpearmanCeiling = 0.0;
constexpr double kCapacityN10Low = 0.60;
constexpr double kCapacityN10High = 0.95;
constexpr int kCapacityTrials = 100;
constexpr int kFuzzSequences = 10'000;
constexpr int kFuzzSteps = 40;
constexpr double kFuzzTimeLimit = 5.0;
constexpr double kTransferTol = 1e-12;

struct Verdict {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

void progress(const std::string& line) {
    std::fprintf(stderr, "# %s\n", line.c_str());
    std::fflush(stderr);
}

// ---------------------------------------------------------------- criterion 1

Verdict check_gradients() {
    const auto t0 = std::chrono::steady_clock::now();
    auto arch_rng = make_engine(1001, SeedStream::NetworkInit, 0);
    double worst = 0.0;
    int params_checked = 0;
    for (int net_i = 0; net_i < 20; ++net_i) {
        std::vector<int> sizes;
        sizes.push_back(2 + static_cast<int>(arch_rng() % 5));  // inputs 2..6
        const int hidden_layers = 1 + static_cast<int>(arch_rng() % 2);
        for (int l = 0; l < hidden_layers; ++l) {
            sizes.push_back(4 + static_cast<int>(arch_rng() % 13));  // widths 4..16
        }
        sizes.push_back(1 + static_cast<int>(arch_rng() % 2));  // outputs 1..2
        const auto head = net_i % 2 == 0 ? OutputActivation::Linear : OutputActivation::TanhScaled;
        Mlp net = init_random(sizes, head, kMaxAccel, arch_rng);

        std::vector<double> input(static_cast<std::size_t>(sizes.front()));
        for (auto& v : input) v = uniform_double(arch_rng, -1.0, 1.0);
        std::vector<double> output_weights(static_cast<std::size_t>(sizes.back()));
        for (auto& v : output_weights) v = uniform_double(arch_rng, -1.0, 1.0);

        const auto pr = uam::testing::check_parameter_gradients(net, input, output_weights, kFdStep);
        const auto ir = uam::testing::check_input_gradients(net, input, output_weights, kFdStep);
        worst = std::max({worst, pr.max_rel_error, ir.max_rel_error});
        params_checked += pr.checked + ir.checked;
    }
    const double dt = seconds_since(t0);
    const bool pass = worst < kGradRelTol && dt < kGradTimeLimit;
    return {pass, fmt("max rel err %.2e (tol %.0e), %d derivatives on 20 nets, %.1f s (limit %.0f s)",
                      worst, kGradRelTol, params_checked, dt, kGradTimeLimit)};
}

// ---------------------------------------------------------------- criterion 2

Verdict check_unit_oracles() {
    std::vector<std::string> failures;
    auto expect = [&](bool ok, const char* what) {
        if (!ok) failures.emplace_back(what);
    };

    // Bellman target arithmetic against a critic pinned to a constant.
    {
        DdpgHyperparams h;
        h.hidden_sizes = {8, 8};
        h.batch_size = 4;
        h.learn_start = 4;
        h.replay_capacity = 64;
        Agent agent = make_agent(kObservationDim, kActionDim, h, 5001);
        for (auto& m : agent.critic_target.weights) std::fill(m.data.begin(), m.data.end(), 0.0);
        for (auto& b : agent.critic_target.biases) std::fill(b.begin(), b.end(), 0.0);
        agent.critic_target.biases.back()[0] = 2.0;
        std::vector<Transition> batch(3);
        batch[0].reward = 1.0;
        batch[1].reward = 100.0;
        batch[1].terminal = true;
        batch[2].reward = -5.0;
        std::vector<double> y;
        bellman_targets(agent, batch, y);
        expect(std::abs(y[0] - (1.0 + 0.9 * 2.0)) <= kExactTol, "bellman nonterminal");
        expect(std::abs(y[1] - 100.0) <= kExactTol, "bellman terminal mask");
        expect(std::abs(y[2] - (-5.0 + 0.9 * 2.0)) <= kExactTol, "bellman negative reward");
    }

    // MSE loss on a critic whose value is the first action component.
    {
        Mlp critic;
        critic.layer_sizes = {kObservationDim + kActionDim, 1};
        critic.weights.emplace_back(1, kObservationDim + kActionDim);
        critic.biases.push_back({0.0});
        critic.weights[0].at(0, kObservationDim) = 1.0;
        auto rng = make_engine(5002, SeedStream::NetworkInit, 0);
        Mlp actor = init_random({kObservationDim, 4, kActionDim}, OutputActivation::TanhScaled,
                                kMaxAccel, rng);
        DdpgHyperparams h;
        h.lr_critic = 0.0;
        h.batch_size = 2;
        h.learn_start = 2;
        h.replay_capacity = 16;
        Agent agent(actor, critic, actor, critic, h, 5003);
        std::vector<Transition> batch(2);
        batch[0].action = {0.0, 0.0};
        batch[1].action = {2.0, 0.0};
        const std::vector<double> y{1.0, 2.0};
        const double loss = critic_update(agent, batch, y);
        expect(std::abs(loss - 0.5) <= kExactTol, "mse loss value");
    }

    // Soft-update algebra at the tau extremes and the midpoint.
    {
        auto rng = make_engine(5004, SeedStream::NetworkInit, 0);
        Mlp a = init_random({3, 5, 2}, OutputActivation::Linear, 1.0, rng);
        Mlp b = init_random({3, 5, 2}, OutputActivation::Linear, 1.0, rng);
        Mlp target = b;
        soft_update(target, a, 0.0);
        bool tau0 = true;
        for (std::size_t l = 0; l < b.weights.size(); ++l) {
            tau0 = tau0 && target.weights[l].data == b.weights[l].data;
        }
        expect(tau0, "soft update tau=0 identity");
        soft_update(target, a, 1.0);
        bool tau1 = true;
        for (std::size_t l = 0; l < a.weights.size(); ++l) {
            tau1 = tau1 && target.weights[l].data == a.weights[l].data;
        }
        expect(tau1, "soft update tau=1 copy");
        target = b;
        soft_update(target, a, 0.5);
        double worst = 0.0;
        for (std::size_t l = 0; l < a.weights.size(); ++l) {
            for (std::size_t i = 0; i < a.weights[l].data.size(); ++i) {
                const double want = 0.5 * a.weights[l].data[i] + 0.5 * b.weights[l].data[i];
                worst = std::max(worst, std::abs(target.weights[l].data[i] - want));
            }
        }
        expect(worst <= kExactTol, "soft update tau=0.5 average");
    }

    // Replay FIFO eviction.
    {
        ReplayBuffer buf(2);
        Transition t;
        t.reward = 1.0;
        buf.push(t);
        t.reward = 2.0;
        buf.push(t);
        t.reward = 3.0;
        buf.push(t);
        expect(buf.size() == 2, "replay size after eviction");
        expect(std::abs(buf.at(0).reward - 2.0) <= kExactTol &&
                   std::abs(buf.at(1).reward - 3.0) <= kExactTol,
               "replay evicts oldest");
    }

    // Acceleration-box clamp.
    {
        const Vec2 a = clamp_action({5.0, -1.0});
        const Vec2 b = clamp_action({0.1, -9.0});
        expect(std::abs(a.x - kMaxAccel) <= kExactTol && std::abs(a.y + 1.0) <= kExactTol,
               "clamp upper");
        expect(std::abs(b.x - 0.1) <= kExactTol && std::abs(b.y + kMaxAccel) <= kExactTol,
               "clamp lower");
    }

    if (failures.empty()) {
        return {true, fmt("bellman, mse, soft update, fifo, clamp all exact to %.0e", kExactTol)};
    }
    std::string joined;
    for (const auto& f : failures) joined += (joined.empty() ? "" : ", ") + f;
    return {false, "failed: " + joined};
}

// ---------------------------------------------------------------- criterion 3

Verdict check_determinism() {
    const auto t0 = std::chrono::steady_clock::now();

    // Greedy replay of one seeded scenario, twice, byte for byte.
    ScenarioConfig scen;
    scen.bounds = 4'000.0;
    scen.n_statics = 2;
    scen.n_dynamics = 1;
    scen.n_ppzs = 1;
    scen.max_steps = 300;
    auto actor_rng = make_engine(6001, SeedStream::NetworkInit, 0);
    const Mlp actor = init_random({kObservationDim, 64, 64, kActionDim},
                                  OutputActivation::TanhScaled, kMaxAccel, actor_rng);
    std::string replay_csv[2];
    for (int rep = 0; rep < 2; ++rep) {
        auto rng = make_engine(6002, SeedStream::Scenario, 17);
        const EnvInstance env = sample_scenario(scen, rng);
        TrajectoryLog log;
        run_policy_episode(actor, env, RewardConfig{}, &log);
        replay_csv[rep] = timeseries_csv(log);
    }
    const bool replay_ok = replay_csv[0] == replay_csv[1] && !replay_csv[0].empty();

    // Fifty training episodes, twice, identical metric CSVs.
    RunConfig cfg = desk_scale_config();
    StageSpec stage = cfg.stages[0];
    stage.episodes = 50;
    std::string metrics[2];
    for (int rep = 0; rep < 2; ++rep) {
        Agent agent = make_agent(kObservationDim, kActionDim, cfg.ddpg,
                                 split_seed(6003, SeedStream::Stage, 0));
        const TrainingMetrics m = train_stage(agent, stage, 0, 6003, cfg.reward, cfg.metrics_window);
        metrics[rep] = metrics_csv(m);
    }
    const bool train_ok = metrics[0] == metrics[1] && metrics[0].size() > 100;

    const double dt = seconds_since(t0);
    const bool pass = replay_ok && train_ok && dt < kDeterminismTimeLimit;
    return {pass, fmt("replay CSVs %s (%zu bytes), 50-episode metrics %s (%zu bytes), %.1f s (limit %.0f s)",
                      replay_ok ? "identical" : "DIFFER", replay_csv[0].size(),
                      train_ok ? "identical" : "DIFFER", metrics[0].size(), dt,
                      kDeterminismTimeLimit)};
}

// ------------------------------------------------------- criteria 4 and 5

double max_full_window_success(const TrainingMetrics& m, int window) {
    int cur = 0;
    double best = 0.0;
    const auto& rows = m.rows;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].outcome == UavStatus::Success) ++cur;
        if (i >= static_cast<std::size_t>(window) &&
            rows[i - window].outcome == UavStatus::Success) {
            --cur;
        }
        if (i + 1 >= static_cast<std::size_t>(window)) {
            best = std::max(best, static_cast<double>(cur) / window);
        }
    }
    return best;
}

struct TrainingArms {
    std::vector<RewardComparison> per_seed;  // indexed like kTrainSeeds
};

TrainingArms run_training_arms() {
    TrainingArms arms;
    const RunConfig cfg = desk_scale_config();
    const StageSpec& stage = cfg.stages[0];
    for (int seed : kTrainSeeds) {
        progress(fmt("training both reward arms, %d episodes each, seed %d", stage.episodes, seed));
        arms.per_seed.push_back(
            compare_reward_modes(stage, 0, cfg.ddpg, cfg.reward, seed, cfg.metrics_window));
    }
    return arms;
}

Verdict check_training(const TrainingArms& arms) {
    const int window = desk_scale_config().metrics_window;
    int passing = 0;
    std::string per_seed;
    for (std::size_t i = 0; i < arms.per_seed.size(); ++i) {
        const TrainingMetrics& m = arms.per_seed[i].dot;
        const double reached = max_full_window_success(m, window);
        if (reached >= kTrainSuccessFloor) ++passing;
        per_seed += fmt("%sseed %d max %.2f final %.2f", i ? ", " : "", kTrainSeeds[i], reached,
                        m.final_rolling_success());
    }
    const bool pass = passing >= kSeedsNeeded;
    return {pass, fmt("%d of 3 seeds reached rolling success >= %.2f (%s)", passing,
                      kTrainSuccessFloor, per_seed.c_str())};
}

Verdict check_reward_modes(const TrainingArms& arms) {
    int passing = 0;
    std::string per_seed;
    for (std::size_t i = 0; i < arms.per_seed.size(); ++i) {
        const double dot = arms.per_seed[i].dot.final_rolling_success();
        const double dist = arms.per_seed[i].distance.final_rolling_success();
        if (dot - dist >= kModeGapFloor) ++passing;
        per_seed += fmt("%sseed %d dot %.2f dist %.2f", i ? ", " : "", kTrainSeeds[i], dot, dist);
    }
    const bool pass = passing >= kSeedsNeeded;
    return {pass, fmt("%d of 3 seed pairs with gap >= %.2f (%s)", passing, kModeGapFloor,
                      per_seed.c_str())};
}

// ------------------------------------------------------- criteria 6 and 7

Mlp train_curriculum(std::uint64_t master_seed) {
    const RunConfig cfg = desk_scale_config();
    Agent agent = make_agent(kObservationDim, kActionDim, cfg.ddpg,
                             split_seed(master_seed, SeedStream::Stage, 0));
    progress(fmt("curriculum stage '%s', %d episodes", cfg.stages[0].name.c_str(),
                 cfg.stages[0].episodes));
    train_stage(agent, cfg.stages[0], 0, master_seed, cfg.reward, cfg.metrics_window);

    const auto ckpt = std::filesystem::temp_directory_path() / "uamcap_acceptance_stage0.ckpt";
    save_agent(ckpt, agent);
    Agent next = load_agent(ckpt, split_seed(master_seed, SeedStream::Stage, 1));
    std::filesystem::remove(ckpt);

    progress(fmt("curriculum stage '%s', %d episodes", cfg.stages[1].name.c_str(),
                 cfg.stages[1].episodes));
    const TrainingMetrics m =
        train_stage(next, cfg.stages[1], 1, master_seed, cfg.reward, cfg.metrics_window);
    progress(fmt("curriculum done, final rolling success %.2f", m.final_rolling_success()));
    return next.actor;
}

Verdict check_single_ppz(const Mlp& actor, std::uint64_t master_seed) {
    const RunConfig cfg = desk_scale_config();
    SinglePpzSpec spec;
    spec.env = cfg.env;
    spec.env.n_statics = 0;
    spec.env.n_dynamics = 0;
    spec.env.n_ppzs = 1;
    spec.env.min_separation = cfg.evaluation.single_ppz_min_separation;
    spec.trials = cfg.evaluation.single_ppz_trials;
    spec.perturbation = cfg.evaluation.single_ppz_perturbation;

    const SinglePpzResult r = run_single_ppz(actor, spec, master_seed);
    const double rate = static_cast<double>(r.counts.success) / static_cast<double>(r.counts.total());
    double min_clearance = std::numeric_limits<double>::infinity();
    for (double c : r.success_min_clearance) min_clearance = std::min(min_clearance, c);
    const bool clearance_ok =
        r.counts.success == 0 || min_clearance > kPpzClearanceFloor;
    const bool pass = rate >= kPpzSuccessFloor && clearance_ok && r.counts.success > 0;
    return {pass, fmt("success %llu/%llu (floor %.2f), min zone clearance on successes %.0f m (floor %.0f m)",
                      static_cast<unsigned long long>(r.counts.success),
                      static_cast<unsigned long long>(r.counts.total()), kPpzSuccessFloor,
                      r.counts.success ? min_clearance : 0.0, kPpzClearanceFloor)};
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
    auto ranks = [](std::span<const double> v) {
        std::vector<int> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
        std::vector<double> rank(v.size());
        std::size_t i = 0;
        while (i < idx.size()) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = avg;
            i = j + 1;
        }
        return rank;
    };
    const std::vector<double> rx = ranks(xs);
    const std::vector<double> ry = ranks(ys);
    const double n = static_cast<double>(rx.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i] / n;
        my += ry[i] / n;
    }
    double num = 0, dx = 0, dy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    if (dx == 0.0 || dy == 0.0) return 0.0;
    return num / std::sqrt(dx * dy);
}

Verdict check_capacity(const Mlp& actor, std::uint64_t master_seed) {
    const RunConfig cfg = desk_scale_config();
    MultiUavSpec spec;
    spec.bounds = cfg.env.bounds;
    spec.origin_spacing = cfg.evaluation.origin_spacing;
    spec.min_separation = cfg.env.min_separation;
    spec.arrival_radius = cfg.env.arrival_radius;
    spec.max_steps = cfg.env.max_steps;
    spec.dt = cfg.env.dt;
    spec.sensing_radius = cfg.env.sensing_radius;

    progress("capacity sweep over fleet sizes {1,2,4,6,8,10}, 100 trials each");
    const std::vector<int> n_list = cfg.evaluation.capacity_n;
    const auto rows = capacity_sweep(actor, n_list, kCapacityTrials, spec, master_seed);

    std::vector<double> ns, rates;
    std::string table;
    for (const auto& row : rows) {
        ns.push_back(row.n_uavs);
        rates.push_back(row.success);
        table += fmt("%sN=%d %.2f", table.empty() ? "" : " ", row.n_uavs, row.success);
    }
    const double rho = spearman(ns, rates);
    const double n10 = rates.back();
    const bool pass = rho <= kSpearmanCeiling && n10 >= kCapacityN10Low && n10 <= kCapacityN10High;
    return {pass, fmt("spearman %.3f (ceiling %.1f), N=10 success %.2f (range [%.2f, %.2f]), rates: %s",
                      rho, kSpearmanCeiling, n10, kCapacityN10Low, kCapacityN10High,
                      table.c_str())};
}

// ---------------------------------------------------------------- criterion 8

Verdict check_kinematic_fuzz() {
    const auto t0 = std::chrono::steady_clock::now();
    auto rng = make_engine(8001, SeedStream::Evaluation, 0);
    double worst_speed = 0.0, worst_step = 0.0;
    for (int seq = 0; seq < kFuzzSequences; ++seq) {
        UavState u;
        u.position = {uniform_double(rng, 0.0, 10'000.0), uniform_double(rng, 0.0, 10'000.0)};
        u.velocity = {uniform_double(rng, -50.0, 50.0), uniform_double(rng, -50.0, 50.0)};
        const double dt = 1.0;
        for (int step = 0; step < kFuzzSteps; ++step) {
            const Vec2 a = clamp_action(
                {uniform_double(rng, -3.0 * kMaxAccel, 3.0 * kMaxAccel),
                 uniform_double(rng, -3.0 * kMaxAccel, 3.0 * kMaxAccel)});
            const Vec2 before = u.position;
            u = step_kinematics(u, a, dt);
            worst_speed = std::max(worst_speed, u.velocity.norm());
            worst_step = std::max(worst_step, distance(u.position, before));
        }
    }
    const double dt = seconds_since(t0);
    const bool pass = worst_speed <= kMaxSpeed + 1e-9 && worst_step <= kMaxSpeed * 1.0 + 1e-9 &&
                      dt < kFuzzTimeLimit;
    return {pass, fmt("%d sequences x %d steps: max speed %.6f (cap %.0f), max step %.6f m, %.2f s (limit %.0f s)",
                      kFuzzSequences, kFuzzSteps, worst_speed, kMaxSpeed, worst_step, dt,
                      kFuzzTimeLimit)};
}

// ---------------------------------------------------------------- criterion 9

Verdict check_checkpoints() {
    auto rng = make_engine(9001, SeedStream::NetworkInit, 0);
    Mlp net = init_random({kObservationDim, 32, 16, kActionDim}, OutputActivation::TanhScaled,
                          kMaxAccel, rng);
    std::ostringstream s1(std::ios::binary);
    save_mlp(s1, net);
    std::istringstream in(s1.str(), std::ios::binary);
    Mlp loaded = load_mlp(in);
    std::ostringstream s2(std::ios::binary);
    save_mlp(s2, loaded);
    const bool bytes_ok = s1.str() == s2.str() && !s1.str().empty();

    DdpgHyperparams h;
    h.hidden_sizes = {16, 16};
    Agent donor = make_agent(kObservationDim, kActionDim, h, 9002);
    const auto path = std::filesystem::temp_directory_path() / "uamcap_acceptance_agent.ckpt";
    save_agent(path, donor);
    Agent fresh = load_agent(path, 9003);
    std::filesystem::remove(path);

    double worst = 0.0;
    auto probe = make_engine(9004, SeedStream::Evaluation, 0);
    ForwardCache c1, c2;
    for (int i = 0; i < 100; ++i) {
        std::vector<double> x(kObservationDim);
        for (auto& v : x) v = uniform_double(probe, -1.0, 1.0);
        const auto y1 = forward(donor.actor, x, c1);
        const auto y2 = forward(fresh.actor, x, c2);
        for (std::size_t k = 0; k < y1.size(); ++k) {
            worst = std::max(worst, std::abs(y1[k] - y2[k]));
        }
    }
    const bool transfer_ok = worst <= kTransferTol;
    const bool pass = bytes_ok && transfer_ok;
    return {pass, fmt("save/load/save %s (%zu bytes), transfer max |delta| %.1e (tol %.0e) on 100 states",
                      bytes_ok ? "byte-identical" : "DIFFERS", s1.str().size(), worst,
                      kTransferTol)};
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* title;
        Verdict verdict;
    };
    std::vector<Entry> entries;

    entries.push_back({1, "analytic gradients vs finite differences", check_gradients()});
    entries.push_back({2, "unit oracles exact", check_unit_oracles()});
    entries.push_back({3, "seeded replay and training determinism", check_determinism()});

    const TrainingArms arms = run_training_arms();
    entries.push_back({4, "obstacle-free training success", check_training(arms)});
    entries.push_back({5, "heading shaping beats distance shaping", check_reward_modes(arms)});

    const std::uint64_t curriculum_seed = 1;
    const Mlp policy = train_curriculum(curriculum_seed);
    entries.push_back({6, "single-zone avoidance suite", check_single_ppz(policy, curriculum_seed)});
    entries.push_back({7, "fleet-size capacity trend", check_capacity(policy, curriculum_seed)});

    entries.push_back({8, "kinematic invariant fuzz", check_kinematic_fuzz()});
    entries.push_back({9, "checkpoint round-trip and transfer", check_checkpoints()});

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.id < b.id;
    });
    bool all = true;
    for (const auto& e : entries) {
        all = all && e.verdict.pass;
        std::printf("criterion %d (%s): %s | %s\n", e.id, e.title,
                    e.verdict.pass ? "PASS" : "FAIL", e.verdict.detail.c_str());
    }
    std::printf("acceptance: %s\n", all ? "ALL CRITERIA PASS" : "FAILURES PRESENT");
    return all ? 0 : 1;
}
