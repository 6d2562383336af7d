#include "uamcap/training.hpp"

#include <deque>
#include <fstream>
#include <stdexcept>

#include "uamcap/csv.hpp"
#include "uamcap/rng.hpp"

namespace uam {

std::vector<OutcomeRates> rolling_rates(std::span<const UavStatus> outcomes, int window) {
    if (window < 1) throw std::invalid_argument("rolling_rates: window must be at least 1");
    std::vector<OutcomeRates> rates;
    rates.reserve(outcomes.size());
    std::deque<UavStatus> recent;
    int counts[5] = {0, 0, 0, 0, 0};
    auto slot = [](UavStatus s) -> int {
        switch (s) {
            case UavStatus::Success: return 0;
            case UavStatus::Collision: return 1;
            case UavStatus::PpzEntered: return 2;
            case UavStatus::Exited: return 3;
            case UavStatus::Timeout: return 4;
            default: throw std::invalid_argument("rolling_rates: non-terminal outcome");
        }
    };
    for (UavStatus s : outcomes) {
        recent.push_back(s);
        ++counts[slot(s)];
        if (static_cast<int>(recent.size()) > window) {
            --counts[slot(recent.front())];
            recent.pop_front();
        }
        const double n = static_cast<double>(recent.size());
        rates.push_back({counts[0] / n, counts[1] / n, counts[2] / n, counts[3] / n, counts[4] / n});
    }
    return rates;
}

std::string metrics_csv(const TrainingMetrics& metrics) {
    std::string out =
        "episode,outcome,steps,cumulative_reward,rolling_success,rolling_collision,"
        "rolling_ppz,rolling_exit,epsilon\n";
    for (const EpisodeRow& r : metrics.rows) {
        out += std::to_string(r.episode);
        out += ',';
        out += to_string(r.outcome);
        out += ',';
        out += std::to_string(r.steps);
        out += ',';
        append_double(out, r.cumulative_reward);
        out += ',';
        append_double(out, r.rolling.success);
        out += ',';
        append_double(out, r.rolling.collision);
        out += ',';
        append_double(out, r.rolling.ppz);
        out += ',';
        append_double(out, r.rolling.exit);
        out += ',';
        append_double(out, r.epsilon);
        out += '\n';
    }
    return out;
}

void write_metrics_csv(const TrainingMetrics& metrics, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("metrics: cannot open " + path.string() + " for writing");
    out << metrics_csv(metrics);
    if (!out) throw std::runtime_error("metrics: write failed for " + path.string());
}

namespace {

// Shared episode loop. Policy: (obs vector, state) -> acceleration.
// OnStep: (state obs, action, reward, next obs, terminal) after each move.
template <typename Policy, typename OnStep>
EpisodeResult roll(const EnvInstance& env, const RewardConfig& reward, Policy&& policy,
                   OnStep&& on_step, TrajectoryLog* log, int uav_id) {
    const bool entities = env.has_entities();
    EpisodeResult result;
    UavState u;
    u.position = env.origin;
    u.status = classify(env, u);
    auto obs = observed_state(env, u);

    while (u.status == UavStatus::Flying) {
        const Vec2 a = clamp_action(policy(obs, u));
        const double t_prev = env.time_of(u);
        const NearestEntity obst = nearest_obstacle(env, u.position, t_prev);
        const NearestEntity ppz = nearest_ppz(env, u.position);
        if (log) {
            TrajectoryRow row;
            row.t = t_prev;
            row.uav_id = uav_id;
            row.position = u.position;
            row.velocity = u.velocity;
            row.acceleration = a;
            row.d_dest = distance(u.position, env.destination);
            if (obst.found) row.d_obst = obst.distance;
            if (ppz.found) row.d_ppz = ppz.distance;
            log->rows.push_back(row);
        }

        UavState next = step_kinematics(u, a, env.dt);
        next.status = classify(env, next);

        StepContext ctx;
        ctx.prev_position = u.position;
        ctx.new_position = next.position;
        ctx.destination = env.destination;
        ctx.nearest_obstacle = obst;
        ctx.nearest_ppz = ppz;
        ctx.status = next.status;
        const double r = step_reward(ctx, reward, entities);
        result.cumulative_reward += r;

        const auto next_obs = observed_state(env, next);
        on_step(obs, a, r, next_obs, next.status != UavStatus::Flying);

        u = next;
        obs = next_obs;
    }
    result.outcome = u.status;
    result.steps = u.step_count;
    return result;
}

}  // namespace

EpisodeResult run_episode(Agent& agent, const EnvInstance& env, const RewardConfig& reward,
                          double epsilon, std::mt19937_64& exploration_rng, bool learn,
                          TrajectoryLog* log, int uav_id) {
    auto policy = [&](const std::array<double, kObservationDim>& obs, const UavState&) {
        return select_action(agent, obs, epsilon, exploration_rng);
    };
    auto on_step = [&](const std::array<double, kObservationDim>& s, Vec2 a, double r,
                       const std::array<double, kObservationDim>& s2, bool terminal) {
        agent.buffer.push({s, a, r, s2, terminal});
        if (learn) agent_learn_step(agent);
    };
    return roll(env, reward, policy, on_step, log, uav_id);
}

EpisodeResult run_policy_episode(const Mlp& actor, const EnvInstance& env,
                                 const RewardConfig& reward, TrajectoryLog* log, int uav_id) {
    ForwardCache cache;
    auto policy = [&](const std::array<double, kObservationDim>& obs, const UavState&) {
        auto out = forward(actor, obs, cache);
        return Vec2{out[0], out[1]};
    };
    auto on_step = [](const auto&, Vec2, double, const auto&, bool) {};
    return roll(env, reward, policy, on_step, log, uav_id);
}

EpisodeResult run_scripted_episode(const ScriptedPolicy& policy, const EnvInstance& env,
                                   const RewardConfig& reward, TrajectoryLog* log, int uav_id) {
    auto wrapped = [&](const std::array<double, kObservationDim>&, const UavState& u) {
        return policy(env, u);
    };
    auto on_step = [](const auto&, Vec2, double, const auto&, bool) {};
    return roll(env, reward, wrapped, on_step, log, uav_id);
}

TrainingMetrics train_stage(Agent& agent, const StageSpec& stage, int stage_index,
                            std::uint64_t master_seed, RewardConfig reward, int metrics_window,
                            const std::function<void(const EpisodeRow&)>& on_episode) {
    if (stage.episodes < 1) throw std::invalid_argument("train_stage: episodes must be at least 1");
    reward.shaping = stage.reward_mode;
    const std::uint64_t stage_seed =
        split_seed(master_seed, SeedStream::Stage, static_cast<std::uint64_t>(stage_index));

    TrainingMetrics metrics;
    metrics.window = metrics_window;
    metrics.rows.reserve(static_cast<std::size_t>(stage.episodes));
    std::deque<UavStatus> recent;
    int counts[5] = {0, 0, 0, 0, 0};
    auto slot = [](UavStatus s) {
        return s == UavStatus::Success     ? 0
               : s == UavStatus::Collision ? 1
               : s == UavStatus::PpzEntered ? 2
               : s == UavStatus::Exited    ? 3
                                           : 4;
    };

    for (int ep = 0; ep < stage.episodes; ++ep) {
        auto scenario_rng = make_engine(stage_seed, SeedStream::Scenario, static_cast<std::uint64_t>(ep));
        auto exploration_rng =
            make_engine(stage_seed, SeedStream::Exploration, static_cast<std::uint64_t>(ep));
        const EnvInstance env = sample_scenario(stage.scenario, scenario_rng);
        const double eps = epsilon_at(agent.hyper, ep, stage.episodes);
        const EpisodeResult r = run_episode(agent, env, reward, eps, exploration_rng, true);

        recent.push_back(r.outcome);
        ++counts[slot(r.outcome)];
        if (static_cast<int>(recent.size()) > metrics_window) {
            --counts[slot(recent.front())];
            recent.pop_front();
        }
        const double n = static_cast<double>(recent.size());
        EpisodeRow row;
        row.episode = ep;
        row.outcome = r.outcome;
        row.steps = r.steps;
        row.cumulative_reward = r.cumulative_reward;
        row.rolling = {counts[0] / n, counts[1] / n, counts[2] / n, counts[3] / n, counts[4] / n};
        row.epsilon = eps;
        metrics.rows.push_back(row);
        if (on_episode) on_episode(row);
    }
    return metrics;
}

RewardComparison compare_reward_modes(const StageSpec& stage, int stage_index,
                                      const DdpgHyperparams& hyper, const RewardConfig& reward,
                                      std::uint64_t master_seed, int metrics_window) {
    RewardComparison cmp;
    const std::uint64_t stage_seed =
        split_seed(master_seed, SeedStream::Stage, static_cast<std::uint64_t>(stage_index));
    for (ShapingMode mode : {ShapingMode::Dot, ShapingMode::Distance}) {
        Agent agent = make_agent(kObservationDim, kActionDim, hyper, stage_seed);
        StageSpec arm = stage;
        arm.reward_mode = mode;
        TrainingMetrics m = train_stage(agent, arm, stage_index, master_seed, reward, metrics_window);
        (mode == ShapingMode::Dot ? cmp.dot : cmp.distance) = std::move(m);
    }
    return cmp;
}

}  // namespace uam
