#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "uamcap/airspace.hpp"
#include "uamcap/ddpg.hpp"
#include "uamcap/rewards.hpp"
#include "uamcap/trajectory.hpp"

namespace uam {

/// One curriculum stage: how episodes are sampled, which shaping variant
/// scores them, and where the starting parameters come from.
struct StageSpec {
    std::string name = "stage";
    int episodes = 1;
    ScenarioConfig scenario;
    ShapingMode reward_mode = ShapingMode::Dot;
    std::string init = "random";  // "random" | "previous" | a checkpoint path
};

struct EpisodeResult {
    UavStatus outcome = UavStatus::Flying;
    int steps = 0;
    double cumulative_reward = 0.0;
};

struct OutcomeRates {
    double success = 0.0;
    double collision = 0.0;
    double ppz = 0.0;
    double exit = 0.0;
    double timeout = 0.0;
};

/// Rates over the trailing `window` episodes (all available history while
/// fewer exist); the five rates sum to 1 at every index.
std::vector<OutcomeRates> rolling_rates(std::span<const UavStatus> outcomes, int window);

struct EpisodeRow {
    int episode = 0;
    UavStatus outcome = UavStatus::Flying;
    int steps = 0;
    double cumulative_reward = 0.0;
    OutcomeRates rolling;
    double epsilon = 0.0;
};

struct TrainingMetrics {
    int window = 100;
    std::vector<EpisodeRow> rows;

    double final_rolling_success() const { return rows.empty() ? 0.0 : rows.back().rolling.success; }
};

/// CSV columns: episode,outcome,steps,cumulative_reward,rolling_success,
/// rolling_collision,rolling_ppz,rolling_exit,epsilon.
std::string metrics_csv(const TrainingMetrics& metrics);
void write_metrics_csv(const TrainingMetrics& metrics, const std::filesystem::path& path);

/// One rollout with epsilon-greedy exploration; every transition is stored
/// and, when learn is set, followed by one learn step.
EpisodeResult run_episode(Agent& agent, const EnvInstance& env, const RewardConfig& reward,
                          double epsilon, std::mt19937_64& exploration_rng, bool learn,
                          TrajectoryLog* log = nullptr, int uav_id = 0);

/// Greedy rollout of a frozen actor; nothing is stored or learned.
EpisodeResult run_policy_episode(const Mlp& actor, const EnvInstance& env,
                                 const RewardConfig& reward, TrajectoryLog* log = nullptr,
                                 int uav_id = 0);

/// Rollout of a hand-written controller, for oracles and sanity checks.
using ScriptedPolicy = std::function<Vec2(const EnvInstance&, const UavState&)>;
EpisodeResult run_scripted_episode(const ScriptedPolicy& policy, const EnvInstance& env,
                                   const RewardConfig& reward, TrajectoryLog* log = nullptr,
                                   int uav_id = 0);

/// M episodes of fresh scenarios under the stage's shaping mode. Episode e
/// of stage s draws its scenario and exploration engines from
/// (master, stage s, episode e), so any single episode replays in
/// isolation.
TrainingMetrics train_stage(Agent& agent, const StageSpec& stage, int stage_index,
                            std::uint64_t master_seed, RewardConfig reward, int metrics_window,
                            const std::function<void(const EpisodeRow&)>& on_episode = {});

/// Two identically seeded and budgeted runs of the same stage differing
/// only in shaping mode.
struct RewardComparison {
    TrainingMetrics dot;
    TrainingMetrics distance;
};
RewardComparison compare_reward_modes(const StageSpec& stage, int stage_index,
                                      const DdpgHyperparams& hyper, const RewardConfig& reward,
                                      std::uint64_t master_seed, int metrics_window);

}  // namespace uam
