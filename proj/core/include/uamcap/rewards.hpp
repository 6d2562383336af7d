#pragma once

#include "uamcap/airspace.hpp"
#include "uamcap/vec2.hpp"

namespace uam {

enum class ShapingMode { Distance, Dot };

const char* to_string(ShapingMode m);

struct RewardConfig {
    double r1_success = 100.0;
    double r2_exit = -100.0;
    double r3_collision = -100.0;
    double r4_ppz = -100.0;
    // heading alignment term: alpha*c - beta when c > threshold, else gamma*c - beta
    double dot_alpha = 2.0;
    double dot_beta = 1.0;
    double dot_gamma = 1.0;
    double dot_threshold = 0.9;
    // distance term: beta*exp(-alpha*D) - beta
    double dist_alpha = 2e-4;
    double dist_beta = 1.0;
    // avoidance terms, active only inside the alert radii
    double avoid_weight_obstacle = 0.5;
    double avoid_weight_ppz = 0.5;
    double alert_radius_obstacle = 500.0;
    double alert_radius_ppz = 1'500.0;
    ShapingMode shaping = ShapingMode::Dot;

    void validate() const;  // throws std::invalid_argument naming the field
};

/// Inputs for one step's reward: where the vehicle was, where it went, and
/// what was near it before the move. Entity offsets are measured at the
/// pre-move position and time.
struct StepContext {
    Vec2 prev_position;
    Vec2 new_position;
    Vec2 destination;
    NearestEntity nearest_obstacle;
    NearestEntity nearest_ppz;
    UavStatus status = UavStatus::Flying;
};

/// beta*exp(-alpha*D) - beta: 0 at the destination, -> -beta far away.
double reward_distance(double d_f, const RewardConfig& cfg);

/// Piecewise-linear in c = e_f . e_d with a bonus slope above the
/// threshold. A zero e_d (no displacement) contributes c = 0.
double reward_dot(Vec2 e_f, Vec2 e_d, const RewardConfig& cfg);

/// Terminal success/exit terms plus the configured shaping term; for the
/// entity-free environment.
double total_reward_simple(const StepContext& ctx, const RewardConfig& cfg);

/// All four terminal terms, heading shaping, and the gated obstacle/PPZ
/// avoidance terms; for environments with entities.
double total_reward_full(const StepContext& ctx, const RewardConfig& cfg);

/// total_reward_full when the environment has entities, else
/// total_reward_simple.
double step_reward(const StepContext& ctx, const RewardConfig& cfg, bool has_entities);

}  // namespace uam
