#include "uamcap/rewards.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace uam {

const char* to_string(ShapingMode m) {
    return m == ShapingMode::Distance ? "distance" : "dot";
}

void RewardConfig::validate() const {
    auto fail = [](const char* what) { throw std::invalid_argument(std::string("reward: ") + what); };
    if (!(dot_threshold > 0.0 && dot_threshold < 1.0)) fail("dot_threshold must be in (0, 1)");
    if (!(dist_alpha > 0.0)) fail("dist_alpha must be positive");
    if (!(alert_radius_obstacle > 0.0)) fail("alert_radius_obstacle must be positive");
    if (!(alert_radius_ppz > 0.0)) fail("alert_radius_ppz must be positive");
}

double reward_distance(double d_f, const RewardConfig& cfg) {
    return cfg.dist_beta * std::exp(-cfg.dist_alpha * d_f) - cfg.dist_beta;
}

double reward_dot(Vec2 e_f, Vec2 e_d, const RewardConfig& cfg) {
    const double c = e_f.dot(e_d);
    if (c > cfg.dot_threshold) return cfg.dot_alpha * c - cfg.dot_beta;
    return cfg.dot_gamma * c - cfg.dot_beta;
}

namespace {

double shaping_toward_destination(const StepContext& ctx, const RewardConfig& cfg, ShapingMode mode) {
    if (mode == ShapingMode::Distance) {
        return reward_distance(distance(ctx.new_position, ctx.destination), cfg);
    }
    const Vec2 e_f = (ctx.destination - ctx.prev_position).normalized();
    const Vec2 e_d = (ctx.new_position - ctx.prev_position).normalized();
    return reward_dot(e_f, e_d, cfg);
}

// kappa * (e_away . e_d) when the entity sits inside the alert radius.
double avoidance_term(const StepContext& ctx, const NearestEntity& e, double kappa, double alert_radius) {
    if (!e.found || e.distance >= alert_radius) return 0.0;
    const Vec2 e_away = (-e.offset).normalized();
    const Vec2 e_d = (ctx.new_position - ctx.prev_position).normalized();
    return kappa * e_away.dot(e_d);
}

}  // namespace

double total_reward_simple(const StepContext& ctx, const RewardConfig& cfg) {
    double r = 0.0;
    if (ctx.status == UavStatus::Success) r += cfg.r1_success;
    if (ctx.status == UavStatus::Exited) r += cfg.r2_exit;
    return r + shaping_toward_destination(ctx, cfg, cfg.shaping);
}

double total_reward_full(const StepContext& ctx, const RewardConfig& cfg) {
    double r = 0.0;
    switch (ctx.status) {
        case UavStatus::Success: r += cfg.r1_success; break;
        case UavStatus::Exited: r += cfg.r2_exit; break;
        case UavStatus::Collision: r += cfg.r3_collision; break;
        case UavStatus::PpzEntered: r += cfg.r4_ppz; break;
        default: break;
    }
    r += shaping_toward_destination(ctx, cfg, ShapingMode::Dot);
    r += avoidance_term(ctx, ctx.nearest_obstacle, cfg.avoid_weight_obstacle, cfg.alert_radius_obstacle);
    r += avoidance_term(ctx, ctx.nearest_ppz, cfg.avoid_weight_ppz, cfg.alert_radius_ppz);
    return r;
}

double step_reward(const StepContext& ctx, const RewardConfig& cfg, bool has_entities) {
    return has_entities ? total_reward_full(ctx, cfg) : total_reward_simple(ctx, cfg);
}

}  // namespace uam
