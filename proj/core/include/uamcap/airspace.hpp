#pragma once

#include <array>
#include <random>
#include <span>
#include <vector>

#include "uamcap/vec2.hpp"

namespace uam {

inline constexpr double kGravity = 9.81;            // m/s^2
inline constexpr double kMaxAccel = 0.3 * kGravity; // 2.943 m/s^2 per axis
inline constexpr double kMaxSpeed = 70.0;           // m/s
inline constexpr int kObservationDim = 8;
inline constexpr int kActionDim = 2;

enum class UavStatus { Flying, Success, Collision, PpzEntered, Exited, Timeout };

const char* to_string(UavStatus s);

struct UavState {
    Vec2 position;
    Vec2 velocity;
    UavStatus status = UavStatus::Flying;
    int step_count = 0;
};

struct StaticObstacle {
    Vec2 center;
    double safety_radius = 50.0;
};

/// Oscillates along `direction` about `anchor` as a triangle wave of
/// half-amplitude A, so its position never leaves anchor +- A*direction.
struct DynamicObstacle {
    Vec2 anchor;
    Vec2 direction;  // unit
    double speed = 25.0;  // m/s, in [20, 50]
    double half_amplitude = 500.0;
    double phase_offset = 0.0;  // meters along the wave, in [-A, +A]
    double safety_radius = 50.0;

    Vec2 position_at(double t) const;
};

/// Linear zigzag through 0, +A, 0, -A with period 4A in its argument.
double triangle_wave(double s, double half_amplitude);

struct Ppz {
    Vec2 center;
    double safety_radius = 1000.0;
};

/// One episode's world: a [0, bounds]^2 square, its hazards, and the
/// origin/destination pair. Instances are immutable during an episode;
/// dynamic-obstacle positions are a pure function of time.
struct EnvInstance {
    double bounds = 10'000.0;
    std::vector<StaticObstacle> statics;
    std::vector<DynamicObstacle> dynamics;
    std::vector<Ppz> ppzs;
    Vec2 origin;
    Vec2 destination;
    double arrival_radius = 100.0;
    int max_steps = 800;
    double dt = 1.0;
    double sensing_radius = 2'000.0;

    double time_of(const UavState& u) const { return u.step_count * dt; }
    bool has_entities() const { return !statics.empty() || !dynamics.empty() || !ppzs.empty(); }
    bool inside(Vec2 p) const {
        return p.x >= 0.0 && p.x <= bounds && p.y >= 0.0 && p.y <= bounds;
    }
};

/// Offset from a query point to the closest entity center, if any.
struct NearestEntity {
    Vec2 offset;
    double distance = 0.0;
    int index = -1;
    bool found = false;
};

struct Observation {
    Vec2 to_destination;
    Vec2 velocity;
    Vec2 to_nearest_obstacle;
    Vec2 to_nearest_ppz;
    bool normalized = false;
};

std::array<double, kObservationDim> observation_vector(const Observation& obs);

/// Per-axis clamp to [-0.3g, +0.3g]. Throws std::invalid_argument on a
/// non-finite component.
Vec2 clamp_action(Vec2 a);

/// Semi-implicit Euler: v' = v + a*dt, rescaled to the 70 m/s cap
/// (direction preserved), then p' = p + v'*dt. The vehicle must still be
/// flying and the action already inside the box.
UavState step_kinematics(const UavState& u, Vec2 a, double dt);

/// Ties broken by lowest index; empty list -> found = false.
NearestEntity nearest_entity_vector(Vec2 p, std::span<const Vec2> centers);

/// Closest of statics and dynamics (the latter evaluated at time t).
NearestEntity nearest_obstacle(const EnvInstance& env, Vec2 p, double t);
NearestEntity nearest_ppz(const EnvInstance& env, Vec2 p);

/// Priority: Collision > PpzEntered > Exited > Success > Timeout > Flying.
/// Collision/PPZ entry use strict < against the safety radius, arrival
/// uses <= against arrival_radius, timeout uses >= max_steps. Dynamic
/// obstacles are evaluated at env.time_of(u).
UavStatus classify(const EnvInstance& env, const UavState& u);

struct ScenarioConfig {
    double bounds = 10'000.0;
    int n_statics = 0;
    int n_dynamics = 0;
    int n_ppzs = 0;
    double min_separation = 1'000.0;  // origin to destination
    double arrival_radius = 100.0;
    int max_steps = 800;
    double dt = 1.0;
    double sensing_radius = 2'000.0;
    double static_safety_radius = 50.0;
    double dynamic_safety_radius = 50.0;
    double ppz_safety_radius = 1'000.0;
    double dynamic_half_amplitude = 500.0;
    double dynamic_speed_min = 20.0;
    double dynamic_speed_max = 50.0;
    int rejection_budget = 10'000;
    // Probability that a protected zone is seeded on the origin->destination
    // corridor instead of uniformly, so a trip cannot simply go around it.
    double ppz_on_path = 0.0;

    void validate() const;  // throws std::invalid_argument naming the field
};

/// Rejection sampling: origin/destination first (uniform, >= min_separation
/// apart), then PPZs, statics, dynamics. An entity is rejected when its
/// center sits within its own safety radius of origin or destination, or
/// when its safety disk overlaps an already placed one. With probability
/// ppz_on_path a zone center is drawn near the middle of the trip segment
/// (falling back to a uniform draw when no admissible corridor spot exists).
/// Dynamic obstacles oscillate perpendicular to the origin->destination
/// line. Exhausting the shared try budget throws std::runtime_error
/// (overcrowded config).
EnvInstance sample_scenario(const ScenarioConfig& cfg, std::mt19937_64& rng);

/// Saturation rule shared by every observation: an entity channel holds the
/// true offset when something lies within sensing_radius, otherwise a
/// canonical "nothing nearby" vector of magnitude sensing_radius pointing
/// away from the velocity (falling back to away-from-destination, then
/// (-1, 0), when directions degenerate).
Observation make_observation(const EnvInstance& env, const UavState& u,
                             const NearestEntity& obstacle, const NearestEntity& ppz);

/// Raw SI observation against the environment's own entities.
Observation build_observation(const EnvInstance& env, const UavState& u);

/// Distances divided by bounds, velocity by the 70 m/s cap.
Observation normalize_observation(const Observation& obs, const EnvInstance& env);

/// build + normalize + flatten, as fed to the networks.
std::array<double, kObservationDim> observed_state(const EnvInstance& env, const UavState& u);

}  // namespace uam
