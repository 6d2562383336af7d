#include "uamcap/airspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "uamcap/rng.hpp"

namespace uam {

const char* to_string(UavStatus s) {
    switch (s) {
        case UavStatus::Flying: return "flying";
        case UavStatus::Success: return "success";
        case UavStatus::Collision: return "collision";
        case UavStatus::PpzEntered: return "ppz";
        case UavStatus::Exited: return "exit";
        case UavStatus::Timeout: return "timeout";
    }
    return "?";
}

double triangle_wave(double s, double half_amplitude) {
    const double a = half_amplitude;
    if (a <= 0.0) return 0.0;
    double u = std::fmod(s, 4.0 * a);
    if (u < 0.0) u += 4.0 * a;
    if (u < a) return u;
    if (u < 3.0 * a) return 2.0 * a - u;
    return u - 4.0 * a;
}

Vec2 DynamicObstacle::position_at(double t) const {
    return anchor + direction * triangle_wave(speed * t + phase_offset, half_amplitude);
}

std::array<double, kObservationDim> observation_vector(const Observation& obs) {
    return {obs.to_destination.x,     obs.to_destination.y,
            obs.velocity.x,           obs.velocity.y,
            obs.to_nearest_obstacle.x, obs.to_nearest_obstacle.y,
            obs.to_nearest_ppz.x,     obs.to_nearest_ppz.y};
}

Vec2 clamp_action(Vec2 a) {
    if (!a.finite()) throw std::invalid_argument("clamp_action: non-finite acceleration");
    return {std::clamp(a.x, -kMaxAccel, kMaxAccel), std::clamp(a.y, -kMaxAccel, kMaxAccel)};
}

UavState step_kinematics(const UavState& u, Vec2 a, double dt) {
    if (u.status != UavStatus::Flying) {
        throw std::invalid_argument("step_kinematics: vehicle is already terminal");
    }
    if (!a.finite() || !(dt > 0.0)) {
        throw std::invalid_argument("step_kinematics: bad acceleration or time step");
    }
    if (std::abs(a.x) > kMaxAccel + 1e-9 || std::abs(a.y) > kMaxAccel + 1e-9) {
        throw std::invalid_argument("step_kinematics: acceleration outside the 0.3g box");
    }
    UavState next = u;
    next.velocity = u.velocity + a * dt;
    const double speed = next.velocity.norm();
    if (speed > kMaxSpeed) {
        next.velocity = next.velocity * (kMaxSpeed / speed);
    }
    next.position = u.position + next.velocity * dt;
    next.step_count = u.step_count + 1;
    return next;
}

NearestEntity nearest_entity_vector(Vec2 p, std::span<const Vec2> centers) {
    NearestEntity best;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const double d = distance(p, centers[i]);
        if (!best.found || d < best.distance) {
            best.offset = centers[i] - p;
            best.distance = d;
            best.index = static_cast<int>(i);
            best.found = true;
        }
    }
    return best;
}

NearestEntity nearest_obstacle(const EnvInstance& env, Vec2 p, double t) {
    NearestEntity best;
    int idx = 0;
    auto consider = [&](Vec2 center) {
        const double d = distance(p, center);
        if (!best.found || d < best.distance) {
            best.offset = center - p;
            best.distance = d;
            best.index = idx;
            best.found = true;
        }
        ++idx;
    };
    for (const auto& s : env.statics) consider(s.center);
    for (const auto& d : env.dynamics) consider(d.position_at(t));
    return best;
}

NearestEntity nearest_ppz(const EnvInstance& env, Vec2 p) {
    NearestEntity best;
    for (std::size_t i = 0; i < env.ppzs.size(); ++i) {
        const double d = distance(p, env.ppzs[i].center);
        if (!best.found || d < best.distance) {
            best.offset = env.ppzs[i].center - p;
            best.distance = d;
            best.index = static_cast<int>(i);
            best.found = true;
        }
    }
    return best;
}

UavStatus classify(const EnvInstance& env, const UavState& u) {
    const double t = env.time_of(u);
    for (const auto& s : env.statics) {
        if (distance(u.position, s.center) < s.safety_radius) return UavStatus::Collision;
    }
    for (const auto& d : env.dynamics) {
        if (distance(u.position, d.position_at(t)) < d.safety_radius) return UavStatus::Collision;
    }
    for (const auto& z : env.ppzs) {
        if (distance(u.position, z.center) < z.safety_radius) return UavStatus::PpzEntered;
    }
    if (!env.inside(u.position)) return UavStatus::Exited;
    if (distance(u.position, env.destination) <= env.arrival_radius) return UavStatus::Success;
    if (u.step_count >= env.max_steps) return UavStatus::Timeout;
    return UavStatus::Flying;
}

void ScenarioConfig::validate() const {
    auto fail = [](const char* what) { throw std::invalid_argument(std::string("scenario: ") + what); };
    if (!(bounds > 0.0)) fail("bounds must be positive");
    if (n_statics < 0 || n_dynamics < 0 || n_ppzs < 0) fail("entity counts must be non-negative");
    if (!(arrival_radius > 0.0)) fail("arrival_radius must be positive");
    if (!(min_separation > arrival_radius)) fail("min_separation must exceed arrival_radius");
    if (max_steps < 1) fail("max_steps must be at least 1");
    if (!(dt > 0.0)) fail("dt must be positive");
    if (!(sensing_radius > 0.0)) fail("sensing_radius must be positive");
    if (!(static_safety_radius > 0.0) || !(dynamic_safety_radius > 0.0) || !(ppz_safety_radius > 0.0)) {
        fail("safety radii must be positive");
    }
    if (!(dynamic_half_amplitude > 0.0)) fail("dynamic_half_amplitude must be positive");
    if (!(dynamic_speed_min <= dynamic_speed_max) || !(dynamic_speed_min > 0.0)) {
        fail("dynamic speed range is invalid");
    }
    if (rejection_budget < 1) fail("rejection_budget must be at least 1");
    if (!(ppz_on_path >= 0.0 && ppz_on_path <= 1.0)) fail("ppz_on_path must be in [0, 1]");
}

EnvInstance sample_scenario(const ScenarioConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();

    EnvInstance env;
    env.bounds = cfg.bounds;
    env.arrival_radius = cfg.arrival_radius;
    env.max_steps = cfg.max_steps;
    env.dt = cfg.dt;
    env.sensing_radius = cfg.sensing_radius;

    int tries = 0;
    auto spend_try = [&]() {
        if (++tries > cfg.rejection_budget) {
            throw std::runtime_error(
                "sample_scenario: rejection budget exhausted; the configuration overcrowds the airspace");
        }
    };
    auto draw_point = [&]() -> Vec2 {
        return {uniform_double(rng, 0.0, cfg.bounds), uniform_double(rng, 0.0, cfg.bounds)};
    };

    for (;;) {
        spend_try();
        env.origin = draw_point();
        env.destination = draw_point();
        if (distance(env.origin, env.destination) >= cfg.min_separation) break;
    }

    // Placed safety disks must not swallow origin/destination and must not
    // overlap each other, across all entity classes.
    struct Disk { Vec2 center; double radius; };
    std::vector<Disk> placed;
    auto admissible = [&](Vec2 center, double radius) {
        if (distance(center, env.origin) < radius) return false;
        if (distance(center, env.destination) < radius) return false;
        for (const auto& d : placed) {
            if (distance(center, d.center) < radius + d.radius) return false;
        }
        return true;
    };
    auto place = [&](double radius) -> Vec2 {
        for (;;) {
            spend_try();
            const Vec2 c = draw_point();
            if (admissible(c, radius)) {
                placed.push_back({c, radius});
                return c;
            }
        }
    };

    // Corridor seeding keeps the zone clear of both endpoints through the
    // same admissibility test; an impossible corridor (short trips, crowded
    // space) falls back to the uniform draw instead of throwing.
    auto place_zone = [&]() -> Vec2 {
        if (cfg.ppz_on_path > 0.0 && uniform_double(rng, 0.0, 1.0) < cfg.ppz_on_path) {
            const Vec2 span = env.destination - env.origin;
            const Vec2 side = span.normalized().perp();
            for (int k = 0; k < 64; ++k) {
                spend_try();
                const double t = uniform_double(rng, 0.4, 0.6);
                const double off = uniform_double(rng, -0.35, 0.35) * cfg.ppz_safety_radius;
                Vec2 c = env.origin + span * t + side * off;
                c.x = std::clamp(c.x, 0.0, cfg.bounds);
                c.y = std::clamp(c.y, 0.0, cfg.bounds);
                if (admissible(c, cfg.ppz_safety_radius)) {
                    placed.push_back({c, cfg.ppz_safety_radius});
                    return c;
                }
            }
        }
        return place(cfg.ppz_safety_radius);
    };
    for (int i = 0; i < cfg.n_ppzs; ++i) {
        env.ppzs.push_back({place_zone(), cfg.ppz_safety_radius});
    }
    for (int i = 0; i < cfg.n_statics; ++i) {
        env.statics.push_back({place(cfg.static_safety_radius), cfg.static_safety_radius});
    }
    const Vec2 course = (env.destination - env.origin).normalized();
    for (int i = 0; i < cfg.n_dynamics; ++i) {
        DynamicObstacle d;
        d.anchor = place(cfg.dynamic_safety_radius);
        d.direction = course.perp();
        d.speed = uniform_double(rng, cfg.dynamic_speed_min, cfg.dynamic_speed_max);
        d.half_amplitude = cfg.dynamic_half_amplitude;
        d.phase_offset = uniform_double(rng, -cfg.dynamic_half_amplitude, cfg.dynamic_half_amplitude);
        d.safety_radius = cfg.dynamic_safety_radius;
        env.dynamics.push_back(d);
    }
    return env;
}

namespace {

Vec2 nothing_nearby(const EnvInstance& env, const UavState& u) {
    Vec2 away = -u.velocity.normalized();
    if (away.is_zero()) away = -(env.destination - u.position).normalized();
    if (away.is_zero()) away = {-1.0, 0.0};
    return away * env.sensing_radius;
}

Vec2 sense(const EnvInstance& env, const UavState& u, const NearestEntity& e) {
    if (e.found && e.distance <= env.sensing_radius) return e.offset;
    return nothing_nearby(env, u);
}

}  // namespace

Observation make_observation(const EnvInstance& env, const UavState& u,
                             const NearestEntity& obstacle, const NearestEntity& ppz) {
    Observation obs;
    obs.to_destination = env.destination - u.position;
    obs.velocity = u.velocity;
    obs.to_nearest_obstacle = sense(env, u, obstacle);
    obs.to_nearest_ppz = sense(env, u, ppz);
    return obs;
}

Observation build_observation(const EnvInstance& env, const UavState& u) {
    const double t = env.time_of(u);
    return make_observation(env, u, nearest_obstacle(env, u.position, t), nearest_ppz(env, u.position));
}

Observation normalize_observation(const Observation& obs, const EnvInstance& env) {
    auto over_bounds = [&](Vec2 v) {
        return Vec2{std::clamp(v.x / env.bounds, -1.0, 1.0), std::clamp(v.y / env.bounds, -1.0, 1.0)};
    };
    Observation n;
    n.to_destination = over_bounds(obs.to_destination);
    n.velocity = obs.velocity * (1.0 / kMaxSpeed);
    n.to_nearest_obstacle = over_bounds(obs.to_nearest_obstacle);
    n.to_nearest_ppz = over_bounds(obs.to_nearest_ppz);
    n.normalized = true;
    return n;
}

std::array<double, kObservationDim> observed_state(const EnvInstance& env, const UavState& u) {
    return observation_vector(normalize_observation(build_observation(env, u), env));
}

}  // namespace uam
