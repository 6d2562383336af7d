#include "uamcap/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "uamcap/csv.hpp"
#include "uamcap/rng.hpp"
#include "uamcap/training.hpp"

namespace uam {

std::string timeseries_csv(const TrajectoryLog& log) {
    std::string out = "t,uav_id,x,y,vx,vy,ax,ay,d_dest,d_obst,d_ppz\n";
    auto cell = [&](std::optional<double> v) {
        if (v) append_double(out, *v);
    };
    for (const TrajectoryRow& r : log.rows) {
        append_double(out, r.t);
        out += ',';
        out += std::to_string(r.uav_id);
        out += ',';
        append_double(out, r.position.x);
        out += ',';
        append_double(out, r.position.y);
        out += ',';
        append_double(out, r.velocity.x);
        out += ',';
        append_double(out, r.velocity.y);
        out += ',';
        append_double(out, r.acceleration.x);
        out += ',';
        append_double(out, r.acceleration.y);
        out += ',';
        append_double(out, r.d_dest);
        out += ',';
        cell(r.d_obst);
        out += ',';
        cell(r.d_ppz);
        out += '\n';
    }
    return out;
}

void export_timeseries(const TrajectoryLog& log, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("timeseries: cannot open " + path.string() + " for writing");
    out << timeseries_csv(log);
    if (!out) throw std::runtime_error("timeseries: write failed for " + path.string());
}

void OutcomeCounts::add(UavStatus s) {
    switch (s) {
        case UavStatus::Success: ++success; break;
        case UavStatus::Collision: ++collision; break;
        case UavStatus::PpzEntered: ++ppz; break;
        case UavStatus::Exited: ++exited; break;
        case UavStatus::Timeout: ++timeout; break;
        default: throw std::invalid_argument("OutcomeCounts: non-terminal outcome");
    }
}

bool single_ppz_admissible(Vec2 origin, Vec2 destination, Vec2 center, double ppz_radius) {
    return distance(origin, center) >= ppz_radius && distance(destination, center) >= ppz_radius;
}

EnvInstance sample_single_ppz_env(const SinglePpzSpec& spec, std::mt19937_64& rng) {
    spec.env.validate();
    if (!(spec.perturbation >= 0.0)) {
        throw std::invalid_argument("single_ppz: perturbation must be non-negative");
    }
    const ScenarioConfig& c = spec.env;
    int tries = 0;
    for (;;) {
        if (++tries > c.rejection_budget) {
            throw std::runtime_error(
                "single_ppz: rejection budget exhausted; no admissible zone placement");
        }
        EnvInstance env;
        env.bounds = c.bounds;
        env.arrival_radius = c.arrival_radius;
        env.max_steps = c.max_steps;
        env.dt = c.dt;
        env.sensing_radius = c.sensing_radius;
        env.origin = {uniform_double(rng, 0.0, c.bounds), uniform_double(rng, 0.0, c.bounds)};
        env.destination = {uniform_double(rng, 0.0, c.bounds), uniform_double(rng, 0.0, c.bounds)};
        if (distance(env.origin, env.destination) < c.min_separation) continue;
        const Vec2 mid = (env.origin + env.destination) * 0.5;
        const Vec2 delta{uniform_double(rng, -spec.perturbation, spec.perturbation),
                         uniform_double(rng, -spec.perturbation, spec.perturbation)};
        if (delta.norm() > spec.perturbation) continue;  // keep the offset within the disk
        const Vec2 center = mid + delta;
        if (!single_ppz_admissible(env.origin, env.destination, center, c.ppz_safety_radius)) continue;
        env.ppzs.push_back({center, c.ppz_safety_radius});
        return env;
    }
}

SinglePpzResult run_single_ppz(const Mlp& actor, const SinglePpzSpec& spec,
                               std::uint64_t master_seed) {
    if (spec.trials < 1) throw std::invalid_argument("single_ppz: trials must be at least 1");
    SinglePpzResult result;
    const RewardConfig reward;
    for (int trial = 0; trial < spec.trials; ++trial) {
        auto rng = make_engine(master_seed, SeedStream::Evaluation, static_cast<std::uint64_t>(trial));
        const EnvInstance env = sample_single_ppz_env(spec, rng);
        TrajectoryLog log;
        const EpisodeResult r = run_policy_episode(actor, env, reward, &log);
        result.counts.add(r.outcome);
        if (r.outcome == UavStatus::Success) {
            double min_clear = std::numeric_limits<double>::infinity();
            for (const TrajectoryRow& row : log.rows) {
                if (row.d_ppz) min_clear = std::min(min_clear, *row.d_ppz);
            }
            result.success_min_clearance.push_back(min_clear);
        }
        if (trial == spec.log_trial) result.trajectory = std::move(log);
    }
    return result;
}

FleetScenario sample_fleet_scenario(const MultiUavSpec& spec, std::mt19937_64& rng) {
    if (spec.n_uavs < 1) throw std::invalid_argument("fleet: n_uavs must be at least 1");
    if (!(spec.bounds > 0.0)) throw std::invalid_argument("fleet: bounds must be positive");
    if (!(spec.min_separation > spec.arrival_radius)) {
        throw std::invalid_argument("fleet: min_separation must exceed arrival_radius");
    }
    FleetScenario s;
    s.bounds = spec.bounds;
    s.arrival_radius = spec.arrival_radius;
    s.max_steps = spec.max_steps;
    s.dt = spec.dt;
    s.sensing_radius = spec.sensing_radius;
    s.uav_safety_radius = spec.uav_safety_radius;

    int tries = 0;
    auto spend_try = [&]() {
        if (++tries > spec.rejection_budget) {
            throw std::runtime_error(
                "fleet: rejection budget exhausted; the fleet does not fit the airspace");
        }
    };
    auto draw_point = [&]() -> Vec2 {
        return {uniform_double(rng, 0.0, spec.bounds), uniform_double(rng, 0.0, spec.bounds)};
    };
    for (int i = 0; i < spec.n_uavs; ++i) {
        for (;;) {
            spend_try();
            const Vec2 p = draw_point();
            const bool clear = std::all_of(s.origins.begin(), s.origins.end(), [&](Vec2 q) {
                return distance(p, q) >= spec.origin_spacing;
            });
            if (clear) {
                s.origins.push_back(p);
                break;
            }
        }
    }
    for (int i = 0; i < spec.n_uavs; ++i) {
        for (;;) {
            spend_try();
            const Vec2 p = draw_point();
            if (distance(p, s.origins[static_cast<std::size_t>(i)]) >= spec.min_separation) {
                s.destinations.push_back(p);
                break;
            }
        }
    }
    return s;
}

MultiUavResult run_fleet(const FleetScenario& scenario, const FleetPolicy& policy,
                         bool capture_log) {
    const int n = static_cast<int>(scenario.origins.size());
    if (n < 1 || scenario.destinations.size() != scenario.origins.size()) {
        throw std::invalid_argument("run_fleet: origins and destinations must pair up");
    }

    std::vector<EnvInstance> envs(static_cast<std::size_t>(n));
    std::vector<UavState> uavs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        EnvInstance& e = envs[static_cast<std::size_t>(i)];
        e.bounds = scenario.bounds;
        e.origin = scenario.origins[static_cast<std::size_t>(i)];
        e.destination = scenario.destinations[static_cast<std::size_t>(i)];
        e.arrival_radius = scenario.arrival_radius;
        e.max_steps = scenario.max_steps;
        e.dt = scenario.dt;
        e.sensing_radius = scenario.sensing_radius;
        uavs[static_cast<std::size_t>(i)].position = e.origin;
        uavs[static_cast<std::size_t>(i)].status = classify(e, uavs[static_cast<std::size_t>(i)]);
    }

    MultiUavResult result;
    std::vector<Vec2> actions(static_cast<std::size_t>(n));
    std::vector<char> moved(static_cast<std::size_t>(n));
    std::vector<char> hit(static_cast<std::size_t>(n));

    auto any_flying = [&]() {
        return std::any_of(uavs.begin(), uavs.end(),
                           [](const UavState& u) { return u.status == UavStatus::Flying; });
    };

    while (any_flying()) {
        // Decide every action against the same pre-tick snapshot.
        for (int i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            moved[ui] = uavs[ui].status == UavStatus::Flying;
            if (!moved[ui]) continue;
            NearestEntity obst;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const auto uj = static_cast<std::size_t>(j);
                if (uavs[uj].status != UavStatus::Flying && uavs[uj].status != UavStatus::Collision) {
                    continue;
                }
                const double d = distance(uavs[ui].position, uavs[uj].position);
                if (!obst.found || d < obst.distance) {
                    obst.offset = uavs[uj].position - uavs[ui].position;
                    obst.distance = d;
                    obst.index = j;
                    obst.found = true;
                }
            }
            const Observation obs = normalize_observation(
                make_observation(envs[ui], uavs[ui], obst, NearestEntity{}), envs[ui]);
            const auto state = observation_vector(obs);
            actions[ui] = clamp_action(policy(i, state, uavs[ui]));
            if (capture_log) {
                TrajectoryRow row;
                row.t = envs[ui].time_of(uavs[ui]);
                row.uav_id = i;
                row.position = uavs[ui].position;
                row.velocity = uavs[ui].velocity;
                row.acceleration = actions[ui];
                row.d_dest = distance(uavs[ui].position, envs[ui].destination);
                if (obst.found) row.d_obst = obst.distance;
                result.log.rows.push_back(row);
            }
        }

        for (int i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            if (moved[ui]) uavs[ui] = step_kinematics(uavs[ui], actions[ui], scenario.dt);
        }

        // Post-move separation: a moved vehicle collides with any other
        // vehicle still physically present (moved this tick or frozen by an
        // earlier collision). Marks land simultaneously.
        std::fill(hit.begin(), hit.end(), 0);
        for (int i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            if (!moved[ui]) continue;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const auto uj = static_cast<std::size_t>(j);
                const bool present = moved[uj] || uavs[uj].status == UavStatus::Collision;
                if (!present) continue;
                if (distance(uavs[ui].position, uavs[uj].position) < scenario.uav_safety_radius) {
                    hit[ui] = 1;
                    break;
                }
            }
        }
        for (int i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            if (!moved[ui]) continue;
            uavs[ui].status = hit[ui] ? UavStatus::Collision : classify(envs[ui], uavs[ui]);
        }
        ++result.ticks;
    }

    result.outcomes.reserve(static_cast<std::size_t>(n));
    for (const UavState& u : uavs) result.outcomes.push_back(u.status);
    return result;
}

MultiUavResult run_multi_uav(const Mlp& actor, const MultiUavSpec& spec, std::mt19937_64& rng,
                             bool capture_log) {
    const FleetScenario scenario = sample_fleet_scenario(spec, rng);
    ForwardCache cache;
    FleetPolicy policy = [&](int, std::span<const double> obs, const UavState&) {
        auto out = forward(actor, obs, cache);
        return Vec2{out[0], out[1]};
    };
    return run_fleet(scenario, policy, capture_log);
}

std::vector<CapacityRow> capacity_sweep(const Mlp& actor, std::span<const int> n_list,
                                        int trials_per_n, const MultiUavSpec& spec,
                                        std::uint64_t master_seed) {
    if (trials_per_n < 1) throw std::invalid_argument("capacity_sweep: trials must be at least 1");
    std::vector<CapacityRow> rows;
    rows.reserve(n_list.size());
    for (int n : n_list) {
        MultiUavSpec per_n = spec;
        per_n.n_uavs = n;
        OutcomeCounts counts;
        for (int trial = 0; trial < trials_per_n; ++trial) {
            const std::uint64_t index =
                static_cast<std::uint64_t>(n) * 1'000'000 + static_cast<std::uint64_t>(trial);
            auto rng = make_engine(master_seed, SeedStream::Evaluation, index);
            const MultiUavResult r = run_multi_uav(actor, per_n, rng);
            for (UavStatus s : r.outcomes) counts.add(s);
        }
        const double pool = static_cast<double>(counts.total());
        CapacityRow row;
        row.n_uavs = n;
        row.trials = static_cast<std::uint64_t>(trials_per_n);
        row.success = counts.success / pool;
        row.collision = counts.collision / pool;
        row.ppz = counts.ppz / pool;
        row.exit = counts.exited / pool;
        row.timeout = counts.timeout / pool;
        row.success_ci = 1.96 * std::sqrt(row.success * (1.0 - row.success) / pool);
        rows.push_back(row);
    }
    return rows;
}

std::string capacity_csv(std::span<const CapacityRow> rows) {
    std::string out = "n_uavs,trials,success,collision,ppz,exit,timeout,success_ci\n";
    for (const CapacityRow& r : rows) {
        out += std::to_string(r.n_uavs);
        out += ',';
        out += std::to_string(r.trials);
        out += ',';
        append_double(out, r.success);
        out += ',';
        append_double(out, r.collision);
        out += ',';
        append_double(out, r.ppz);
        out += ',';
        append_double(out, r.exit);
        out += ',';
        append_double(out, r.timeout);
        out += ',';
        append_double(out, r.success_ci);
        out += '\n';
    }
    return out;
}

void write_capacity_csv(std::span<const CapacityRow> rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("capacity: cannot open " + path.string() + " for writing");
    out << capacity_csv(rows);
    if (!out) throw std::runtime_error("capacity: write failed for " + path.string());
}

}  // namespace uam
