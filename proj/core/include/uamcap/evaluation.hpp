#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "uamcap/airspace.hpp"
#include "uamcap/mlp.hpp"
#include "uamcap/rewards.hpp"
#include "uamcap/trajectory.hpp"

namespace uam {

struct OutcomeCounts {
    std::uint64_t success = 0;
    std::uint64_t collision = 0;
    std::uint64_t ppz = 0;
    std::uint64_t exited = 0;
    std::uint64_t timeout = 0;

    void add(UavStatus s);
    std::uint64_t total() const { return success + collision + ppz + exited + timeout; }
};

/// The blocked-path scenario: one zone dropped near the midpoint of a
/// random origin->destination pair, flown greedily.
struct SinglePpzSpec {
    ScenarioConfig env;            // geometry fields; entity counts ignored
    int trials = 50;
    double perturbation = 200.0;   // max midpoint offset of the zone center
    int log_trial = 0;             // which trial exports its trajectory
};

/// Both endpoints must clear the zone; the center always blocks the
/// straight path by construction (it sits within `perturbation` of the
/// midpoint).
bool single_ppz_admissible(Vec2 origin, Vec2 destination, Vec2 center, double ppz_radius);

EnvInstance sample_single_ppz_env(const SinglePpzSpec& spec, std::mt19937_64& rng);

struct SinglePpzResult {
    OutcomeCounts counts;
    TrajectoryLog trajectory;                    // from log_trial
    std::vector<double> success_min_clearance;   // per successful trial, min logged zone distance
};

SinglePpzResult run_single_ppz(const Mlp& actor, const SinglePpzSpec& spec,
                               std::uint64_t master_seed);

/// A fleet trial: one shared airspace with no zones or fixed obstacles;
/// every vehicle flies the same frozen policy toward its own destination.
struct MultiUavSpec {
    int n_uavs = 1;
    double bounds = 10'000.0;
    double origin_spacing = 900.0;     // pairwise minimum between origins
    double min_separation = 1'000.0;   // each vehicle's origin to its destination
    double arrival_radius = 100.0;
    int max_steps = 800;
    double dt = 1.0;
    double sensing_radius = 2'000.0;
    double uav_safety_radius = 50.0;   // pairwise loss-of-separation threshold
    int rejection_budget = 10'000;
};

struct FleetScenario {
    std::vector<Vec2> origins;
    std::vector<Vec2> destinations;
    double bounds = 10'000.0;
    double arrival_radius = 100.0;
    int max_steps = 800;
    double dt = 1.0;
    double sensing_radius = 2'000.0;
    double uav_safety_radius = 50.0;
};

/// Origins pairwise >= origin_spacing apart, each destination >=
/// min_separation from its own origin; throws std::runtime_error when the
/// rejection budget runs out (the fleet does not fit).
FleetScenario sample_fleet_scenario(const MultiUavSpec& spec, std::mt19937_64& rng);

struct MultiUavResult {
    std::vector<UavStatus> outcomes;  // one per vehicle
    int ticks = 0;
    TrajectoryLog log;                // filled when capture_log is set
};

/// Synchronous ticks: every flying vehicle picks its action against the
/// same pre-tick snapshot, all move, then pairs closer than the safety
/// radius are both marked Collision in the same tick. Other vehicles enter
/// the observation through the nearest-obstacle channel: flying ones at
/// their snapshot position, collided ones frozen where they stopped.
/// Success (and exit/timeout) removes a vehicle from the airspace.
using FleetPolicy =
    std::function<Vec2(int uav, std::span<const double> obs, const UavState& state)>;
MultiUavResult run_fleet(const FleetScenario& scenario, const FleetPolicy& policy,
                         bool capture_log = false);

MultiUavResult run_multi_uav(const Mlp& actor, const MultiUavSpec& spec, std::mt19937_64& rng,
                             bool capture_log = false);

struct CapacityRow {
    int n_uavs = 0;
    std::uint64_t trials = 0;
    double success = 0.0;
    double collision = 0.0;
    double ppz = 0.0;
    double exit = 0.0;
    double timeout = 0.0;
    double success_ci = 0.0;  // 95% normal-approximation half-width
};

/// trials_per_n independent fleet trials for each N, outcomes pooled per
/// vehicle.
std::vector<CapacityRow> capacity_sweep(const Mlp& actor, std::span<const int> n_list,
                                        int trials_per_n, const MultiUavSpec& spec,
                                        std::uint64_t master_seed);

/// CSV columns: n_uavs,trials,success,collision,ppz,exit,timeout,success_ci.
std::string capacity_csv(std::span<const CapacityRow> rows);
void write_capacity_csv(std::span<const CapacityRow> rows, const std::filesystem::path& path);

}  // namespace uam
