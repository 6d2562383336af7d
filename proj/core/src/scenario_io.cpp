#include "uamcap/scenario_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace uam {

namespace {

using json = nlohmann::ordered_json;

json vec_to_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec_from_json(const json& j, const char* field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw std::runtime_error(std::string("scenario: field '") + field + "' must be [x, y]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

const json& require(const json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end()) {
        throw std::runtime_error(std::string("scenario: missing field '") + field + "'");
    }
    return *it;
}

double require_number(const json& j, const char* field) {
    const json& v = require(j, field);
    if (!v.is_number()) {
        throw std::runtime_error(std::string("scenario: field '") + field + "' must be a number");
    }
    return v.get<double>();
}

}  // namespace

std::string scenario_to_json(const EnvInstance& env) {
    json j;
    j["bounds_m"] = env.bounds;
    j["origin_m"] = vec_to_json(env.origin);
    j["destination_m"] = vec_to_json(env.destination);
    j["arrival_radius_m"] = env.arrival_radius;
    j["max_steps"] = env.max_steps;
    j["dt_s"] = env.dt;
    j["sensing_radius_m"] = env.sensing_radius;
    j["static_obstacles"] = json::array();
    for (const auto& s : env.statics) {
        j["static_obstacles"].push_back(
            {{"center_m", vec_to_json(s.center)}, {"safety_radius_m", s.safety_radius}});
    }
    j["dynamic_obstacles"] = json::array();
    for (const auto& d : env.dynamics) {
        j["dynamic_obstacles"].push_back({{"anchor_m", vec_to_json(d.anchor)},
                                          {"direction", vec_to_json(d.direction)},
                                          {"speed_mps", d.speed},
                                          {"half_amplitude_m", d.half_amplitude},
                                          {"phase_offset_m", d.phase_offset},
                                          {"safety_radius_m", d.safety_radius}});
    }
    j["ppzs"] = json::array();
    for (const auto& z : env.ppzs) {
        j["ppzs"].push_back(
            {{"center_m", vec_to_json(z.center)}, {"safety_radius_m", z.safety_radius}});
    }
    return j.dump(2) + "\n";
}

EnvInstance scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("scenario: malformed file: ") + e.what());
    }
    EnvInstance env;
    env.bounds = require_number(j, "bounds_m");
    env.origin = vec_from_json(require(j, "origin_m"), "origin_m");
    env.destination = vec_from_json(require(j, "destination_m"), "destination_m");
    env.arrival_radius = require_number(j, "arrival_radius_m");
    env.max_steps = static_cast<int>(require_number(j, "max_steps"));
    env.dt = require_number(j, "dt_s");
    env.sensing_radius = require_number(j, "sensing_radius_m");
    for (const auto& s : require(j, "static_obstacles")) {
        env.statics.push_back({vec_from_json(require(s, "center_m"), "center_m"),
                               require_number(s, "safety_radius_m")});
    }
    for (const auto& d : require(j, "dynamic_obstacles")) {
        DynamicObstacle dy;
        dy.anchor = vec_from_json(require(d, "anchor_m"), "anchor_m");
        dy.direction = vec_from_json(require(d, "direction"), "direction");
        dy.speed = require_number(d, "speed_mps");
        dy.half_amplitude = require_number(d, "half_amplitude_m");
        dy.phase_offset = require_number(d, "phase_offset_m");
        dy.safety_radius = require_number(d, "safety_radius_m");
        env.dynamics.push_back(dy);
    }
    for (const auto& z : require(j, "ppzs")) {
        env.ppzs.push_back({vec_from_json(require(z, "center_m"), "center_m"),
                            require_number(z, "safety_radius_m")});
    }
    if (!(env.bounds > 0.0) || !(env.dt > 0.0) || env.max_steps < 1) {
        throw std::runtime_error("scenario: bounds, dt, and max_steps must be positive");
    }
    return env;
}

void save_scenario(const EnvInstance& env, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("scenario: cannot open " + path.string() + " for writing");
    out << scenario_to_json(env);
    if (!out) throw std::runtime_error("scenario: write failed for " + path.string());
}

EnvInstance load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("scenario: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

}  // namespace uam
