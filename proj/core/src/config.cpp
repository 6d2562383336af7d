#include "uamcap/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace uam {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument("config: " + what); }

void check_keys(const json& j, const char* section, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return key == k; }) == allowed.end()) {
            fail("unknown key '" + key + "' in " + section);
        }
    }
}

double get_number(const json& j, const char* key, double fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) fail(std::string("'") + key + "' must be a number");
    return it->get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer()) fail(std::string("'") + key + "' must be an integer");
    return it->get<int>();
}

std::uint64_t get_u64(const json& j, const char* key, std::uint64_t fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_unsigned() && !it->is_number_integer()) {
        fail(std::string("'") + key + "' must be a non-negative integer");
    }
    if (it->is_number_integer() && it->get<std::int64_t>() < 0) {
        fail(std::string("'") + key + "' must be a non-negative integer");
    }
    return it->get<std::uint64_t>();
}

std::string get_string(const json& j, const char* key, const std::string& fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_string()) fail(std::string("'") + key + "' must be a string");
    return it->get<std::string>();
}

ShapingMode shaping_from_string(const std::string& s, const char* key) {
    if (s == "dot") return ShapingMode::Dot;
    if (s == "distance") return ShapingMode::Distance;
    fail(std::string("'") + key + "' must be \"dot\" or \"distance\"");
}

void apply_environment(const json& j, ScenarioConfig& env) {
    check_keys(j, "environment",
               {"bounds", "min_separation", "arrival_radius", "max_steps", "dt", "sensing_radius",
                "static_safety_radius", "dynamic_safety_radius", "ppz_safety_radius",
                "dynamic_half_amplitude", "dynamic_speed_min", "dynamic_speed_max",
                "rejection_budget"});
    env.bounds = get_number(j, "bounds", env.bounds);
    env.min_separation = get_number(j, "min_separation", env.min_separation);
    env.arrival_radius = get_number(j, "arrival_radius", env.arrival_radius);
    env.max_steps = get_int(j, "max_steps", env.max_steps);
    env.dt = get_number(j, "dt", env.dt);
    env.sensing_radius = get_number(j, "sensing_radius", env.sensing_radius);
    env.static_safety_radius = get_number(j, "static_safety_radius", env.static_safety_radius);
    env.dynamic_safety_radius = get_number(j, "dynamic_safety_radius", env.dynamic_safety_radius);
    env.ppz_safety_radius = get_number(j, "ppz_safety_radius", env.ppz_safety_radius);
    env.dynamic_half_amplitude = get_number(j, "dynamic_half_amplitude", env.dynamic_half_amplitude);
    env.dynamic_speed_min = get_number(j, "dynamic_speed_min", env.dynamic_speed_min);
    env.dynamic_speed_max = get_number(j, "dynamic_speed_max", env.dynamic_speed_max);
    env.rejection_budget = get_int(j, "rejection_budget", env.rejection_budget);
}

void apply_reward(const json& j, RewardConfig& r) {
    check_keys(j, "reward",
               {"r1_success", "r2_exit", "r3_collision", "r4_ppz", "dot_alpha", "dot_beta",
                "dot_gamma", "dot_threshold", "dist_alpha", "dist_beta", "avoid_weight_obstacle",
                "avoid_weight_ppz", "alert_radius_obstacle", "alert_radius_ppz", "shaping"});
    r.r1_success = get_number(j, "r1_success", r.r1_success);
    r.r2_exit = get_number(j, "r2_exit", r.r2_exit);
    r.r3_collision = get_number(j, "r3_collision", r.r3_collision);
    r.r4_ppz = get_number(j, "r4_ppz", r.r4_ppz);
    r.dot_alpha = get_number(j, "dot_alpha", r.dot_alpha);
    r.dot_beta = get_number(j, "dot_beta", r.dot_beta);
    r.dot_gamma = get_number(j, "dot_gamma", r.dot_gamma);
    r.dot_threshold = get_number(j, "dot_threshold", r.dot_threshold);
    r.dist_alpha = get_number(j, "dist_alpha", r.dist_alpha);
    r.dist_beta = get_number(j, "dist_beta", r.dist_beta);
    r.avoid_weight_obstacle = get_number(j, "avoid_weight_obstacle", r.avoid_weight_obstacle);
    r.avoid_weight_ppz = get_number(j, "avoid_weight_ppz", r.avoid_weight_ppz);
    r.alert_radius_obstacle = get_number(j, "alert_radius_obstacle", r.alert_radius_obstacle);
    r.alert_radius_ppz = get_number(j, "alert_radius_ppz", r.alert_radius_ppz);
    if (j.contains("shaping")) {
        r.shaping = shaping_from_string(get_string(j, "shaping", ""), "shaping");
    }
}

void apply_ddpg(const json& j, DdpgHyperparams& h) {
    check_keys(j, "ddpg",
               {"discount", "tau", "lr_critic", "lr_actor", "batch_size", "epsilon_start",
                "epsilon_end", "epsilon_fraction", "learn_start", "replay_capacity",
                "hidden_sizes"});
    h.discount = get_number(j, "discount", h.discount);
    h.tau = get_number(j, "tau", h.tau);
    h.lr_critic = get_number(j, "lr_critic", h.lr_critic);
    h.lr_actor = get_number(j, "lr_actor", h.lr_actor);
    h.batch_size = get_int(j, "batch_size", h.batch_size);
    h.epsilon_start = get_number(j, "epsilon_start", h.epsilon_start);
    h.epsilon_end = get_number(j, "epsilon_end", h.epsilon_end);
    h.epsilon_fraction = get_number(j, "epsilon_fraction", h.epsilon_fraction);
    h.learn_start = get_u64(j, "learn_start", h.learn_start);
    h.replay_capacity = get_u64(j, "replay_capacity", h.replay_capacity);
    if (auto it = j.find("hidden_sizes"); it != j.end()) {
        if (!it->is_array() || it->empty()) fail("'hidden_sizes' must be a non-empty array");
        h.hidden_sizes.clear();
        for (const auto& v : *it) {
            if (!v.is_number_integer()) fail("'hidden_sizes' entries must be integers");
            h.hidden_sizes.push_back(v.get<int>());
        }
    }
}

StageSpec stage_from_json(const json& j, const ScenarioConfig& env_template) {
    check_keys(j, "stage",
               {"name", "episodes", "statics", "dynamics", "ppzs", "reward_mode", "init",
                "min_separation", "on_path"});
    StageSpec s;
    s.scenario = env_template;
    s.name = get_string(j, "name", "stage");
    s.episodes = get_int(j, "episodes", 1);
    s.scenario.n_statics = get_int(j, "statics", 0);
    s.scenario.n_dynamics = get_int(j, "dynamics", 0);
    s.scenario.n_ppzs = get_int(j, "ppzs", 0);
    s.scenario.min_separation = get_number(j, "min_separation", s.scenario.min_separation);
    s.scenario.ppz_on_path = get_number(j, "on_path", s.scenario.ppz_on_path);
    s.reward_mode = shaping_from_string(get_string(j, "reward_mode", "dot"), "reward_mode");
    s.init = get_string(j, "init", "random");
    return s;
}

void apply_evaluation(const json& j, EvaluationSpec& e) {
    check_keys(j, "evaluation",
               {"single_ppz_trials", "single_ppz_min_separation", "single_ppz_perturbation",
                "origin_spacing", "capacity_n", "capacity_trials"});
    e.single_ppz_trials = get_int(j, "single_ppz_trials", e.single_ppz_trials);
    e.single_ppz_min_separation =
        get_number(j, "single_ppz_min_separation", e.single_ppz_min_separation);
    e.single_ppz_perturbation = get_number(j, "single_ppz_perturbation", e.single_ppz_perturbation);
    e.origin_spacing = get_number(j, "origin_spacing", e.origin_spacing);
    if (auto it = j.find("capacity_n"); it != j.end()) {
        if (!it->is_array() || it->empty()) fail("'capacity_n' must be a non-empty array");
        e.capacity_n.clear();
        for (const auto& v : *it) {
            if (!v.is_number_integer() || v.get<int>() < 1) {
                fail("'capacity_n' entries must be positive integers");
            }
            e.capacity_n.push_back(v.get<int>());
        }
    }
    e.capacity_trials = get_int(j, "capacity_trials", e.capacity_trials);
}

}  // namespace

const char* to_string(Profile p) {
    switch (p) {
        case Profile::DeskScale: return "desk";
        case Profile::PaperScale: return "paper";
        case Profile::Custom: return "custom";
    }
    return "?";
}

void RunConfig::validate() const {
    env.validate();
    reward.validate();
    ddpg.validate();
    if (checkpoint_every < 1) fail("'checkpoint_every' must be at least 1");
    if (metrics_window < 1) fail("'metrics_window' must be at least 1");
    if (output_dir.empty()) fail("'output_dir' must not be empty");
    for (const StageSpec& s : stages) {
        if (s.episodes < 1) fail("stage '" + s.name + "': 'episodes' must be at least 1");
        s.scenario.validate();
        if (s.init.empty()) {
            fail("stage '" + s.name + "': 'init' must be \"random\", \"previous\", or a path");
        }
    }
    if (!stages.empty() && stages.front().init == "previous") {
        fail("the first stage cannot initialize from \"previous\"");
    }
    if (evaluation.single_ppz_trials < 1) fail("'single_ppz_trials' must be at least 1");
    if (evaluation.capacity_trials < 1) fail("'capacity_trials' must be at least 1");
    if (!(evaluation.single_ppz_perturbation >= 0.0)) {
        fail("'single_ppz_perturbation' must be non-negative");
    }
    if (!(evaluation.single_ppz_min_separation - 2.0 * evaluation.single_ppz_perturbation >=
          2.0 * env.ppz_safety_radius)) {
        fail("'single_ppz_min_separation' too small: the zone cannot clear both endpoints");
    }
    if (!(evaluation.origin_spacing > 0.0)) fail("'origin_spacing' must be positive");
}

RunConfig desk_scale_config() {
    RunConfig cfg;
    cfg.profile = Profile::DeskScale;
    cfg.env.bounds = 4'000.0;
    cfg.env.max_steps = 300;
    cfg.env.min_separation = 1'000.0;
    // Short episode budgets need a faster actor and stiffer target tracking
    // than the large-scale rates to converge within 1500 episodes.
    cfg.ddpg.lr_actor = 5e-4;
    cfg.ddpg.tau = 0.05;

    StageSpec free_flight;
    free_flight.name = "free";
    free_flight.episodes = 1'500;
    free_flight.scenario = cfg.env;
    free_flight.reward_mode = ShapingMode::Dot;
    free_flight.init = "random";

    StageSpec zones = free_flight;
    zones.name = "zones";
    zones.episodes = 2'500;
    zones.scenario.n_statics = 2;
    zones.scenario.n_dynamics = 1;
    zones.scenario.n_ppzs = 1;
    zones.init = "previous";

    cfg.stages = {free_flight, zones};
    return cfg;
}

RunConfig paper_scale_config() {
    RunConfig cfg;
    cfg.profile = Profile::PaperScale;
    cfg.env.bounds = 10'000.0;
    cfg.env.max_steps = 800;
    cfg.ddpg.tau = 1.0;
    cfg.ddpg.replay_capacity = 10'000'000;
    cfg.ddpg.hidden_sizes = {300, 400};

    StageSpec free_flight;
    free_flight.name = "free";
    free_flight.episodes = 2'000;
    free_flight.scenario = cfg.env;
    free_flight.reward_mode = ShapingMode::Dot;
    free_flight.init = "random";

    StageSpec source = free_flight;
    source.name = "source";
    source.episodes = 15'000;
    source.scenario.n_statics = 3;
    source.scenario.n_ppzs = 3;
    source.init = "previous";

    StageSpec dense = source;
    dense.name = "dense";
    dense.episodes = 15'000;
    dense.scenario.n_statics = 18;
    dense.scenario.n_dynamics = 2;
    dense.scenario.n_ppzs = 3;

    cfg.stages = {free_flight, source, dense};
    return cfg;
}

RunConfig config_from_json(const std::string& text) {
    std::string trimmed = text;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
    json j = json::object();
    if (!trimmed.empty()) {
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            fail(std::string("malformed file: ") + e.what());
        }
        if (!j.is_object()) fail("the top level must be an object");
    }
    check_keys(j, "the top level",
               {"profile", "master_seed", "output_dir", "checkpoint_every", "metrics_window",
                "environment", "reward", "ddpg", "stages", "evaluation"});

    const std::string profile = get_string(j, "profile", "desk");
    RunConfig cfg;
    if (profile == "desk") {
        cfg = desk_scale_config();
    } else if (profile == "paper") {
        cfg = paper_scale_config();
    } else if (profile == "custom") {
        cfg = desk_scale_config();
        cfg.profile = Profile::Custom;
    } else {
        fail("'profile' must be \"desk\", \"paper\", or \"custom\"");
    }

    cfg.master_seed = get_u64(j, "master_seed", cfg.master_seed);
    cfg.output_dir = get_string(j, "output_dir", cfg.output_dir.string());
    cfg.checkpoint_every = get_int(j, "checkpoint_every", cfg.checkpoint_every);
    cfg.metrics_window = get_int(j, "metrics_window", cfg.metrics_window);
    if (auto it = j.find("environment"); it != j.end()) apply_environment(*it, cfg.env);
    if (auto it = j.find("reward"); it != j.end()) apply_reward(*it, cfg.reward);
    if (auto it = j.find("ddpg"); it != j.end()) apply_ddpg(*it, cfg.ddpg);
    if (auto it = j.find("evaluation"); it != j.end()) apply_evaluation(*it, cfg.evaluation);
    if (auto it = j.find("stages"); it != j.end()) {
        if (!it->is_array() || it->empty()) fail("'stages' must be a non-empty array");
        cfg.stages.clear();
        for (const auto& s : *it) cfg.stages.push_back(stage_from_json(s, cfg.env));
    } else {
        // Profile stage lists still inherit any environment overrides, but
        // keep the fields that define their curriculum.
        for (StageSpec& s : cfg.stages) {
            ScenarioConfig rebuilt = cfg.env;
            rebuilt.n_statics = s.scenario.n_statics;
            rebuilt.n_dynamics = s.scenario.n_dynamics;
            rebuilt.n_ppzs = s.scenario.n_ppzs;
            rebuilt.min_separation = s.scenario.min_separation;
            rebuilt.ppz_on_path = s.scenario.ppz_on_path;
            s.scenario = rebuilt;
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("config: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    RunConfig cfg = config_from_json(buf.str());
    if (const char* dir = std::getenv("UAMCAP_OUTPUT_DIR"); dir && *dir) {
        cfg.output_dir = dir;
    }
    if (const char* seed = std::getenv("UAMCAP_SEED"); seed && *seed) {
        try {
            std::size_t used = 0;
            cfg.master_seed = std::stoull(seed, &used);
            if (used != std::string(seed).size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            fail("UAMCAP_SEED must be a non-negative integer");
        }
    }
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    json j;
    j["profile"] = to_string(cfg.profile);
    j["master_seed"] = cfg.master_seed;
    j["output_dir"] = cfg.output_dir.string();
    j["checkpoint_every"] = cfg.checkpoint_every;
    j["metrics_window"] = cfg.metrics_window;
    json env;
    env["bounds"] = cfg.env.bounds;
    env["min_separation"] = cfg.env.min_separation;
    env["arrival_radius"] = cfg.env.arrival_radius;
    env["max_steps"] = cfg.env.max_steps;
    env["dt"] = cfg.env.dt;
    env["sensing_radius"] = cfg.env.sensing_radius;
    env["static_safety_radius"] = cfg.env.static_safety_radius;
    env["dynamic_safety_radius"] = cfg.env.dynamic_safety_radius;
    env["ppz_safety_radius"] = cfg.env.ppz_safety_radius;
    env["dynamic_half_amplitude"] = cfg.env.dynamic_half_amplitude;
    env["dynamic_speed_min"] = cfg.env.dynamic_speed_min;
    env["dynamic_speed_max"] = cfg.env.dynamic_speed_max;
    env["rejection_budget"] = cfg.env.rejection_budget;
    j["environment"] = env;
    json reward;
    reward["r1_success"] = cfg.reward.r1_success;
    reward["r2_exit"] = cfg.reward.r2_exit;
    reward["r3_collision"] = cfg.reward.r3_collision;
    reward["r4_ppz"] = cfg.reward.r4_ppz;
    reward["dot_alpha"] = cfg.reward.dot_alpha;
    reward["dot_beta"] = cfg.reward.dot_beta;
    reward["dot_gamma"] = cfg.reward.dot_gamma;
    reward["dot_threshold"] = cfg.reward.dot_threshold;
    reward["dist_alpha"] = cfg.reward.dist_alpha;
    reward["dist_beta"] = cfg.reward.dist_beta;
    reward["avoid_weight_obstacle"] = cfg.reward.avoid_weight_obstacle;
    reward["avoid_weight_ppz"] = cfg.reward.avoid_weight_ppz;
    reward["alert_radius_obstacle"] = cfg.reward.alert_radius_obstacle;
    reward["alert_radius_ppz"] = cfg.reward.alert_radius_ppz;
    reward["shaping"] = to_string(cfg.reward.shaping);
    j["reward"] = reward;
    json ddpg;
    ddpg["discount"] = cfg.ddpg.discount;
    ddpg["tau"] = cfg.ddpg.tau;
    ddpg["lr_critic"] = cfg.ddpg.lr_critic;
    ddpg["lr_actor"] = cfg.ddpg.lr_actor;
    ddpg["batch_size"] = cfg.ddpg.batch_size;
    ddpg["epsilon_start"] = cfg.ddpg.epsilon_start;
    ddpg["epsilon_end"] = cfg.ddpg.epsilon_end;
    ddpg["epsilon_fraction"] = cfg.ddpg.epsilon_fraction;
    ddpg["learn_start"] = cfg.ddpg.learn_start;
    ddpg["replay_capacity"] = cfg.ddpg.replay_capacity;
    ddpg["hidden_sizes"] = cfg.ddpg.hidden_sizes;
    j["ddpg"] = ddpg;
    j["stages"] = json::array();
    for (const StageSpec& s : cfg.stages) {
        json stage;
        stage["name"] = s.name;
        stage["episodes"] = s.episodes;
        stage["statics"] = s.scenario.n_statics;
        stage["dynamics"] = s.scenario.n_dynamics;
        stage["ppzs"] = s.scenario.n_ppzs;
        stage["min_separation"] = s.scenario.min_separation;
        stage["on_path"] = s.scenario.ppz_on_path;
        stage["reward_mode"] = to_string(s.reward_mode);
        stage["init"] = s.init;
        j["stages"].push_back(stage);
    }
    json eval;
    eval["single_ppz_trials"] = cfg.evaluation.single_ppz_trials;
    eval["single_ppz_min_separation"] = cfg.evaluation.single_ppz_min_separation;
    eval["single_ppz_perturbation"] = cfg.evaluation.single_ppz_perturbation;
    eval["origin_spacing"] = cfg.evaluation.origin_spacing;
    eval["capacity_n"] = cfg.evaluation.capacity_n;
    eval["capacity_trials"] = cfg.evaluation.capacity_trials;
    j["evaluation"] = eval;
    return j.dump(2) + "\n";
}

}  // namespace uam
