#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uamcap/checkpoint.hpp"
#include "uamcap/config.hpp"
#include "uamcap/csv.hpp"
#include "uamcap/evaluation.hpp"
#include "uamcap/rng.hpp"
#include "uamcap/scenario_io.hpp"
#include "uamcap/training.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// "--n 1..10", "--n 1,2,4", or "--n 6".
std::vector<int> parse_fleet_sizes(const std::string& text) {
    auto bad = [&]() {
        throw std::invalid_argument("--n expects a fleet size, a comma list, or lo..hi, got '" +
                                    text + "'");
    };
    std::vector<int> out;
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        int lo = 0, hi = 0;
        try {
            lo = std::stoi(text.substr(0, dots));
            hi = std::stoi(text.substr(dots + 2));
        } catch (const std::exception&) {
            bad();
        }
        if (lo < 1 || hi < lo) bad();
        for (int n = lo; n <= hi; ++n) out.push_back(n);
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string piece = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            const int n = std::stoi(piece);
            if (n < 1) bad();
            out.push_back(n);
        } catch (const std::exception&) {
            bad();
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) bad();
    return out;
}

uam::MultiUavSpec fleet_spec_from(const uam::RunConfig& cfg) {
    uam::MultiUavSpec spec;
    spec.bounds = cfg.env.bounds;
    spec.origin_spacing = cfg.evaluation.origin_spacing;
    spec.min_separation = cfg.env.min_separation;
    spec.arrival_radius = cfg.env.arrival_radius;
    spec.max_steps = cfg.env.max_steps;
    spec.dt = cfg.env.dt;
    spec.sensing_radius = cfg.env.sensing_radius;
    spec.rejection_budget = cfg.env.rejection_budget;
    return spec;
}

uam::SinglePpzSpec ppz_spec_from(const uam::RunConfig& cfg) {
    uam::SinglePpzSpec spec;
    spec.env = cfg.env;
    spec.env.n_statics = 0;
    spec.env.n_dynamics = 0;
    spec.env.n_ppzs = 1;
    spec.env.min_separation = cfg.evaluation.single_ppz_min_separation;
    spec.trials = cfg.evaluation.single_ppz_trials;
    spec.perturbation = cfg.evaluation.single_ppz_perturbation;
    return spec;
}

int run_train(const std::string& config_path) {
    const uam::RunConfig cfg = uam::parse_config(config_path);
    if (cfg.stages.empty()) throw std::invalid_argument("config: 'stages' is empty; nothing to train");
    fs::create_directories(cfg.output_dir);

    json manifest;
    manifest["artifact_version"] = "0.1.0";
    manifest["started_at"] = utc_now();
    manifest["config"] = json::parse(uam::serialize_config(cfg));
    manifest["stages"] = json::array();

    std::string previous_checkpoint;
    for (std::size_t si = 0; si < cfg.stages.size(); ++si) {
        const uam::StageSpec& stage = cfg.stages[si];
        const std::uint64_t stage_seed =
            uam::split_seed(cfg.master_seed, uam::SeedStream::Stage, si);

        uam::Agent agent = [&]() {
            if (stage.init == "random") {
                return uam::make_agent(uam::kObservationDim, uam::kActionDim, cfg.ddpg, stage_seed);
            }
            const std::string source = stage.init == "previous" ? previous_checkpoint : stage.init;
            std::printf("[%s] initializing from %s\n", stage.name.c_str(), source.c_str());
            return uam::load_agent(source, stage_seed);
        }();

        std::printf("[%s] training %d episodes\n", stage.name.c_str(), stage.episodes);
        const fs::path ckpt_path = cfg.output_dir / (stage.name + ".ckpt");
        auto on_episode = [&](const uam::EpisodeRow& row) {
            if ((row.episode + 1) % cfg.checkpoint_every == 0) {
                uam::save_agent(ckpt_path, agent);
            }
            if ((row.episode + 1) % 100 == 0) {
                std::printf("[%s] episode %d  rolling success %.3f  epsilon %.3f\n",
                            stage.name.c_str(), row.episode + 1, row.rolling.success, row.epsilon);
                std::fflush(stdout);
            }
        };
        const uam::TrainingMetrics metrics = uam::train_stage(
            agent, stage, static_cast<int>(si), cfg.master_seed, cfg.reward, cfg.metrics_window,
            on_episode);

        uam::save_agent(ckpt_path, agent);
        const fs::path metrics_path = cfg.output_dir / (stage.name + "_metrics.csv");
        uam::write_metrics_csv(metrics, metrics_path);
        previous_checkpoint = ckpt_path.string();

        json entry;
        entry["name"] = stage.name;
        entry["episodes"] = stage.episodes;
        entry["checkpoint"] = ckpt_path.string();
        entry["metrics"] = metrics_path.string();
        entry["final_rolling_success"] = metrics.final_rolling_success();
        manifest["stages"].push_back(entry);
        std::printf("[%s] done: rolling success %.3f, checkpoint %s\n", stage.name.c_str(),
                    metrics.final_rolling_success(), ckpt_path.string().c_str());
    }

    manifest["finished_at"] = utc_now();
    for (const auto& entry : manifest["stages"]) {
        for (const char* key : {"checkpoint", "metrics"}) {
            if (!fs::exists(entry[key].get<std::string>())) {
                throw std::runtime_error("manifest lists a missing artifact: " +
                                         entry[key].get<std::string>());
            }
        }
    }
    const fs::path manifest_path = cfg.output_dir / "manifest.json";
    std::ofstream out(manifest_path);
    out << manifest.dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write " + manifest_path.string());
    std::printf("manifest: %s\n", manifest_path.string().c_str());
    return 0;
}

int run_evaluate(const std::string& config_path, const std::string& checkpoint) {
    const uam::RunConfig cfg = uam::parse_config(config_path);
    const uam::Agent agent = uam::load_agent(checkpoint, cfg.master_seed);
    fs::create_directories(cfg.output_dir);

    const uam::SinglePpzSpec spec = ppz_spec_from(cfg);
    const uam::SinglePpzResult result = uam::run_single_ppz(agent.actor, spec, cfg.master_seed);

    const auto& c = result.counts;
    const double rate = static_cast<double>(c.success) / static_cast<double>(c.total());
    std::string csv = "trials,success,collision,ppz,exit,timeout,success_rate\n";
    csv += std::to_string(c.total()) + ',' + std::to_string(c.success) + ',' +
           std::to_string(c.collision) + ',' + std::to_string(c.ppz) + ',' +
           std::to_string(c.exited) + ',' + std::to_string(c.timeout) + ',';
    uam::append_double(csv, rate);
    csv += '\n';
    const fs::path summary_path = cfg.output_dir / "single_ppz_summary.csv";
    std::ofstream out(summary_path, std::ios::binary);
    out << csv;
    if (!out) throw std::runtime_error("cannot write " + summary_path.string());
    const fs::path traj_path = cfg.output_dir / "single_ppz_trajectory.csv";
    uam::export_timeseries(result.trajectory, traj_path);

    std::printf("single-zone trials: %llu, success rate %.3f\n",
                static_cast<unsigned long long>(c.total()), rate);
    std::printf("summary: %s\ntrajectory: %s\n", summary_path.string().c_str(),
                traj_path.string().c_str());
    return 0;
}

int run_capacity(const std::string& config_path, const std::string& checkpoint,
                 const std::string& n_text, int trials) {
    const uam::RunConfig cfg = uam::parse_config(config_path);
    const uam::Agent agent = uam::load_agent(checkpoint, cfg.master_seed);
    fs::create_directories(cfg.output_dir);

    const std::vector<int> n_list =
        n_text.empty() ? cfg.evaluation.capacity_n : parse_fleet_sizes(n_text);
    const int trials_per_n = trials > 0 ? trials : cfg.evaluation.capacity_trials;
    const uam::MultiUavSpec spec = fleet_spec_from(cfg);

    const std::vector<uam::CapacityRow> rows =
        uam::capacity_sweep(agent.actor, n_list, trials_per_n, spec, cfg.master_seed);
    const fs::path path = cfg.output_dir / "capacity.csv";
    uam::write_capacity_csv(rows, path);
    for (const auto& r : rows) {
        std::printf("n=%d  trials=%llu  success %.3f +- %.3f  collision %.3f  timeout %.3f\n",
                    r.n_uavs, static_cast<unsigned long long>(r.trials), r.success, r.success_ci,
                    r.collision, r.timeout);
    }
    std::printf("capacity table: %s\n", path.string().c_str());
    return 0;
}

int run_compare(const std::string& config_path) {
    const uam::RunConfig cfg = uam::parse_config(config_path);
    if (cfg.stages.empty()) throw std::invalid_argument("config: 'stages' is empty; nothing to compare");
    fs::create_directories(cfg.output_dir);

    std::printf("training the heading-alignment arm and the distance arm, %d episodes each\n",
                cfg.stages.front().episodes);
    const uam::RewardComparison cmp = uam::compare_reward_modes(
        cfg.stages.front(), 0, cfg.ddpg, cfg.reward, cfg.master_seed, cfg.metrics_window);

    const fs::path dot_path = cfg.output_dir / "compare_dot_metrics.csv";
    const fs::path dist_path = cfg.output_dir / "compare_distance_metrics.csv";
    uam::write_metrics_csv(cmp.dot, dot_path);
    uam::write_metrics_csv(cmp.distance, dist_path);
    std::printf("final rolling success: dot %.3f, distance %.3f\n",
                cmp.dot.final_rolling_success(), cmp.distance.final_rolling_success());
    std::printf("metrics: %s, %s\n", dot_path.string().c_str(), dist_path.string().c_str());
    return 0;
}

int run_replay(const std::string& scenario_path, const std::string& checkpoint,
               const std::string& out_path) {
    const uam::EnvInstance env = uam::load_scenario(scenario_path);
    const uam::Agent agent = uam::load_agent(checkpoint, 0);
    uam::TrajectoryLog log;
    const uam::EpisodeResult result =
        uam::run_policy_episode(agent.actor, env, uam::RewardConfig{}, &log);
    uam::export_timeseries(log, out_path);
    std::printf("outcome: %s after %d steps, cumulative reward %.3f\ntrajectory: %s\n",
                uam::to_string(result.outcome), result.steps, result.cumulative_reward,
                out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV navigation policy training and airspace capacity estimation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "0.1.0");

    std::string config_path, checkpoint, scenario_path;
    std::string n_text;
    std::string replay_out = "trajectory.csv";
    int trials = 0;

    auto* train = app.add_subcommand("train", "Run the configured training stages");
    train->add_option("config", config_path, "run configuration file")->required();

    auto* evaluate = app.add_subcommand("evaluate", "Fly the blocked-path scenario suite");
    evaluate->add_option("config", config_path, "run configuration file")->required();
    evaluate->add_option("checkpoint", checkpoint, "trained agent checkpoint")->required();

    auto* capacity = app.add_subcommand("capacity", "Sweep fleet sizes and measure outcome rates");
    capacity->add_option("config", config_path, "run configuration file")->required();
    capacity->add_option("checkpoint", checkpoint, "trained agent checkpoint")->required();
    capacity->add_option("--n", n_text, "fleet sizes: one value, a comma list, or lo..hi");
    capacity->add_option("--trials", trials, "trials per fleet size");

    auto* compare = app.add_subcommand("compare-rewards", "Train both shaping variants side by side");
    compare->add_option("config", config_path, "run configuration file")->required();

    auto* replay = app.add_subcommand("replay", "Re-fly one saved scenario and export its trajectory");
    replay->add_option("scenario", scenario_path, "scenario file")->required();
    replay->add_option("checkpoint", checkpoint, "trained agent checkpoint")->required();
    replay->add_option("--out", replay_out, "trajectory CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (train->parsed()) return run_train(config_path);
        if (evaluate->parsed()) return run_evaluate(config_path, checkpoint);
        if (capacity->parsed()) return run_capacity(config_path, checkpoint, n_text, trials);
        if (compare->parsed()) return run_compare(config_path);
        if (replay->parsed()) return run_replay(scenario_path, checkpoint, replay_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
