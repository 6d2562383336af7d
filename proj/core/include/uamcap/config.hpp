#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uamcap/airspace.hpp"
#include "uamcap/ddpg.hpp"
#include "uamcap/rewards.hpp"
#include "uamcap/training.hpp"

namespace uam {

enum class Profile { DeskScale, PaperScale, Custom };

const char* to_string(Profile p);

struct EvaluationSpec {
    int single_ppz_trials = 50;
    double single_ppz_min_separation = 2'600.0;
    double single_ppz_perturbation = 200.0;
    double origin_spacing = 900.0;
    std::vector<int> capacity_n = {1, 2, 4, 6, 8, 10};
    int capacity_trials = 100;
};

/// Everything one run needs. A profile supplies every default; file keys
/// override field by field. Stage scenarios inherit the environment
/// template, so a stage only names how many entities of each kind it adds.
struct RunConfig {
    Profile profile = Profile::DeskScale;
    std::uint64_t master_seed = 1;
    std::filesystem::path output_dir = "runs";
    int checkpoint_every = 500;
    int metrics_window = 100;
    ScenarioConfig env;
    RewardConfig reward;
    DdpgHyperparams ddpg;
    std::vector<StageSpec> stages;
    EvaluationSpec evaluation;

    void validate() const;  // throws std::invalid_argument naming the field
};

/// Small nets, a 4 km box, 300-step episodes: minutes per training run.
RunConfig desk_scale_config();

/// The full-size counterpart: 10 km box, 800 steps, [300, 400] hidden
/// layers, hard target copies (tau = 1), 1e7 replay slots.
RunConfig paper_scale_config();

/// Strict parse: unknown keys and out-of-range values are errors naming
/// the offending key. Empty text yields the desk-scale defaults.
RunConfig config_from_json(const std::string& text);

/// config_from_json on the file contents, then the UAMCAP_OUTPUT_DIR and
/// UAMCAP_SEED environment overrides.
RunConfig parse_config(const std::filesystem::path& path);

/// Every effective field, so a serialized config pins the whole run;
/// parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& cfg);

}  // namespace uam
