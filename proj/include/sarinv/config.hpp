#pragma once

#include "sarinv/agent.hpp"
#include "sarinv/baselines.hpp"
#include "sarinv/dataset.hpp"
#include "sarinv/environment.hpp"
#include "sarinv/renderer.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sarinv {

/// Raised for malformed config files, unknown keys and bad values; the CLI
/// maps it to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` file with '#' comments.
struct KeyValues {
    std::map<std::string, std::string> values;

    static KeyValues load(const std::string& path);
    /// Parses "key=value"; throws ConfigError when '=' is missing.
    void set(const std::string& assignment);
    void save(const std::string& path) const;
};

struct SceneSpec {
    std::string kind = "tank_like";  // tank_like | box | wedge | obj
    std::string obj_path;
    double box_x = 2.0, box_y = 1.0, box_z = 1.0;
    GammaTexture target_texture = kTargetTexture;
    GammaTexture background_texture = kBackgroundTexture;
    int ground_subdiv = 16;
    double ground_side = 0.0;  // 0 = 4x the target extent
    std::uint64_t seed = 7;
};

/// Every knob of the experiment harness, parsed from a KeyValues map with
/// unknown keys rejected. Defaults reproduce the headline setup.
struct ExperimentConfig {
    SceneSpec scene;
    RenderConfig render;
    EnvConfig env;
    TrainConfig agent;
    GaConfig ga;
    PsoConfig pso;
    DlConfig dl;

    int eval_episodes = 100;
    int compare_episodes = 100;
    int behavioral_episodes = 200;
    int ablation_episodes = 150;
    int ablation_eval_episodes = 100;
    int fine_max_steps = 10;
    int fine_episodes = 300;

    int dataset_count = 100;    // for dist datasets
    std::string dataset_kind = "grid";
    std::uint64_t dataset_seed = 99;

    std::uint64_t test_seed = 4242;  // shared evaluation seed list
    std::string out_dir = "out";

    static ExperimentConfig from(const KeyValues& kv);
    static ExperimentConfig defaults() { return {}; }
    KeyValues to_key_values() const;
    void save(const std::string& path) const { to_key_values().save(path); }
};

/// Builds the configured scene (throws ConfigError on unknown kinds).
Scene make_scene(const ExperimentConfig& config);

/// Environment factory; `training` toggles the sub-threshold early stop.
Environment make_environment(const ExperimentConfig& config, const Scene& scene, bool training);

/// Fine-action variant used by the hybrid inversion path.
Environment make_fine_environment(const ExperimentConfig& config, const Scene& scene, bool training);

}  // namespace sarinv
