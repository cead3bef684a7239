#include "sarinv/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace sarinv {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

/// Typed view over a KeyValues map that tracks which keys were consumed, so
/// leftovers can be rejected by name.
class Reader {
  public:
    explicit Reader(const KeyValues& kv) : kv_(kv) {}

    template <typename T>
    void get(const std::string& key, T& out) {
        const auto it = kv_.values.find(key);
        if (it == kv_.values.end()) return;
        consumed_.insert(key);
        parse(key, it->second, out);
    }

    void finish() const {
        std::vector<std::string> unknown;
        for (const auto& [key, value] : kv_.values) {
            if (!consumed_.count(key)) unknown.push_back(key);
        }
        if (!unknown.empty()) {
            std::string msg = "unknown config key";
            if (unknown.size() > 1) msg += "s";
            msg += ":";
            for (const auto& k : unknown) msg += " " + k;
            throw ConfigError(msg);
        }
    }

  private:
    static void parse(const std::string& key, const std::string& raw, double& out) {
        try {
            std::size_t used = 0;
            out = std::stod(raw, &used);
            if (used != raw.size()) throw std::invalid_argument(raw);
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": expected a number, got '" + raw + "'");
        }
    }
    static void parse(const std::string& key, const std::string& raw, int& out) {
        try {
            std::size_t used = 0;
            out = std::stoi(raw, &used);
            if (used != raw.size()) throw std::invalid_argument(raw);
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": expected an integer, got '" + raw + "'");
        }
    }
    static void parse(const std::string& key, const std::string& raw, std::uint64_t& out) {
        try {
            std::size_t used = 0;
            out = std::stoull(raw, &used);
            if (used != raw.size()) throw std::invalid_argument(raw);
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": expected an unsigned integer, got '" + raw + "'");
        }
    }
    static void parse(const std::string& key, const std::string& raw, bool& out) {
        if (raw == "true" || raw == "1" || raw == "on") {
            out = true;
        } else if (raw == "false" || raw == "0" || raw == "off") {
            out = false;
        } else {
            throw ConfigError("config key " + key + ": expected true/false, got '" + raw + "'");
        }
    }
    static void parse(const std::string&, const std::string& raw, std::string& out) { out = raw; }

    const KeyValues& kv_;
    std::set<std::string> consumed_;
};

}  // namespace

KeyValues KeyValues::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    KeyValues kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ": line " + std::to_string(line_no) + ": expected key = value");
        }
        kv.values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

void KeyValues::set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    }
    values[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

void KeyValues::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config file " + path);
    for (const auto& [key, value] : values) out << key << " = " << value << "\n";
}

ExperimentConfig ExperimentConfig::from(const KeyValues& kv) {
    ExperimentConfig c;
    Reader r(kv);

    r.get("scene.kind", c.scene.kind);
    r.get("scene.obj_path", c.scene.obj_path);
    r.get("scene.box_x", c.scene.box_x);
    r.get("scene.box_y", c.scene.box_y);
    r.get("scene.box_z", c.scene.box_z);
    r.get("scene.target_shape", c.scene.target_texture.shape);
    r.get("scene.target_scale", c.scene.target_texture.scale);
    r.get("scene.background_shape", c.scene.background_texture.shape);
    r.get("scene.background_scale", c.scene.background_texture.scale);
    r.get("scene.ground_subdiv", c.scene.ground_subdiv);
    r.get("scene.ground_side", c.scene.ground_side);
    r.get("scene.seed", c.scene.seed);

    r.get("render.image_size", c.render.image_size);
    r.get("render.samples_per_facet", c.render.samples_per_facet);
    r.get("render.azimuth_window", c.render.azimuth_window);
    r.get("render.range_window", c.render.range_window);
    r.get("render.speckle", c.render.speckle);

    r.get("env.max_steps", c.env.max_steps);
    std::string mode = c.env.action_mode == ActionMode::kCoarse ? "coarse" : "fine";
    r.get("env.action_mode", mode);
    if (mode == "coarse") {
        c.env.action_mode = ActionMode::kCoarse;
    } else if (mode == "fine") {
        c.env.action_mode = ActionMode::kFine;
    } else {
        throw ConfigError("env.action_mode must be coarse or fine, got '" + mode + "'");
    }
    r.get("env.done_error_threshold", c.env.done_error_threshold);
    r.get("env.alpha_min", c.env.alpha_min);
    r.get("env.alpha_max", c.env.alpha_max);
    r.get("env.beta_circular", c.env.beta_circular);
    r.get("env.eta_alpha", c.env.reward.eta_alpha);
    r.get("env.eta_beta", c.env.reward.eta_beta);
    r.get("env.boundary_penalty", c.env.reward.boundary_penalty);
    r.get("env.bonus_coefficient", c.env.reward.bonus_coefficient);
    r.get("env.literal_exp_sign", c.env.reward.literal_exp_sign);
    r.get("env.use_r1", c.env.use_r1);
    r.get("env.use_r2", c.env.use_r2);
    r.get("env.use_r3", c.env.use_r3);
    r.get("env.state_sd", c.env.state_sequential_diff);
    r.get("env.state_fd", c.env.state_feature_diff);
    r.get("env.state_feature_gain", c.env.state_feature_gain);

    r.get("agent.episodes", c.agent.episodes);
    r.get("agent.batch", c.agent.batch);
    r.get("agent.lr", c.agent.lr);
    r.get("agent.gamma", c.agent.gamma);
    r.get("agent.target_sync", c.agent.target_sync);
    r.get("agent.eps_start", c.agent.eps_start);
    r.get("agent.eps_end", c.agent.eps_end);
    r.get("agent.eps_fraction", c.agent.eps_fraction);
    r.get("agent.replay_capacity", c.agent.replay_capacity);
    r.get("agent.learn_start", c.agent.learn_start);
    r.get("agent.updates_per_step", c.agent.updates_per_step);
    r.get("agent.per_alpha", c.agent.per_alpha);
    r.get("agent.per_beta_start", c.agent.per_beta_start);
    r.get("agent.per_beta_end", c.agent.per_beta_end);
    r.get("agent.hidden1", c.agent.hidden1);
    r.get("agent.hidden2", c.agent.hidden2);
    r.get("agent.seed", c.agent.seed);

    r.get("ga.population", c.ga.population);
    r.get("ga.generations", c.ga.generations);
    r.get("ga.tournament", c.ga.tournament);
    r.get("ga.crossover_rate", c.ga.crossover_rate);
    r.get("ga.mut_sigma_alpha", c.ga.mut_sigma_alpha);
    r.get("ga.mut_sigma_beta", c.ga.mut_sigma_beta);
    r.get("ga.mutation_rate", c.ga.mutation_rate);
    r.get("ga.elitism", c.ga.elitism);
    r.get("ga.seed", c.ga.seed);

    r.get("pso.particles", c.pso.particles);
    r.get("pso.iterations", c.pso.iterations);
    r.get("pso.inertia", c.pso.inertia);
    r.get("pso.cognitive", c.pso.cognitive);
    r.get("pso.social", c.pso.social);
    r.get("pso.vmax_alpha", c.pso.vmax_alpha);
    r.get("pso.vmax_beta", c.pso.vmax_beta);
    r.get("pso.seed", c.pso.seed);

    r.get("dl.epochs", c.dl.epochs);
    r.get("dl.batch", c.dl.batch);
    r.get("dl.lr", c.dl.lr);
    r.get("dl.hidden1", c.dl.hidden1);
    r.get("dl.hidden2", c.dl.hidden2);
    r.get("dl.seed", c.dl.seed);

    r.get("eval.episodes", c.eval_episodes);
    r.get("compare.episodes", c.compare_episodes);
    r.get("behavioral.episodes", c.behavioral_episodes);
    r.get("ablate.episodes", c.ablation_episodes);
    r.get("ablate.eval_episodes", c.ablation_eval_episodes);
    r.get("fine.max_steps", c.fine_max_steps);
    r.get("fine.episodes", c.fine_episodes);

    r.get("dataset.kind", c.dataset_kind);
    r.get("dataset.count", c.dataset_count);
    r.get("dataset.seed", c.dataset_seed);

    r.get("test_seed", c.test_seed);
    r.get("out_dir", c.out_dir);

    r.finish();

    if (c.env.max_steps < 1) throw ConfigError("env.max_steps must be positive");
    if (c.render.image_size < 16) throw ConfigError("render.image_size must be >= 16");
    if (c.render.image_size % 16 != 0) throw ConfigError("render.image_size must be divisible by 16");
    if (!(c.env.alpha_min < c.env.alpha_max)) throw ConfigError("env.alpha_min must be below env.alpha_max");
    if (c.dataset_kind != "grid" && c.dataset_kind != "dist") {
        throw ConfigError("dataset.kind must be grid or dist, got '" + c.dataset_kind + "'");
    }
    return c;
}

KeyValues ExperimentConfig::to_key_values() const {
    KeyValues kv;
    auto put = [&kv](const std::string& key, const auto& value) {
        std::ostringstream ss;
        ss.precision(17);
        if constexpr (std::is_same_v<std::decay_t<decltype(value)>, bool>) {
            ss << (value ? "true" : "false");
        } else {
            ss << value;
        }
        kv.values[key] = ss.str();
    };

    put("scene.kind", scene.kind);
    if (!scene.obj_path.empty()) put("scene.obj_path", scene.obj_path);
    put("scene.box_x", scene.box_x);
    put("scene.box_y", scene.box_y);
    put("scene.box_z", scene.box_z);
    put("scene.target_shape", scene.target_texture.shape);
    put("scene.target_scale", scene.target_texture.scale);
    put("scene.background_shape", scene.background_texture.shape);
    put("scene.background_scale", scene.background_texture.scale);
    put("scene.ground_subdiv", scene.ground_subdiv);
    put("scene.ground_side", scene.ground_side);
    put("scene.seed", scene.seed);

    put("render.image_size", render.image_size);
    put("render.samples_per_facet", render.samples_per_facet);
    put("render.azimuth_window", render.azimuth_window);
    put("render.range_window", render.range_window);
    put("render.speckle", render.speckle);

    put("env.max_steps", env.max_steps);
    put("env.action_mode", env.action_mode == ActionMode::kCoarse ? "coarse" : "fine");
    put("env.done_error_threshold", env.done_error_threshold);
    put("env.alpha_min", env.alpha_min);
    put("env.alpha_max", env.alpha_max);
    put("env.beta_circular", env.beta_circular);
    put("env.eta_alpha", env.reward.eta_alpha);
    put("env.eta_beta", env.reward.eta_beta);
    put("env.boundary_penalty", env.reward.boundary_penalty);
    put("env.bonus_coefficient", env.reward.bonus_coefficient);
    put("env.literal_exp_sign", env.reward.literal_exp_sign);
    put("env.use_r1", env.use_r1);
    put("env.use_r2", env.use_r2);
    put("env.use_r3", env.use_r3);
    put("env.state_sd", env.state_sequential_diff);
    put("env.state_fd", env.state_feature_diff);
    put("env.state_feature_gain", env.state_feature_gain);

    put("agent.episodes", agent.episodes);
    put("agent.batch", agent.batch);
    put("agent.lr", agent.lr);
    put("agent.gamma", agent.gamma);
    put("agent.target_sync", agent.target_sync);
    put("agent.eps_start", agent.eps_start);
    put("agent.eps_end", agent.eps_end);
    put("agent.eps_fraction", agent.eps_fraction);
    put("agent.replay_capacity", agent.replay_capacity);
    put("agent.learn_start", agent.learn_start);
    put("agent.updates_per_step", agent.updates_per_step);
    put("agent.per_alpha", agent.per_alpha);
    put("agent.per_beta_start", agent.per_beta_start);
    put("agent.per_beta_end", agent.per_beta_end);
    put("agent.hidden1", agent.hidden1);
    put("agent.hidden2", agent.hidden2);
    put("agent.seed", agent.seed);

    put("ga.population", ga.population);
    put("ga.generations", ga.generations);
    put("ga.tournament", ga.tournament);
    put("ga.crossover_rate", ga.crossover_rate);
    put("ga.mut_sigma_alpha", ga.mut_sigma_alpha);
    put("ga.mut_sigma_beta", ga.mut_sigma_beta);
    put("ga.mutation_rate", ga.mutation_rate);
    put("ga.elitism", ga.elitism);
    put("ga.seed", ga.seed);

    put("pso.particles", pso.particles);
    put("pso.iterations", pso.iterations);
    put("pso.inertia", pso.inertia);
    put("pso.cognitive", pso.cognitive);
    put("pso.social", pso.social);
    put("pso.vmax_alpha", pso.vmax_alpha);
    put("pso.vmax_beta", pso.vmax_beta);
    put("pso.seed", pso.seed);

    put("dl.epochs", dl.epochs);
    put("dl.batch", dl.batch);
    put("dl.lr", dl.lr);
    put("dl.hidden1", dl.hidden1);
    put("dl.hidden2", dl.hidden2);
    put("dl.seed", dl.seed);

    put("eval.episodes", eval_episodes);
    put("compare.episodes", compare_episodes);
    put("behavioral.episodes", behavioral_episodes);
    put("ablate.episodes", ablation_episodes);
    put("ablate.eval_episodes", ablation_eval_episodes);
    put("fine.max_steps", fine_max_steps);
    put("fine.episodes", fine_episodes);

    put("dataset.kind", dataset_kind);
    put("dataset.count", dataset_count);
    put("dataset.seed", dataset_seed);

    put("test_seed", test_seed);
    put("out_dir", out_dir);
    return kv;
}

Scene make_scene(const ExperimentConfig& config) {
    TriangleMesh target;
    if (config.scene.kind == "tank_like") {
        target = tank_like_mesh();
    } else if (config.scene.kind == "box") {
        target = box_mesh(config.scene.box_x, config.scene.box_y, config.scene.box_z);
    } else if (config.scene.kind == "wedge") {
        target = wedge_mesh(config.scene.box_x, config.scene.box_y, config.scene.box_z);
    } else if (config.scene.kind == "obj") {
        if (config.scene.obj_path.empty()) throw ConfigError("scene.kind=obj requires scene.obj_path");
        target = load_obj(config.scene.obj_path);
    } else {
        throw ConfigError("unknown scene.kind '" + config.scene.kind + "'");
    }
    return build_scene(target, config.scene.target_texture, config.scene.background_texture,
                       config.scene.seed, config.scene.ground_subdiv, config.scene.ground_side);
}

Environment make_environment(const ExperimentConfig& config, const Scene& scene, bool training) {
    EnvConfig env = config.env;
    env.training = training;
    return Environment(scene, config.render, env);
}

Environment make_fine_environment(const ExperimentConfig& config, const Scene& scene, bool training) {
    EnvConfig env = config.env;
    env.training = training;
    env.action_mode = ActionMode::kFine;
    env.max_steps = config.fine_max_steps;
    return Environment(scene, config.render, env);
}

}  // namespace sarinv
