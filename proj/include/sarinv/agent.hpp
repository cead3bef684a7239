#pragma once

#include "sarinv/environment.hpp"
#include "sarinv/net.hpp"
#include "sarinv/replay.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sarinv {

struct TrainConfig {
    int episodes = 500;
    int batch = 256;
    double lr = 1e-5;
    double gamma = 0.96;
    int target_sync = 200;      // optimizer steps between target refreshes
    double eps_start = 0.5;
    double eps_end = 0.01;
    double eps_fraction = 0.8;  // share of the env-step budget spent annealing
    std::size_t replay_capacity = 50000;
    int learn_start = 256;      // transitions required before updates begin
    int updates_per_step = 1;
    double per_alpha = 0.6;
    double per_beta_start = 0.4;
    double per_beta_end = 1.0;
    double per_floor = 1e-3;
    int hidden1 = 256;
    int hidden2 = 128;
    std::uint64_t seed = 1234;
};

/// Epsilon-greedy over the online Q-values; ties resolve to the lowest index.
int select_action(const DuelingNet& net, const Eigen::VectorXd& state, double epsilon,
                  std::mt19937_64& rng);

/// Double-Q targets: y = r + gamma * Q_target(s', argmax_a Q_online(s', a)),
/// or y = r on terminal transitions.
Eigen::VectorXd td_target(const std::vector<const Transition*>& batch, const DuelingNet& online,
                          const DuelingNet& target, double gamma);

struct EpisodeRow {
    int episode = 0;
    double cum_reward = 0.0;
    double epsilon = 0.0;
    int steps = 0;
};

struct TrainResult {
    DuelingNet net;
    std::vector<EpisodeRow> curve;
    long optimizer_steps = 0;
    long env_steps = 0;
};

/// Single-threaded reference training loop; fully deterministic for a given
/// config on a deterministic environment.
TrainResult train(RlEnv& env, const TrainConfig& config);

void save_reward_curve(const std::vector<EpisodeRow>& curve, const std::string& path);
std::vector<EpisodeRow> load_reward_curve(const std::string& path);

// ---------------------------------------------------------------------------
// Evaluation rollouts

struct EvalEpisode {
    ViewAngles truth{};
    ViewAngles estimate{};
    double err_alpha = 0.0;
    double err_beta = 0.0;
    int steps = 0;
    double seconds = 0.0;
    std::vector<StepInfo> trace;
};

/// Chooses the next action from the current state with the episode env visible
/// (scripted oracle policies may consult it).
using Policy = std::function<int(const Eigen::VectorXd&, const Environment&)>;

/// Runs `episodes` rollouts under `policy`. Episode i resets from
/// derive_seed(seed, i) unless `resets` supplies explicit specs (paired
/// comparisons share those specs across methods).
std::vector<EvalEpisode> evaluate_policy(Environment& env, const Policy& policy, int episodes,
                                         std::uint64_t seed,
                                         const std::vector<ResetSpec>* resets = nullptr);

/// Greedy (epsilon = 0) evaluation of a trained network.
std::vector<EvalEpisode> evaluate(const DuelingNet& net, Environment& env, int episodes,
                                  std::uint64_t seed, const std::vector<ResetSpec>* resets = nullptr);

}  // namespace sarinv
