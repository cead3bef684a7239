#pragma once

#include "sarinv/agent.hpp"
#include "sarinv/baselines.hpp"
#include "sarinv/config.hpp"
#include "sarinv/metrics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sarinv {

/// Shared, seeded evaluation episodes: every method sees the same truth,
/// initial estimate and render seed per episode.
std::vector<ResetSpec> make_test_set(const ExperimentConfig& config, int episodes);

/// The input image an environment reset with `spec` would compare against.
SarImage input_image_for(const ExperimentConfig& config, const Scene& scene, const ResetSpec& spec);

/// Trains the coarse-action inversion agent; also writes reward_curve.csv and
/// agent.ckpt under out_dir when it is non-empty.
TrainResult train_inversion_agent(const ExperimentConfig& config, const Scene& scene,
                                  const std::string& out_dir = "");

/// Trains the direct regressor on the 576-image grid (in memory).
RegressorModel train_regressor(const ExperimentConfig& config, const Scene& scene);

/// Trains the fine-action agent used by the hybrid path; its episodes start
/// from the regressor's prediction, matching deployment.
TrainResult train_fine_agent(const ExperimentConfig& config, const Scene& scene,
                             const RegressorModel& regressor, const std::string& out_dir = "");

struct ComparisonRow {
    std::string method;
    MetricsRecord metrics;
};

struct ComparisonArtifacts {
    const DuelingNet* coarse_net = nullptr;
    const DuelingNet* fine_net = nullptr;
    const RegressorModel* regressor = nullptr;
};

/// Six-method comparison (GA, PSO, DL, DRL, DL+DRL, Random) over the shared
/// test set; writes comparison.csv plus per-method inversion traces.
/// Missing artifacts are trained on the spot.
std::vector<ComparisonRow> run_comparison(const ExperimentConfig& config, const std::string& out_dir,
                                          const ComparisonArtifacts& artifacts = {});

struct BehavioralResult {
    std::vector<double> norm_mae_by_step;       // index 0 = 1 by construction
    std::vector<double> median_err_by_step;     // degrees, mean of both angles
    double early_level1_freq = 0.0;
    double late_level1_freq = 0.0;
};

/// Greedy-policy behavior summaries; writes mae_vs_step.csv and
/// action_phase.csv (and copies the training curve when provided).
BehavioralResult run_behavioral(const ExperimentConfig& config, const Scene& scene,
                                const DuelingNet& net, const std::string& out_dir,
                                const std::vector<EpisodeRow>* curve = nullptr);

struct AblationRow {
    std::string variant;
    MetricsRecord metrics;
};

/// Trains and evaluates the three state variants (reward fixed to the memory
/// difference) and the four reward variants (state fixed to both feature
/// blocks) on shared seeds; writes ablation.csv. 7 rows.
std::vector<AblationRow> run_ablation(const ExperimentConfig& config, const std::string& out_dir);

}  // namespace sarinv
