#pragma once

#include "sarinv/agent.hpp"
#include "sarinv/dataset.hpp"
#include "sarinv/environment.hpp"
#include "sarinv/features.hpp"
#include "sarinv/net.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sarinv {

struct SearchBounds {
    double alpha_min = 30.0;
    double alpha_max = 75.0;
};

/// Lower-is-better objective over candidate view angles.
using Objective = std::function<double(const ViewAngles&)>;

/// L1 feature distance between a render at `candidate` and the target
/// descriptor. Zero when candidate, scene, seed and config match the input.
double fitness(const ViewAngles& candidate, const FeatureVector& target_features, const Scene& scene,
               const RenderConfig& config);

Objective make_fitness_objective(const FeatureVector& target_features, const Scene& scene,
                                 const RenderConfig& config);

struct TraceRow {
    int iter = 0;
    double best_fitness = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

struct InvertResult {
    ViewAngles best{};
    double best_fitness = 0.0;
    std::vector<TraceRow> trace;  // best-so-far per generation/iteration
    long evaluations = 0;
};

void save_invert_trace(const InvertResult& result, const std::string& path);

struct GaConfig {
    int population = 30;
    int generations = 50;
    int tournament = 3;
    double crossover_rate = 0.9;  // per-pair blend probability
    double mut_sigma_alpha = 3.0;
    double mut_sigma_beta = 12.0;
    double mutation_rate = 0.2;  // per gene
    int elitism = 1;
    std::uint64_t seed = 1;
};

/// Genetic search over (alpha, beta); azimuth genes blend and mutate along the
/// circle. Elitism keeps the best-so-far trace non-increasing.
InvertResult ga_invert(const Objective& objective, const GaConfig& config,
                       const SearchBounds& bounds = {});

struct PsoConfig {
    int particles = 30;
    int iterations = 50;
    double inertia = 0.72;
    double cognitive = 1.49;
    double social = 1.49;
    double vmax_alpha = 8.0;
    double vmax_beta = 45.0;
    std::uint64_t seed = 1;
};

/// Global-best particle swarm; azimuth attraction uses the shortest arc and
/// velocities respect the clamp at every iteration.
InvertResult pso_invert(const Objective& objective, const PsoConfig& config,
                        const SearchBounds& bounds = {});

// ---------------------------------------------------------------------------
// Direct regression baseline

/// Dense regressor from normalized descriptors to (alpha_norm, sin beta,
/// cos beta). Inputs are quantized to the 8-bit quicklook before description,
/// matching the stored training corpus.
struct RegressorModel {
    Mlp net;
    FeatureNormalizer normalizer;
    SearchBounds bounds{};

    void save(const std::string& prefix) const;  // prefix.mlp and prefix.norm
    static RegressorModel load(const std::string& prefix);
};

struct DlConfig {
    int epochs = 400;
    int batch = 64;
    double lr = 1e-3;
    int hidden1 = 128;
    int hidden2 = 64;
    std::uint64_t seed = 5;
};

/// Trains on the manifest's PGM files. Throws on an empty dataset.
RegressorModel dl_train(const DatasetManifest& manifest, const DlConfig& config,
                        const SearchBounds& bounds = {});
/// In-memory variant used by tests and the comparison harness.
RegressorModel dl_train(const std::vector<std::pair<SarImage, ViewAngles>>& samples,
                        const DlConfig& config, const SearchBounds& bounds = {});

ViewAngles dl_predict(const RegressorModel& model, const SarImage& image);

/// Hybrid inversion: the environment episode starts from the regressor's
/// prediction instead of a random draw. `env` is expected to use the fine
/// action table with a 10-step budget.
ViewAngles dl_plus_drl(const SarImage& input, const RegressorModel& model, const DuelingNet& net,
                       Environment& env, std::optional<ViewAngles> truth, std::uint64_t seed);

/// Uniform-random actions for the full step budget; the do-nothing control.
std::vector<EvalEpisode> random_policy(Environment& env, int episodes, std::uint64_t seed,
                                       const std::vector<ResetSpec>* resets = nullptr);

}  // namespace sarinv
