#include "sarinv/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

namespace sarinv {

namespace {

namespace fs = std::filesystem;

double now_seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

}  // namespace

std::vector<ResetSpec> make_test_set(const ExperimentConfig& config, int episodes) {
    std::vector<ResetSpec> specs;
    specs.reserve(static_cast<std::size_t>(episodes));
    for (int i = 0; i < episodes; ++i) {
        const std::uint64_t base = derive_seed(config.test_seed, 900, static_cast<std::uint64_t>(i));
        std::mt19937_64 rng(base);
        std::uniform_real_distribution<double> alpha(config.env.alpha_min, config.env.alpha_max);
        std::uniform_real_distribution<double> beta(0.0, 360.0);
        ResetSpec spec;
        spec.seed = base;
        spec.truth = ViewAngles{alpha(rng), beta(rng)};
        spec.init = ViewAngles{alpha(rng), beta(rng)};
        specs.push_back(spec);
    }
    return specs;
}

SarImage input_image_for(const ExperimentConfig& config, const Scene& scene, const ResetSpec& spec) {
    RenderConfig rc = config.render;
    rc.alpha_min = config.env.alpha_min;
    rc.alpha_max = config.env.alpha_max;
    rc.seed = derive_seed(spec.seed, 31);  // the seed an environment reset derives
    return render(scene, *spec.truth, rc);
}

TrainResult train_inversion_agent(const ExperimentConfig& config, const Scene& scene,
                                  const std::string& out_dir) {
    Environment env = make_environment(config, scene, /*training=*/true);
    TrainResult result = train(env, config.agent);
    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        result.net.save(join(out_dir, "agent.ckpt"));
        save_reward_curve(result.curve, join(out_dir, "reward_curve.csv"));
    }
    return result;
}

RegressorModel train_regressor(const ExperimentConfig& config, const Scene& scene) {
    RenderConfig rc = config.render;
    rc.alpha_min = config.env.alpha_min;
    rc.alpha_max = config.env.alpha_max;
    std::vector<std::pair<SarImage, ViewAngles>> samples;
    const GridSpec grid;
    for (double a = grid.alpha_start; a <= grid.alpha_stop + 1e-9; a += grid.alpha_step) {
        for (double b = grid.beta_start; b <= grid.beta_stop + 1e-9; b += grid.beta_step) {
            RenderConfig one = rc;
            one.seed = derive_seed(config.dataset_seed, 7, samples.size());
            samples.push_back({render(scene, {a, b}, one), ViewAngles{a, b}});
        }
    }
    return dl_train(samples, config.dl, SearchBounds{config.env.alpha_min, config.env.alpha_max});
}

namespace {

/// Environment whose episodes start at the regressor's prediction for the
/// episode's input image, mirroring the deployed hybrid pipeline.
class RegressorInitEnv final : public RlEnv {
  public:
    RegressorInitEnv(const ExperimentConfig& config, const Scene& scene, Environment env,
                     const RegressorModel& regressor)
        : config_(config), scene_(scene), env_(std::move(env)), regressor_(regressor) {}

    int state_dim() const override { return env_.state_dim(); }
    int action_count() const override { return env_.action_count(); }
    int max_steps() const override { return env_.max_steps(); }

    Eigen::VectorXd reset(std::uint64_t seed) override {
        std::mt19937_64 rng(derive_seed(seed, 32));
        std::uniform_real_distribution<double> alpha(config_.env.alpha_min, config_.env.alpha_max);
        std::uniform_real_distribution<double> beta(0.0, 360.0);
        ResetSpec spec;
        spec.seed = seed;
        spec.truth = ViewAngles{alpha(rng), beta(rng)};
        spec.init = dl_predict(regressor_, input_image_for(config_, scene_, spec));
        return env_.reset(spec);
    }

    StepOutcome step(int action) override { return env_.step(action); }

  private:
    const ExperimentConfig& config_;
    const Scene& scene_;
    Environment env_;
    const RegressorModel& regressor_;
};

}  // namespace

TrainResult train_fine_agent(const ExperimentConfig& config, const Scene& scene,
                             const RegressorModel& regressor, const std::string& out_dir) {
    RegressorInitEnv env(config, scene, make_fine_environment(config, scene, /*training=*/true),
                         regressor);
    TrainConfig tc = config.agent;
    tc.episodes = config.fine_episodes;
    tc.seed = derive_seed(config.agent.seed, 5150);
    TrainResult result = train(env, tc);
    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        result.net.save(join(out_dir, "agent_fine.ckpt"));
        save_reward_curve(result.curve, join(out_dir, "reward_curve_fine.csv"));
    }
    return result;
}

std::vector<ComparisonRow> run_comparison(const ExperimentConfig& config, const std::string& out_dir,
                                          const ComparisonArtifacts& artifacts) {
    ensure_dir(out_dir);

    Scene scene = make_scene(config);
    const int n = config.compare_episodes;
    const std::vector<ResetSpec> specs = make_test_set(config, n);

    // artifacts: train whatever was not supplied
    std::optional<TrainResult> trained_coarse;
    const DuelingNet* coarse = artifacts.coarse_net;
    if (!coarse) {
        trained_coarse = train_inversion_agent(config, scene, out_dir);
        coarse = &trained_coarse->net;
    }
    std::optional<RegressorModel> trained_regressor;
    const RegressorModel* regressor = artifacts.regressor;
    if (!regressor) {
        trained_regressor = train_regressor(config, scene);
        regressor = &*trained_regressor;
    }
    std::optional<TrainResult> trained_fine;
    const DuelingNet* fine = artifacts.fine_net;
    if (!fine) {
        trained_fine = train_fine_agent(config, scene, *regressor, out_dir);
        fine = &trained_fine->net;
    }

    RenderConfig fit_rc = config.render;
    fit_rc.alpha_min = config.env.alpha_min;
    fit_rc.alpha_max = config.env.alpha_max;
    const SearchBounds bounds{config.env.alpha_min, config.env.alpha_max};
    const bool circular = config.env.beta_circular;

    auto manual_episode = [&](const ResetSpec& spec, const ViewAngles& estimate, double seconds,
                              int steps) {
        EvalEpisode ep;
        ep.truth = *spec.truth;
        ep.estimate = estimate;
        ep.err_alpha = angular_error(estimate.alpha, spec.truth->alpha, false);
        ep.err_beta = angular_error(estimate.beta, spec.truth->beta, circular);
        ep.steps = steps;
        ep.seconds = seconds;
        return ep;
    };

    std::vector<ComparisonRow> rows;

    {  // GA
        std::vector<EvalEpisode> episodes;
        for (int i = 0; i < n; ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            const SarImage input = input_image_for(config, scene, specs[static_cast<std::size_t>(i)]);
            RenderConfig rc = fit_rc;
            rc.seed = input.seed;
            GaConfig ga = config.ga;
            ga.seed = derive_seed(specs[static_cast<std::size_t>(i)].seed, 41);
            const FeatureVector target = extract(input);
            const InvertResult res = ga_invert(make_fitness_objective(target, scene, rc), ga, bounds);
            episodes.push_back(manual_episode(specs[static_cast<std::size_t>(i)], res.best,
                                              now_seconds(t0), static_cast<int>(res.evaluations)));
            if (i == 0) save_invert_trace(res, join(out_dir, "ga_trace.csv"));
        }
        rows.push_back({"GA", compute_metrics(episodes, circular)});
    }

    {  // PSO
        std::vector<EvalEpisode> episodes;
        for (int i = 0; i < n; ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            const SarImage input = input_image_for(config, scene, specs[static_cast<std::size_t>(i)]);
            RenderConfig rc = fit_rc;
            rc.seed = input.seed;
            PsoConfig pso = config.pso;
            pso.seed = derive_seed(specs[static_cast<std::size_t>(i)].seed, 42);
            const FeatureVector target = extract(input);
            const InvertResult res = pso_invert(make_fitness_objective(target, scene, rc), pso, bounds);
            episodes.push_back(manual_episode(specs[static_cast<std::size_t>(i)], res.best,
                                              now_seconds(t0), static_cast<int>(res.evaluations)));
            if (i == 0) save_invert_trace(res, join(out_dir, "pso_trace.csv"));
        }
        rows.push_back({"PSO", compute_metrics(episodes, circular)});
    }

    {  // DL
        std::vector<EvalEpisode> episodes;
        for (int i = 0; i < n; ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            const SarImage input = input_image_for(config, scene, specs[static_cast<std::size_t>(i)]);
            const ViewAngles estimate = dl_predict(*regressor, input);
            episodes.push_back(manual_episode(specs[static_cast<std::size_t>(i)], estimate,
                                              now_seconds(t0), 0));
        }
        rows.push_back({"DL", compute_metrics(episodes, circular)});
    }

    {  // DRL
        Environment env = make_environment(config, scene, /*training=*/false);
        rows.push_back({"DRL", compute_metrics(evaluate(*coarse, env, n, config.test_seed, &specs),
                                               circular)});
    }

    {  // DL+DRL
        Environment env = make_fine_environment(config, scene, /*training=*/false);
        std::vector<EvalEpisode> episodes;
        for (int i = 0; i < n; ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            const SarImage input = input_image_for(config, scene, specs[static_cast<std::size_t>(i)]);
            const ViewAngles estimate = dl_plus_drl(input, *regressor, *fine, env,
                                                    specs[static_cast<std::size_t>(i)].truth,
                                                    specs[static_cast<std::size_t>(i)].seed);
            episodes.push_back(manual_episode(specs[static_cast<std::size_t>(i)], estimate,
                                              now_seconds(t0), env.steps_taken()));
        }
        rows.push_back({"DL+DRL", compute_metrics(episodes, circular)});
    }

    {  // Random
        Environment env = make_environment(config, scene, /*training=*/false);
        rows.push_back({"Random", compute_metrics(random_policy(env, n, config.test_seed, &specs),
                                                  circular)});
    }

    std::ofstream out(join(out_dir, "comparison.csv"));
    out << metrics_csv_header() << "\n";
    for (const auto& row : rows) out << metrics_csv_row(row.method, row.metrics) << "\n";
    return rows;
}

BehavioralResult run_behavioral(const ExperimentConfig& config, const Scene& scene,
                                const DuelingNet& net, const std::string& out_dir,
                                const std::vector<EpisodeRow>* curve) {
    ensure_dir(out_dir);
    Environment env = make_environment(config, scene, /*training=*/false);
    const int n = config.behavioral_episodes;

    std::vector<ResetSpec> specs;
    {
        ExperimentConfig shifted = config;
        shifted.test_seed = derive_seed(config.test_seed, 1700);
        specs = make_test_set(shifted, n);
    }
    const auto episodes = evaluate(net, env, n, config.test_seed, &specs);

    const int max_steps = config.env.max_steps;
    std::vector<double> norm_sum(static_cast<std::size_t>(max_steps) + 1, 0.0);
    std::vector<std::vector<double>> err_by_step(static_cast<std::size_t>(max_steps) + 1);
    double early_counts[4] = {0, 0, 0, 0};  // terminal, level 1..3
    double late_counts[4] = {0, 0, 0, 0};

    for (const auto& ep : episodes) {
        const auto& trace = ep.trace;
        const double err0 =
            std::max(0.5 * (trace.front().err_alpha + trace.front().err_beta), 1e-9);
        double held = err0;
        for (int t = 0; t <= max_steps; ++t) {
            if (t < static_cast<int>(trace.size())) {
                held = 0.5 * (trace[static_cast<std::size_t>(t)].err_alpha +
                              trace[static_cast<std::size_t>(t)].err_beta);
            }
            norm_sum[static_cast<std::size_t>(t)] += held / err0;
            err_by_step[static_cast<std::size_t>(t)].push_back(held);
        }
        const int taken = static_cast<int>(trace.size()) - 1;  // action rows
        const auto& table = env.actions();
        for (int t = 1; t <= taken; ++t) {
            const auto& row = trace[static_cast<std::size_t>(t)];
            int level = 0;
            for (int a = 0; a < table.size(); ++a) {
                if (table[a].d_alpha == row.action_dalpha && table[a].d_beta == row.action_dbeta) {
                    level = table[a].level;
                    break;
                }
            }
            const bool early = t <= (taken + 1) / 2;
            (early ? early_counts : late_counts)[level] += 1.0;
        }
    }

    BehavioralResult result;
    for (int t = 0; t <= max_steps; ++t) {
        result.norm_mae_by_step.push_back(norm_sum[static_cast<std::size_t>(t)] /
                                          static_cast<double>(episodes.size()));
        auto& errs = err_by_step[static_cast<std::size_t>(t)];
        std::sort(errs.begin(), errs.end());
        result.median_err_by_step.push_back(errs[(errs.size() - 1) / 2]);
    }
    const double early_total = early_counts[0] + early_counts[1] + early_counts[2] + early_counts[3];
    const double late_total = late_counts[0] + late_counts[1] + late_counts[2] + late_counts[3];
    result.early_level1_freq = early_total > 0 ? early_counts[1] / early_total : 0.0;
    result.late_level1_freq = late_total > 0 ? late_counts[1] / late_total : 0.0;

    {
        std::ofstream out(join(out_dir, "mae_vs_step.csv"));
        out.precision(17);
        out << "step,norm_mae,median_err\n";
        for (int t = 0; t <= max_steps; ++t) {
            out << t << ',' << result.norm_mae_by_step[static_cast<std::size_t>(t)] << ','
                << result.median_err_by_step[static_cast<std::size_t>(t)] << "\n";
        }
    }
    {
        std::ofstream out(join(out_dir, "action_phase.csv"));
        out.precision(17);
        out << "phase,level,frequency\n";
        const char* names[4] = {"terminal", "1", "2", "3"};
        for (int l = 0; l < 4; ++l) {
            out << "early," << names[l] << ','
                << (early_total > 0 ? early_counts[l] / early_total : 0.0) << "\n";
        }
        for (int l = 0; l < 4; ++l) {
            out << "late," << names[l] << ',' << (late_total > 0 ? late_counts[l] / late_total : 0.0)
                << "\n";
        }
    }
    if (curve) save_reward_curve(*curve, join(out_dir, "reward_curve.csv"));
    return result;
}

std::vector<AblationRow> run_ablation(const ExperimentConfig& config, const std::string& out_dir) {
    ensure_dir(out_dir);
    Scene scene = make_scene(config);
    const std::vector<ResetSpec> specs = make_test_set(config, config.ablation_eval_episodes);

    struct Variant {
        std::string name;
        bool sd, fd, r1, r2, r3;
    };
    const std::vector<Variant> variants = {
        {"state_none", false, false, false, false, false},
        {"state_sd", true, false, false, false, false},
        {"state_sd_fd", true, true, false, false, false},
        {"reward_base", true, true, false, false, false},
        {"reward_base_r1", true, true, true, false, false},
        {"reward_base_r1_r2", true, true, true, true, false},
        {"reward_full", true, true, true, true, true},
    };

    std::vector<AblationRow> rows;
    for (const auto& v : variants) {
        ExperimentConfig variant_config = config;
        variant_config.env.state_sequential_diff = v.sd;
        variant_config.env.state_feature_diff = v.fd;
        variant_config.env.use_r1 = v.r1;
        variant_config.env.use_r2 = v.r2;
        variant_config.env.use_r3 = v.r3;
        variant_config.agent.episodes = config.ablation_episodes;

        Environment train_env = make_environment(variant_config, scene, /*training=*/true);
        TrainResult trained = train(train_env, variant_config.agent);

        Environment eval_env = make_environment(variant_config, scene, /*training=*/false);
        const auto episodes = evaluate(trained.net, eval_env, config.ablation_eval_episodes,
                                       config.test_seed, &specs);
        rows.push_back({v.name, compute_metrics(episodes, config.env.beta_circular)});
    }

    std::ofstream out(join(out_dir, "ablation.csv"));
    out << metrics_csv_header() << "\n";
    for (const auto& row : rows) out << metrics_csv_row(row.variant, row.metrics) << "\n";
    return rows;
}

}  // namespace sarinv
