// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line each. Exit code is the number of failed criteria.
// Optionally pass criterion numbers to run a subset, e.g. `acceptance 1 4 11`.

#include "sarinv/experiments.hpp"
#include "support/chain_mdp.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>

using namespace sarinv;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += "FAILED: " + what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(double v, int prec = 4) {
    std::ostringstream ss;
    ss.precision(prec);
    ss << v;
    return ss.str();
}

// Artifacts shared by the agent-level criteria so training happens once.
struct SharedArtifacts {
    ExperimentConfig config;
    fs::path dir;
    std::optional<Scene> scene;
    std::optional<TrainResult> coarse;
    std::optional<RegressorModel> regressor;
    std::optional<TrainResult> fine;

    const Scene& get_scene() {
        if (!scene) scene = make_scene(config);
        return *scene;
    }
    const TrainResult& get_coarse() {
        if (!coarse) {
            std::cout << "  [training coarse agent: " << config.agent.episodes << " episodes]\n";
            coarse = train_inversion_agent(config, get_scene(), dir.string());
        }
        return *coarse;
    }
    const RegressorModel& get_regressor() {
        if (!regressor) {
            std::cout << "  [training regressor on the 576-image grid]\n";
            regressor = train_regressor(config, get_scene());
        }
        return *regressor;
    }
    const TrainResult& get_fine() {
        if (!fine) {
            std::cout << "  [training fine agent: " << config.fine_episodes << " episodes]\n";
            fine = train_fine_agent(config, get_scene(), get_regressor(), dir.string());
        }
        return *fine;
    }
};

// --------------------------------------------------------------- criterion 1

Outcome criterion_geometry() {
    Outcome out;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> alpha(-90.0, 90.0);
    std::uniform_real_distribution<double> beta(-720.0, 720.0);
    double worst_orth = 0.0, worst_det = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const RotationMatrix r = rotation_matrix({alpha(rng), beta(rng)});
        worst_orth = std::max(worst_orth,
                              (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
        worst_det = std::max(worst_det, std::abs(r.determinant() - 1.0));
    }
    out.require(worst_orth < 1e-9, "orthonormality residual " + fmt(worst_orth));
    out.require(worst_det < 1e-9, "determinant residual " + fmt(worst_det));
    out.require(projection_units(100, 45.0) == 100, "projection_units(100, 45) != 100");
    out.note("orth " + fmt(worst_orth, 2) + ", det " + fmt(worst_det, 2));
    return out;
}

// --------------------------------------------------------------- criterion 2

Outcome criterion_renderer() {
    Outcome out;
    const Scene scene = build_scene(box_mesh(1, 1, 1), kTargetTexture, kBackgroundTexture, 5);
    RenderConfig rc;
    rc.seed = 6;

    const SarImage a = render(scene, {52.0, 123.25}, rc);
    out.require(a.intensity == render(scene, {52.0, 123.25}, rc).intensity, "determinism");
    out.require(a.intensity == render(scene, {52.0, 483.25}, rc).intensity, "azimuth periodicity");

    Scene doubled = scene;
    for (auto& t : doubled.target.face_texture) t *= 2.0;
    for (auto& t : doubled.ground.face_texture) t *= 2.0;
    out.require(render(doubled, {52.0, 123.25}, rc).intensity == (2.0 * a.intensity).eval(),
                "texture linearity");

    Scene ground_only = scene;
    ground_only.target = TriangleMesh{};
    int total_shadow = 0;
    for (double alpha : {30.0, 45.0, 60.0, 75.0}) {
        const RenderParts full = render_parts(scene, {alpha, 0.0}, rc);
        const RenderParts open = render_parts(ground_only, {alpha, 0.0}, rc);
        const auto& frame = full.frame;
        const double sa = std::sin(deg2rad(alpha));
        const auto interval = oracle::box_shadow_interval(-0.5, 0.5, 1.0, alpha);
        const int row_lo = frame.range_bin(frame.slant_center - 0.5 * sa);
        const int row_hi = frame.range_bin(frame.slant_center - interval.x_lo * sa);

        int target_min_row = frame.size;
        for (int r = 0; r < frame.size; ++r) {
            for (int c = 0; c < frame.size; ++c) {
                if (full.target(r, c) > 0.0) {
                    target_min_row = std::min(target_min_row, r);
                }
            }
        }
        int shadow = 0;
        bool ordered = true, in_interval = true;
        for (int r = 0; r < frame.size; ++r) {
            for (int c = 0; c < frame.size; ++c) {
                if (open.ground(r, c) > 0.0 && full.ground(r, c) == 0.0) {
                    ++shadow;
                    ordered &= r > target_min_row;
                    in_interval &= r >= row_lo - 1 && r <= row_hi + 1;
                }
            }
        }
        total_shadow += shadow;
        out.require(shadow > 0, "no shadow at alpha " + fmt(alpha, 3));
        out.require(ordered, "shadow not beyond target at alpha " + fmt(alpha, 3));
        out.require(in_interval, "shadow outside ray-cast interval at alpha " + fmt(alpha, 3));
    }
    out.note("shadow pixels over 4 angles: " + std::to_string(total_shadow));
    return out;
}

// --------------------------------------------------------------- criterion 3

Outcome criterion_gamma() {
    Outcome out;
    const int n = 1'000'000;
    const auto target = sample_gamma(kTargetTexture, n, 2024);
    double mean = 0.0;
    for (double v : target) mean += v;
    mean /= n;
    const double expected_mean = kTargetTexture.shape * kTargetTexture.scale;  // 0.374382
    out.require(std::abs(mean - expected_mean) < 0.01 * expected_mean,
                "target mean " + fmt(mean, 6) + " vs " + fmt(expected_mean, 6));

    const auto bg = sample_gamma(kBackgroundTexture, n, 2025);
    double bmean = 0.0;
    for (double v : bg) bmean += v;
    bmean /= n;
    double var = 0.0;
    for (double v : bg) var += (v - bmean) * (v - bmean);
    var /= n;
    const double expected_var = kBackgroundTexture.shape * kBackgroundTexture.scale * kBackgroundTexture.scale;
    out.require(std::abs(var - expected_var) < 0.03 * expected_var,
                "background variance " + fmt(var, 6) + " vs " + fmt(expected_var, 6));
    out.note("mean " + fmt(mean, 6) + ", var " + fmt(var, 6));
    return out;
}

// --------------------------------------------------------------- criterion 4

Outcome criterion_rewards() {
    Outcome out;

    // memory-difference telescoping over 1000 random reward paths
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> uni(-90.0, 0.0);
    double worst = 0.0;
    for (int ep = 0; ep < 1000; ++ep) {
        std::vector<double> ra(21), rb(21);
        for (auto& v : ra) v = uni(rng);
        for (auto& v : rb) v = uni(rng);
        double sum = 0.0;
        for (int t = 1; t <= 20; ++t) {
            sum += reward_base(ra[static_cast<std::size_t>(t)], ra[static_cast<std::size_t>(t - 1)],
                               rb[static_cast<std::size_t>(t)], rb[static_cast<std::size_t>(t - 1)]);
        }
        worst = std::max(worst, std::abs(sum - ((ra[20] - ra[0]) + (rb[20] - rb[0]))));
    }
    out.require(worst < 1e-9, "telescoping residual " + fmt(worst));

    // 10k-step environment fuzz for component ranges, bounds and clamping
    EnvConfig env_cfg;
    env_cfg.max_steps = 16;
    RenderConfig rc;
    rc.image_size = 48;
    rc.samples_per_facet = 8;
    Environment env(build_scene(box_mesh(1.0, 0.6, 0.8), kTargetTexture, kBackgroundTexture, 5, 8),
                    rc, env_cfg);
    std::uniform_int_distribution<int> pick(1, 24);
    long steps = 0;
    int episode = 0;
    bool ranges_ok = true, bounds_ok = true;
    double env_worst = 0.0;
    while (steps < 10000) {
        env.reset(derive_seed(4242, 9, static_cast<std::uint64_t>(episode++)));
        const double e0 = env.trace().front().err_alpha + env.trace().front().err_beta;
        double base_sum = 0.0;
        while (!env.done()) {
            const StepOutcome step = env.step(pick(rng));
            ++steps;
            ranges_ok &= step.info.r1 > 0.0 && step.info.r1 <= 2.0;
            ranges_ok &= step.info.r2 == 0.0 || step.info.r2 == 5.0 || step.info.r2 == 10.0 ||
                         step.info.r2 == 15.0;
            ranges_ok &= step.info.r3 == 0.0 || step.info.r3 == -10.0;
            bounds_ok &= env.current().alpha >= 30.0 && env.current().alpha <= 75.0;
            bounds_ok &= env.current().beta >= 0.0 && env.current().beta < 360.0;
            base_sum += step.info.r_base;
        }
        const auto& last = env.trace().back();
        env_worst = std::max(env_worst, std::abs(base_sum - (e0 - (last.err_alpha + last.err_beta))));
    }
    out.require(ranges_ok, "reward component out of range during fuzz");
    out.require(bounds_ok, "angles left their bounds during fuzz");
    out.require(env_worst < 1e-9, "episode telescoping residual " + fmt(env_worst));

    const BoundaryResult high = reward_boundary(123.0);
    const BoundaryResult low = reward_boundary(-40.0);
    out.require(high.alpha == 75.0 && high.penalty == -10.0, "upper clamp");
    out.require(low.alpha == 30.0 && low.penalty == -10.0, "lower clamp");
    out.note(std::to_string(steps) + " fuzz steps, residual " + fmt(env_worst, 2));
    return out;
}

// --------------------------------------------------------------- criterion 5

Outcome criterion_agent_numerics() {
    Outcome out;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    double worst_grad = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        DuelingNet net(6, 4, 3, 5, 3000 + static_cast<std::uint64_t>(trial));
        const int batch = 3;
        Eigen::MatrixXd states(6, batch);
        std::vector<int> actions(batch);
        Eigen::VectorXd targets(batch), weights(batch);
        for (int i = 0; i < batch; ++i) {
            for (int r = 0; r < 6; ++r) states(r, i) = uni(rng);
            actions[static_cast<std::size_t>(i)] = static_cast<int>(rng() % 5);
            targets[i] = uni(rng);
            weights[i] = 0.5 + 0.25 * (uni(rng) + 1.0);
        }
        worst_grad = std::max(worst_grad,
                              oracle::max_gradient_mismatch(net, states, actions, targets, weights));
    }
    out.require(worst_grad < 1e-4, "gradient mismatch " + fmt(worst_grad));

    DuelingNet net(10, 8, 6, 25, 77);
    Eigen::MatrixXd states(10, 4);
    for (Eigen::Index r = 0; r < 10; ++r) {
        for (Eigen::Index c = 0; c < 4; ++c) states(r, c) = uni(rng);
    }
    DuelingNet shifted = net;
    shifted.advantage_head().b.array() += 1000.0;
    const double shift_residual = (net.forward(states) - shifted.forward(states)).cwiseAbs().maxCoeff();
    out.require(shift_residual < 1e-12, "dueling shift residual " + fmt(shift_residual));

    // double-Q targets against the exhaustive argmax oracle
    DuelingNet online(6, 5, 4, 25, 11);
    DuelingNet target_net(6, 5, 4, 25, 12);
    bool targets_exact = true;
    std::vector<Transition> batch(64);
    std::vector<const Transition*> refs;
    for (auto& t : batch) {
        t.state = Eigen::VectorXd::NullaryExpr(6, [&] { return uni(rng); });
        t.next_state = Eigen::VectorXd::NullaryExpr(6, [&] { return uni(rng); });
        t.reward = uni(rng);
        t.done = uni(rng) > 0.6;
        refs.push_back(&t);
    }
    const Eigen::VectorXd y = td_target(refs, online, target_net, 0.96);
    std::vector<int> pending;
    for (int i = 0; i < 64; ++i) {
        if (!batch[static_cast<std::size_t>(i)].done) pending.push_back(i);
    }
    Eigen::MatrixXd bootstrap(6, static_cast<Eigen::Index>(pending.size()));
    for (std::size_t k = 0; k < pending.size(); ++k) {
        bootstrap.col(static_cast<Eigen::Index>(k)) =
            batch[static_cast<std::size_t>(pending[k])].next_state;
    }
    const Eigen::MatrixXd qo = online.forward(bootstrap);
    const Eigen::MatrixXd qt = target_net.forward(bootstrap);
    std::vector<double> expected(64);
    for (int i = 0; i < 64; ++i) expected[static_cast<std::size_t>(i)] = batch[static_cast<std::size_t>(i)].reward;
    for (std::size_t k = 0; k < pending.size(); ++k) {
        int best = 0;
        for (int a = 1; a < 25; ++a) {
            if (qo(a, static_cast<Eigen::Index>(k)) > qo(best, static_cast<Eigen::Index>(k))) best = a;
        }
        expected[static_cast<std::size_t>(pending[k])] += 0.96 * qt(best, static_cast<Eigen::Index>(k));
    }
    for (int i = 0; i < 64; ++i) targets_exact &= y[i] == expected[static_cast<std::size_t>(i)];
    out.require(targets_exact, "double-Q targets differ from the exhaustive oracle");

    // sum-tree consistency under a fuzzed interleaving of pushes and updates
    SumTree tree(1 << 14);
    std::vector<double> shadow(1 << 14, 0.0);
    std::uniform_int_distribution<std::size_t> pick(0, (1 << 14) - 1);
    std::uniform_real_distribution<double> prio(0.0, 10.0);
    for (int op = 0; op < 100000; ++op) {
        const std::size_t i = pick(rng);
        const double p = prio(rng);
        tree.set(i, p);
        shadow[i] = p;
    }
    double total = 0.0;
    for (double v : shadow) total += v;
    const double tree_residual = std::abs(tree.total() - total) / std::max(total, 1.0);
    out.require(tree_residual < 1e-6, "sum-tree residual " + fmt(tree_residual));
    out.note("grad " + fmt(worst_grad, 2) + ", tree " + fmt(tree_residual, 2));
    return out;
}

// --------------------------------------------------------------- criterion 6

Outcome criterion_chain_mdp() {
    Outcome out;
    using sarinv::testsupport::ChainEnv;
    ChainEnv env(20);
    TrainConfig cfg;
    cfg.episodes = 200;
    cfg.batch = 32;
    cfg.learn_start = 64;
    cfg.lr = 5e-3;
    cfg.gamma = 0.5;
    cfg.updates_per_step = 2;
    cfg.hidden1 = 64;
    cfg.hidden2 = 32;
    cfg.target_sync = 100;
    cfg.replay_capacity = 10000;
    cfg.seed = 99;
    const TrainResult result = train(env, cfg);

    const sarinv::testsupport::ChainValueIteration vi(env.table(), cfg.gamma);
    int matches = 0;
    for (int s = 0; s < ChainEnv::kStates; ++s) {
        const Eigen::VectorXd q = result.net.forward_one(ChainEnv::encode(s - ChainEnv::kRange));
        int best = 0;
        for (int a = 1; a < q.size(); ++a) {
            if (q[a] > q[best]) best = a;
        }
        const auto optimal = vi.optimal_deltas(env.table(), s);
        for (double d : optimal) {
            if (d == env.table()[best].d_alpha) {
                ++matches;
                break;
            }
        }
    }
    const double rate = static_cast<double>(matches) / ChainEnv::kStates;
    out.require(rate >= 0.95, "policy match rate " + fmt(rate));
    out.note("match " + std::to_string(matches) + "/" + std::to_string(ChainEnv::kStates));
    return out;
}

// --------------------------------------------------------------- criterion 7

Outcome criterion_end_to_end(SharedArtifacts& shared) {
    Outcome out;
    const TrainResult& trained = shared.get_coarse();

    const auto specs = make_test_set(shared.config, shared.config.eval_episodes);
    Environment eval_env = make_environment(shared.config, shared.get_scene(), /*training=*/false);
    const auto drl = evaluate(trained.net, eval_env, shared.config.eval_episodes,
                              shared.config.test_seed, &specs);
    const MetricsRecord drl_metrics = compute_metrics(drl);

    Environment rand_env = make_environment(shared.config, shared.get_scene(), /*training=*/false);
    const auto rnd = random_policy(rand_env, shared.config.eval_episodes, shared.config.test_seed,
                                   &specs);
    const MetricsRecord rnd_metrics = compute_metrics(rnd);

    out.require(drl_metrics.mae_mean <= 6.0, "MAE_mean " + fmt(drl_metrics.mae_mean));
    out.require(drl_metrics.mae_mean <= 0.5 * rnd_metrics.mae_mean,
                "agent " + fmt(drl_metrics.mae_mean) + " not half of random " +
                    fmt(rnd_metrics.mae_mean));
    out.note("agent MAE " + fmt(drl_metrics.mae_mean) + " (alpha " + fmt(drl_metrics.mae_alpha) +
             ", beta " + fmt(drl_metrics.mae_beta) + "), random MAE " + fmt(rnd_metrics.mae_mean));
    return out;
}

// --------------------------------------------------------------- criterion 8

Outcome criterion_behavioral(SharedArtifacts& shared) {
    Outcome out;
    const TrainResult& trained = shared.get_coarse();
    const BehavioralResult behavior = run_behavioral(shared.config, shared.get_scene(), trained.net,
                                                     shared.dir.string(), &trained.curve);

    double first50 = 0.0, trailing100 = 0.0;
    for (int i = 0; i < 50; ++i) first50 += trained.curve[static_cast<std::size_t>(i)].cum_reward;
    first50 /= 50.0;
    const std::size_t n = trained.curve.size();
    for (std::size_t i = n - 100; i < n; ++i) trailing100 += trained.curve[i].cum_reward;
    trailing100 /= 100.0;
    out.require(trailing100 > first50, "reward curve trailing-100 mean " + fmt(trailing100) +
                                           " vs first-50 mean " + fmt(first50));

    const auto& med = behavior.median_err_by_step;
    out.require(med[1] >= med[5] && med[5] >= med[15],
                "median error not non-increasing: " + fmt(med[1]) + ", " + fmt(med[5]) + ", " +
                    fmt(med[15]));
    out.require(behavior.early_level1_freq > behavior.late_level1_freq,
                "early level-1 freq " + fmt(behavior.early_level1_freq) + " vs late " +
                    fmt(behavior.late_level1_freq));
    out.note("reward " + fmt(first50, 3) + " -> " + fmt(trailing100, 3) + "; med err steps 1/5/15: " +
             fmt(med[1], 3) + "/" + fmt(med[5], 3) + "/" + fmt(med[15], 3) + "; L1 freq " +
             fmt(behavior.early_level1_freq, 3) + " -> " + fmt(behavior.late_level1_freq, 3));
    return out;
}

// --------------------------------------------------------------- criterion 9

Outcome criterion_comparison(SharedArtifacts& shared) {
    Outcome out;
    ComparisonArtifacts artifacts;
    artifacts.coarse_net = &shared.get_coarse().net;
    artifacts.regressor = &shared.get_regressor();
    artifacts.fine_net = &shared.get_fine().net;
    const auto rows = run_comparison(shared.config, shared.dir.string(), artifacts);

    auto find = [&rows](const std::string& name) -> const MetricsRecord& {
        for (const auto& row : rows) {
            if (row.method == name) return row.metrics;
        }
        throw std::logic_error("comparison row missing: " + name);
    };
    const MetricsRecord& drl = find("DRL");
    const MetricsRecord& hybrid = find("DL+DRL");
    const MetricsRecord& ga = find("GA");
    const MetricsRecord& pso = find("PSO");

    out.require(rows.size() == 6, "expected 6 rows, got " + std::to_string(rows.size()));
    out.require(hybrid.mae_mean <= drl.mae_mean,
                "hybrid MAE " + fmt(hybrid.mae_mean) + " vs DRL " + fmt(drl.mae_mean));
    out.require(ga.runtime_s >= 10.0 * hybrid.runtime_s,
                "GA runtime " + fmt(ga.runtime_s) + " not 10x hybrid " + fmt(hybrid.runtime_s));
    out.require(pso.runtime_s >= 10.0 * hybrid.runtime_s,
                "PSO runtime " + fmt(pso.runtime_s) + " not 10x hybrid " + fmt(hybrid.runtime_s));
    out.note("MAE: hybrid " + fmt(hybrid.mae_mean) + " <= DRL " + fmt(drl.mae_mean) +
             "; runtimes GA/PSO/hybrid " + fmt(ga.runtime_s, 3) + "/" + fmt(pso.runtime_s, 3) + "/" +
             fmt(hybrid.runtime_s, 3) + " s");
    return out;
}

// -------------------------------------------------------------- criterion 10

Outcome criterion_ablation(SharedArtifacts& shared) {
    Outcome out;
    const auto rows = run_ablation(shared.config, shared.dir.string());
    out.require(rows.size() == 7, "expected 7 rows, got " + std::to_string(rows.size()));

    int full_outliers = -1;
    for (const auto& row : rows) {
        if (row.variant == "reward_full") full_outliers = row.metrics.outliers;
    }
    out.require(full_outliers >= 0, "reward_full row missing");
    std::string counts;
    for (const auto& row : rows) {
        counts += row.variant + "=" + std::to_string(row.metrics.outliers) + " ";
        if (row.variant != "reward_full") {
            out.require(full_outliers <= row.metrics.outliers,
                        "full model outliers " + std::to_string(full_outliers) + " > " + row.variant +
                            " " + std::to_string(row.metrics.outliers));
        }
    }
    out.note("outliers: " + counts);
    return out;
}

// -------------------------------------------------------------- criterion 11

Outcome criterion_metrics_oracle() {
    Outcome out;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(-200.0, 400.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 17);
        std::vector<double> preds(static_cast<std::size_t>(n)), truths(static_cast<std::size_t>(n));
        for (auto& v : preds) v = uni(rng);
        for (auto& v : truths) v = uni(rng);
        for (bool circular : {false, true}) {
            std::vector<double> errs;
            for (int i = 0; i < n; ++i) {
                errs.push_back(angular_error(preds[static_cast<std::size_t>(i)],
                                             truths[static_cast<std::size_t>(i)], circular));
            }
            worst = std::max(worst, std::abs(mae(preds, truths, circular) - oracle::brute_mae(errs)));
            worst = std::max(worst, std::abs(rmse(preds, truths, circular) - oracle::brute_rmse(errs)));
            worst = std::max(worst,
                             std::abs(medae(preds, truths, circular) - oracle::brute_medae(errs)));
            double mape_sum = 0.0;
            for (int i = 0; i < n; ++i) {
                mape_sum += errs[static_cast<std::size_t>(i)] /
                            std::max(std::abs(truths[static_cast<std::size_t>(i)]), 1.0);
            }
            worst = std::max(worst, std::abs(mape(preds, truths, circular) - mape_sum / n));
        }
    }
    out.require(worst < 1e-12, "metric residual " + fmt(worst));
    out.require(count_outliers({49.0, 50.0, 51.0}) == 1, "strict outlier threshold");
    out.note("residual " + fmt(worst, 2));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    auto wanted = [&selected](int k) { return selected.empty() || selected.count(k) > 0; };

    SharedArtifacts shared;
    shared.config = ExperimentConfig::defaults();
    shared.dir = fs::temp_directory_path() / "sarinv_acceptance";
    fs::create_directories(shared.dir);

    struct Entry {
        int number;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> entries = {
        {1, "geometry properties", [] { return criterion_geometry(); }},
        {2, "renderer properties", [] { return criterion_renderer(); }},
        {3, "gamma sampler moments", [] { return criterion_gamma(); }},
        {4, "reward suite", [] { return criterion_rewards(); }},
        {5, "agent numerics", [] { return criterion_agent_numerics(); }},
        {6, "tabular sanity (chain MDP)", [] { return criterion_chain_mdp(); }},
        {7, "end-to-end inversion", [&shared] { return criterion_end_to_end(shared); }},
        {8, "behavioral reproductions", [&shared] { return criterion_behavioral(shared); }},
        {9, "baseline ordering", [&shared] { return criterion_comparison(shared); }},
        {10, "ablation protocol", [&shared] { return criterion_ablation(shared); }},
        {11, "metrics oracle", [] { return criterion_metrics_oracle(); }},
    };

    int failures = 0;
    for (const auto& entry : entries) {
        if (!wanted(entry.number)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = entry.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << entry.number << ": "
                  << entry.name << " (" << outcome.detail << ") [" << fmt(seconds, 3) << " s]"
                  << std::endl;
        if (!outcome.pass) ++failures;
    }
    return failures;
}
