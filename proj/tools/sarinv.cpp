#include "sarinv/experiments.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

namespace fs = std::filesystem;
using namespace sarinv;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "key = value config file");
    cmd->add_option("--set", opts.overrides, "override, e.g. --set env.max_steps=10")->take_all();
    cmd->add_option("--out", opts.out_dir, "output directory");
}

ExperimentConfig resolve_config(const CommonOpts& opts) {
    KeyValues kv;
    if (!opts.config_path.empty()) kv = KeyValues::load(opts.config_path);
    for (const auto& o : opts.overrides) kv.set(o);
    ExperimentConfig config = ExperimentConfig::from(kv);
    if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
    return config;
}

void write_run_records(const ExperimentConfig& config) {
    fs::create_directories(config.out_dir);
    config.save((fs::path(config.out_dir) / "resolved.config").string());
    std::ofstream seeds((fs::path(config.out_dir) / "seeds.txt").string());
    seeds << "scene.seed=" << config.scene.seed << "\n"
          << "agent.seed=" << config.agent.seed << "\n"
          << "dataset.seed=" << config.dataset_seed << "\n"
          << "test_seed=" << config.test_seed << "\n";
}

int cmd_render(const CommonOpts& opts, double alpha, double beta, const std::string& out_path) {
    ExperimentConfig config = resolve_config(opts);
    Scene scene = make_scene(config);
    RenderConfig rc = config.render;
    rc.alpha_min = config.env.alpha_min;
    rc.alpha_max = config.env.alpha_max;
    const SarImage image = render(scene, {alpha, beta}, rc);
    write_pgm(image, out_path);
    write_meta(meta_path_for(out_path), image.angles, image.seed);
    std::cout << "wrote " << out_path << " and " << meta_path_for(out_path) << "\n";
    return 0;
}

int cmd_dataset(const CommonOpts& opts, bool grid, bool dist) {
    ExperimentConfig config = resolve_config(opts);
    if (grid && dist) throw ConfigError("choose one of --grid or --dist");
    if (grid) config.dataset_kind = "grid";
    if (dist) config.dataset_kind = "dist";
    write_run_records(config);
    Scene scene = make_scene(config);
    RenderConfig rc = config.render;
    rc.alpha_min = config.env.alpha_min;
    rc.alpha_max = config.env.alpha_max;
    const std::string dir = (fs::path(config.out_dir) / "images").string();
    DatasetManifest manifest;
    if (config.dataset_kind == "grid") {
        manifest = gen_dataset(scene, rc, GridSpec{}, dir, config.dataset_seed);
    } else {
        DistSpec spec;
        spec.count = config.dataset_count;
        manifest = gen_dataset(scene, rc, spec, dir, config.dataset_seed);
    }
    const std::string manifest_path = (fs::path(config.out_dir) / "manifest.csv").string();
    save_manifest(manifest, manifest_path);
    std::cout << "wrote " << manifest.entries.size() << " images, manifest " << manifest_path << "\n";
    return 0;
}

int cmd_train_agent(const CommonOpts& opts) {
    ExperimentConfig config = resolve_config(opts);
    write_run_records(config);
    Scene scene = make_scene(config);
    TrainResult result = train_inversion_agent(config, scene, config.out_dir);
    std::cout << "trained " << result.curve.size() << " episodes, " << result.optimizer_steps
              << " optimizer steps; checkpoint " << (fs::path(config.out_dir) / "agent.ckpt").string()
              << "\n";
    return 0;
}

int cmd_eval(const CommonOpts& opts, const std::string& checkpoint, const std::string& input_pgm) {
    ExperimentConfig config = resolve_config(opts);
    write_run_records(config);
    Scene scene = make_scene(config);
    const DuelingNet net = DuelingNet::load(checkpoint);
    Environment env = make_environment(config, scene, /*training=*/false);

    if (!input_pgm.empty()) {
        // external-image hook: greedy rollout against a supplied image
        SarImage image;
        image.intensity = read_pgm(input_pgm).cast<double>();
        ResetSpec spec;
        spec.seed = config.test_seed;
        spec.input_features = extract(image);
        Eigen::VectorXd state = env.reset(spec);
        std::mt19937_64 rng(0);
        while (!env.done()) state = env.step(select_action(net, state, 0.0, rng)).state;
        std::cout << "estimate alpha=" << env.current().alpha << " beta=" << env.current().beta
                  << " steps=" << env.steps_taken() << "\n";
        env.write_trace_csv((fs::path(config.out_dir) / "eval_trace.csv").string());
        return 0;
    }

    const auto specs = make_test_set(config, config.eval_episodes);
    const auto episodes = evaluate(net, env, config.eval_episodes, config.test_seed, &specs);
    const MetricsRecord metrics = compute_metrics(episodes, config.env.beta_circular);
    std::ofstream out((fs::path(config.out_dir) / "eval_metrics.csv").string());
    out << metrics_csv_header() << "\n" << metrics_csv_row("DRL", metrics) << "\n";
    std::cout << metrics_csv_header() << "\n" << metrics_csv_row("DRL", metrics) << "\n";
    return 0;
}

int cmd_baseline(const CommonOpts& opts, const std::string& method) {
    ExperimentConfig config = resolve_config(opts);
    write_run_records(config);
    Scene scene = make_scene(config);
    const auto specs = make_test_set(config, config.eval_episodes);
    const bool circular = config.env.beta_circular;

    std::vector<EvalEpisode> episodes;
    if (method == "random") {
        Environment env = make_environment(config, scene, /*training=*/false);
        episodes = random_policy(env, config.eval_episodes, config.test_seed, &specs);
    } else if (method == "ga" || method == "pso") {
        RenderConfig rc = config.render;
        rc.alpha_min = config.env.alpha_min;
        rc.alpha_max = config.env.alpha_max;
        const SearchBounds bounds{config.env.alpha_min, config.env.alpha_max};
        for (std::size_t i = 0; i < specs.size(); ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            const SarImage input = input_image_for(config, scene, specs[i]);
            RenderConfig fit_rc = rc;
            fit_rc.seed = input.seed;
            const FeatureVector target = extract(input);
            InvertResult res;
            if (method == "ga") {
                GaConfig ga = config.ga;
                ga.seed = derive_seed(specs[i].seed, 41);
                res = ga_invert(make_fitness_objective(target, scene, fit_rc), ga, bounds);
            } else {
                PsoConfig pso = config.pso;
                pso.seed = derive_seed(specs[i].seed, 42);
                res = pso_invert(make_fitness_objective(target, scene, fit_rc), pso, bounds);
            }
            if (i == 0) save_invert_trace(res, (fs::path(config.out_dir) / (method + "_trace.csv")).string());
            EvalEpisode ep;
            ep.truth = *specs[i].truth;
            ep.estimate = res.best;
            ep.err_alpha = angular_error(res.best.alpha, specs[i].truth->alpha, false);
            ep.err_beta = angular_error(res.best.beta, specs[i].truth->beta, circular);
            ep.steps = static_cast<int>(res.evaluations);
            ep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            episodes.push_back(ep);
        }
    } else if (method == "dl") {
        const RegressorModel model = train_regressor(config, scene);
        model.save((fs::path(config.out_dir) / "regressor").string());
        for (const auto& spec : specs) {
            const auto t0 = std::chrono::steady_clock::now();
            const SarImage input = input_image_for(config, scene, spec);
            const ViewAngles estimate = dl_predict(model, input);
            EvalEpisode ep;
            ep.truth = *spec.truth;
            ep.estimate = estimate;
            ep.err_alpha = angular_error(estimate.alpha, spec.truth->alpha, false);
            ep.err_beta = angular_error(estimate.beta, spec.truth->beta, circular);
            ep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            episodes.push_back(ep);
        }
    } else {
        throw ConfigError("unknown baseline method '" + method + "' (ga, pso, dl, random)");
    }

    const MetricsRecord metrics = compute_metrics(episodes, circular);
    std::ofstream out((fs::path(config.out_dir) / (method + "_metrics.csv")).string());
    out << metrics_csv_header() << "\n" << metrics_csv_row(method, metrics) << "\n";
    std::cout << metrics_csv_header() << "\n" << metrics_csv_row(method, metrics) << "\n";
    return 0;
}

int cmd_compare(const CommonOpts& opts) {
    ExperimentConfig config = resolve_config(opts);
    write_run_records(config);
    const auto rows = run_comparison(config, config.out_dir);
    std::cout << metrics_csv_header() << "\n";
    for (const auto& row : rows) std::cout << metrics_csv_row(row.method, row.metrics) << "\n";
    return 0;
}

int cmd_behavioral(const CommonOpts& opts, const std::string& checkpoint) {
    ExperimentConfig config = resolve_config(opts);
    write_run_records(config);
    Scene scene = make_scene(config);
    std::optional<TrainResult> trained;
    DuelingNet net;
    std::vector<EpisodeRow> curve;
    if (!checkpoint.empty()) {
        net = DuelingNet::load(checkpoint);
    } else {
        trained = train_inversion_agent(config, scene, config.out_dir);
        net = trained->net;
        curve = trained->curve;
    }
    const BehavioralResult result =
        run_behavioral(config, scene, net, config.out_dir, curve.empty() ? nullptr : &curve);
    std::cout << "early level-1 frequency " << result.early_level1_freq << ", late "
              << result.late_level1_freq << "\n";
    return 0;
}

int cmd_ablate(const CommonOpts& opts) {
    ExperimentConfig config = resolve_config(opts);
    write_run_records(config);
    const auto rows = run_ablation(config, config.out_dir);
    std::cout << metrics_csv_header() << "\n";
    for (const auto& row : rows) std::cout << metrics_csv_row(row.variant, row.metrics) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radar view-angle inversion laboratory"};
    app.require_subcommand(1);

    CommonOpts render_opts, dataset_opts, train_opts, eval_opts, baseline_opts, compare_opts,
        behavioral_opts, ablate_opts;

    auto* render_cmd = app.add_subcommand("render", "render one SAR image");
    double alpha = 45.0, beta = 0.0;
    std::string render_out = "render.pgm";
    render_cmd->add_option("--alpha", alpha, "incidence angle, degrees")->required();
    render_cmd->add_option("--beta", beta, "azimuth angle, degrees")->required();
    render_cmd->add_option("--out", render_out, "output PGM path")->required();
    render_cmd->add_option("--config", render_opts.config_path, "config file");
    render_cmd->add_option("--set", render_opts.overrides, "override key=value")->take_all();

    auto* dataset_cmd = app.add_subcommand("dataset", "render an image dataset with a manifest");
    bool grid = false, dist = false;
    dataset_cmd->add_flag("--grid", grid, "exhaustive 5-degree grid (576 images)");
    dataset_cmd->add_flag("--dist", dist, "sample from the discrete angle lattices");
    add_common(dataset_cmd, dataset_opts);

    auto* train_cmd = app.add_subcommand("train-agent", "train the inversion agent");
    add_common(train_cmd, train_opts);

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a trained agent");
    std::string eval_checkpoint, eval_input;
    eval_cmd->add_option("--checkpoint", eval_checkpoint, "agent checkpoint")->required();
    eval_cmd->add_option("--input", eval_input, "invert a single PGM instead of the seeded test set");
    add_common(eval_cmd, eval_opts);

    auto* baseline_cmd = app.add_subcommand("baseline", "run one comparison method");
    std::string method;
    baseline_cmd->add_option("--method", method, "ga | pso | dl | random")->required();
    add_common(baseline_cmd, baseline_opts);

    auto* compare_cmd = app.add_subcommand("compare", "full six-method comparison table");
    add_common(compare_cmd, compare_opts);

    auto* behavioral_cmd = app.add_subcommand("behavioral", "per-step error and action-phase summaries");
    std::string behavioral_checkpoint;
    behavioral_cmd->add_option("--checkpoint", behavioral_checkpoint, "agent checkpoint (trains when absent)");
    add_common(behavioral_cmd, behavioral_opts);

    auto* ablate_cmd = app.add_subcommand("ablate", "state/reward ablation table");
    add_common(ablate_cmd, ablate_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (render_cmd->parsed()) return cmd_render(render_opts, alpha, beta, render_out);
        if (dataset_cmd->parsed()) return cmd_dataset(dataset_opts, grid, dist);
        if (train_cmd->parsed()) return cmd_train_agent(train_opts);
        if (eval_cmd->parsed()) return cmd_eval(eval_opts, eval_checkpoint, eval_input);
        if (baseline_cmd->parsed()) return cmd_baseline(baseline_opts, method);
        if (compare_cmd->parsed()) return cmd_compare(compare_opts);
        if (behavioral_cmd->parsed()) return cmd_behavioral(behavioral_opts, behavioral_checkpoint);
        if (ablate_cmd->parsed()) return cmd_ablate(ablate_opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
