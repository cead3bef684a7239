#include "sarinv/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace sarinv {

namespace {

/// Signed shortest-arc difference a - b in (-180, 180].
double signed_arc(double a, double b) {
    double d = std::fmod(a - b, 360.0);
    if (d > 180.0) d -= 360.0;
    if (d <= -180.0) d += 360.0;
    return d;
}

}  // namespace

double fitness(const ViewAngles& candidate, const FeatureVector& target_features, const Scene& scene,
               const RenderConfig& config) {
    ViewAngles wrapped{candidate.alpha, wrap_azimuth(candidate.beta)};
    return feature_l1(extract(render(scene, wrapped, config)), target_features);
}

Objective make_fitness_objective(const FeatureVector& target_features, const Scene& scene,
                                 const RenderConfig& config) {
    return [&scene, config, target_features](const ViewAngles& candidate) {
        return fitness(candidate, target_features, scene, config);
    };
}

void save_invert_trace(const InvertResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_invert_trace: cannot open " + path);
    out.precision(17);
    out << "iter,best_fitness,alpha,beta\n";
    for (const auto& row : result.trace) {
        out << row.iter << ',' << row.best_fitness << ',' << row.alpha << ',' << row.beta << "\n";
    }
}

InvertResult ga_invert(const Objective& objective, const GaConfig& config, const SearchBounds& bounds) {
    if (config.population < 2) throw std::invalid_argument("ga_invert: population must be >= 2");
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_real_distribution<double> alpha_dist(bounds.alpha_min, bounds.alpha_max);
    std::uniform_real_distribution<double> beta_dist(0.0, 360.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    struct Individual {
        ViewAngles genes{};
        double fit = 0.0;
    };
    std::vector<Individual> pop(static_cast<std::size_t>(config.population));
    for (auto& ind : pop) ind.genes = {alpha_dist(rng), beta_dist(rng)};

    InvertResult result;
    auto evaluate_all = [&](int iter) {
        for (auto& ind : pop) {
            ind.fit = objective(ind.genes);
            ++result.evaluations;
        }
        auto best = std::min_element(pop.begin(), pop.end(),
                                     [](const Individual& a, const Individual& b) { return a.fit < b.fit; });
        if (result.trace.empty() || best->fit < result.best_fitness) {
            result.best_fitness = best->fit;
            result.best = best->genes;
        }
        result.trace.push_back({iter, result.best_fitness, result.best.alpha, result.best.beta});
    };
    evaluate_all(0);

    auto tournament = [&]() -> const Individual& {
        std::uniform_int_distribution<int> pick(0, config.population - 1);
        const Individual* winner = &pop[static_cast<std::size_t>(pick(rng))];
        for (int k = 1; k < config.tournament; ++k) {
            const Individual* challenger = &pop[static_cast<std::size_t>(pick(rng))];
            if (challenger->fit < winner->fit) winner = challenger;
        }
        return *winner;
    };

    for (int gen = 1; gen <= config.generations; ++gen) {
        std::vector<Individual> next;
        next.reserve(pop.size());
        for (int e = 0; e < config.elitism && e < config.population; ++e) {
            Individual elite;
            elite.genes = result.best;
            next.push_back(elite);
        }
        while (static_cast<int>(next.size()) < config.population) {
            ViewAngles p1 = tournament().genes;
            ViewAngles p2 = tournament().genes;
            ViewAngles child = p1;
            if (uni(rng) < config.crossover_rate) {
                const double la = uni(rng);
                child.alpha = la * p1.alpha + (1.0 - la) * p2.alpha;
                const double lb = uni(rng);
                child.beta = wrap_azimuth(p1.beta + (1.0 - lb) * signed_arc(p2.beta, p1.beta));
            }
            if (uni(rng) < config.mutation_rate) child.alpha += config.mut_sigma_alpha * gauss(rng);
            if (uni(rng) < config.mutation_rate) child.beta += config.mut_sigma_beta * gauss(rng);
            child.alpha = std::clamp(child.alpha, bounds.alpha_min, bounds.alpha_max);
            child.beta = wrap_azimuth(child.beta);
            next.push_back({child, 0.0});
        }
        pop = std::move(next);
        evaluate_all(gen);
    }
    return result;
}

InvertResult pso_invert(const Objective& objective, const PsoConfig& config, const SearchBounds& bounds) {
    if (config.particles < 1) throw std::invalid_argument("pso_invert: need at least one particle");
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_real_distribution<double> alpha_dist(bounds.alpha_min, bounds.alpha_max);
    std::uniform_real_distribution<double> beta_dist(0.0, 360.0);

    struct Particle {
        ViewAngles x{};
        double va = 0.0, vb = 0.0;
        ViewAngles best{};
        double best_fit = 0.0;
    };
    std::vector<Particle> swarm(static_cast<std::size_t>(config.particles));
    for (auto& p : swarm) {
        p.x = {alpha_dist(rng), beta_dist(rng)};
        p.va = (2.0 * uni(rng) - 1.0) * config.vmax_alpha;
        p.vb = (2.0 * uni(rng) - 1.0) * config.vmax_beta;
    }

    InvertResult result;
    bool have_gbest = false;
    auto evaluate_all = [&](int iter, bool initial) {
        for (auto& p : swarm) {
            const double fit = objective(p.x);
            ++result.evaluations;
            if (initial || fit < p.best_fit) {
                p.best_fit = fit;
                p.best = p.x;
            }
            if (!have_gbest || fit < result.best_fitness) {
                have_gbest = true;
                result.best_fitness = fit;
                result.best = p.x;
            }
        }
        result.trace.push_back({iter, result.best_fitness, result.best.alpha, result.best.beta});
    };
    evaluate_all(0, true);

    for (int iter = 1; iter <= config.iterations; ++iter) {
        for (auto& p : swarm) {
            const double r1a = uni(rng), r2a = uni(rng), r1b = uni(rng), r2b = uni(rng);
            p.va = config.inertia * p.va + config.cognitive * r1a * (p.best.alpha - p.x.alpha) +
                   config.social * r2a * (result.best.alpha - p.x.alpha);
            p.vb = config.inertia * p.vb + config.cognitive * r1b * signed_arc(p.best.beta, p.x.beta) +
                   config.social * r2b * signed_arc(result.best.beta, p.x.beta);
            p.va = std::clamp(p.va, -config.vmax_alpha, config.vmax_alpha);
            p.vb = std::clamp(p.vb, -config.vmax_beta, config.vmax_beta);
            p.x.alpha = std::clamp(p.x.alpha + p.va, bounds.alpha_min, bounds.alpha_max);
            p.x.beta = wrap_azimuth(p.x.beta + p.vb);
        }
        evaluate_all(iter, false);
    }
    return result;
}

// ---------------------------------------------------------------------------

namespace {

SarImage quicklook_image(const SarImage& image) {
    SarImage out;
    out.intensity = quantize8(image).cast<double>();
    out.angles = image.angles;
    out.seed = image.seed;
    return out;
}

FeatureVector regression_features(const SarImage& image) {
    return extract(quicklook_image(image));
}

Eigen::Vector3d encode_target(const ViewAngles& angles, const SearchBounds& bounds) {
    const double mid = 0.5 * (bounds.alpha_min + bounds.alpha_max);
    const double half = 0.5 * (bounds.alpha_max - bounds.alpha_min);
    return {(angles.alpha - mid) / half, std::sin(deg2rad(angles.beta)), std::cos(deg2rad(angles.beta))};
}

RegressorModel dl_train_features(std::vector<FeatureVector> features, std::vector<ViewAngles> truths,
                                 const DlConfig& config, const SearchBounds& bounds) {
    if (features.empty()) throw std::invalid_argument("dl_train: empty dataset");
    RegressorModel model;
    model.bounds = bounds;
    model.normalizer = fit_normalizer(features.size() >= 2 ? features
                                                           : std::vector<FeatureVector>{features[0], features[0]});
    const int n = static_cast<int>(features.size());
    Eigen::MatrixXd inputs(kFeatureDim, n);
    Eigen::MatrixXd targets(3, n);
    for (int i = 0; i < n; ++i) {
        inputs.col(i) = normalize(features[static_cast<std::size_t>(i)], model.normalizer);
        targets.col(i) = encode_target(truths[static_cast<std::size_t>(i)], bounds);
    }

    model.net = Mlp({kFeatureDim, config.hidden1, config.hidden2, 3}, derive_seed(config.seed, 1));
    const AdamConfig adam{config.lr, 0.9, 0.999, 1e-8};
    std::mt19937_64 rng(derive_seed(config.seed, 2));
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (int start = 0; start < n; start += config.batch) {
            const int b = std::min(config.batch, n - start);
            Eigen::MatrixXd xb(kFeatureDim, b);
            Eigen::MatrixXd tb(3, b);
            for (int k = 0; k < b; ++k) {
                xb.col(k) = inputs.col(order[static_cast<std::size_t>(start + k)]);
                tb.col(k) = targets.col(order[static_cast<std::size_t>(start + k)]);
            }
            model.net.train_step(xb, tb, adam);
        }
    }
    return model;
}

}  // namespace

RegressorModel dl_train(const DatasetManifest& manifest, const DlConfig& config,
                        const SearchBounds& bounds) {
    if (manifest.entries.empty()) throw std::invalid_argument("dl_train: empty dataset manifest");
    std::vector<FeatureVector> features;
    std::vector<ViewAngles> truths;
    for (const auto& entry : manifest.entries) {
        SarImage image;
        image.intensity = read_pgm(entry.path).cast<double>();
        features.push_back(extract(image));  // stored files are already 8-bit quicklooks
        truths.push_back({entry.alpha, entry.beta});
    }
    return dl_train_features(std::move(features), std::move(truths), config, bounds);
}

RegressorModel dl_train(const std::vector<std::pair<SarImage, ViewAngles>>& samples,
                        const DlConfig& config, const SearchBounds& bounds) {
    if (samples.empty()) throw std::invalid_argument("dl_train: empty dataset");
    std::vector<FeatureVector> features;
    std::vector<ViewAngles> truths;
    for (const auto& [image, angles] : samples) {
        features.push_back(regression_features(image));
        truths.push_back(angles);
    }
    return dl_train_features(std::move(features), std::move(truths), config, bounds);
}

ViewAngles dl_predict(const RegressorModel& model, const SarImage& image) {
    const Eigen::VectorXd out =
        model.net.forward_one(normalize(regression_features(image), model.normalizer));
    const double mid = 0.5 * (model.bounds.alpha_min + model.bounds.alpha_max);
    const double half = 0.5 * (model.bounds.alpha_max - model.bounds.alpha_min);
    ViewAngles angles;
    angles.alpha = mid + half * std::clamp(out[0], -1.0, 1.0);
    angles.beta = wrap_azimuth(rad2deg(std::atan2(out[1], out[2])));
    return angles;
}

void RegressorModel::save(const std::string& prefix) const {
    net.save(prefix + ".mlp");
    save_normalizer(normalizer, prefix + ".norm");
    std::ofstream out(prefix + ".meta");
    if (!out) throw std::runtime_error("RegressorModel::save: cannot open " + prefix + ".meta");
    out << "alpha_min=" << bounds.alpha_min << "\nalpha_max=" << bounds.alpha_max << "\n";
}

RegressorModel RegressorModel::load(const std::string& prefix) {
    RegressorModel model;
    model.net = Mlp::load(prefix + ".mlp");
    model.normalizer = load_normalizer(prefix + ".norm");
    std::ifstream in(prefix + ".meta");
    if (in) {
        std::string line;
        while (std::getline(in, line)) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(0, eq);
            const double value = std::stod(line.substr(eq + 1));
            if (key == "alpha_min") model.bounds.alpha_min = value;
            if (key == "alpha_max") model.bounds.alpha_max = value;
        }
    }
    return model;
}

ViewAngles dl_plus_drl(const SarImage& input, const RegressorModel& model, const DuelingNet& net,
                       Environment& env, std::optional<ViewAngles> truth, std::uint64_t seed) {
    const ViewAngles init = dl_predict(model, input);
    ResetSpec spec;
    spec.seed = seed;
    spec.truth = truth;
    spec.init = init;
    Eigen::VectorXd state = env.reset(spec);
    std::mt19937_64 rng(0);
    while (!env.done()) {
        state = env.step(select_action(net, state, 0.0, rng)).state;
    }
    return env.current();
}

std::vector<EvalEpisode> random_policy(Environment& env, int episodes, std::uint64_t seed,
                                       const std::vector<ResetSpec>* resets) {
    std::mt19937_64 rng(derive_seed(seed, 77));
    Policy policy = [&rng](const Eigen::VectorXd&, const Environment& e) {
        std::uniform_int_distribution<int> pick(0, e.actions().size() - 1);
        return pick(rng);
    };
    return evaluate_policy(env, policy, episodes, seed, resets);
}

}  // namespace sarinv
