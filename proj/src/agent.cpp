#include "sarinv/agent.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sarinv {

int select_action(const DuelingNet& net, const Eigen::VectorXd& state, double epsilon,
                  std::mt19937_64& rng) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("select_action: epsilon outside [0,1]");
    if (epsilon > 0.0) {
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        if (uni(rng) < epsilon) {
            std::uniform_int_distribution<int> pick(0, net.action_count() - 1);
            return pick(rng);
        }
    }
    const Eigen::VectorXd q = net.forward_one(state);
    int best = 0;
    for (int a = 1; a < q.size(); ++a) {
        if (q[a] > q[best]) best = a;  // strict: ties keep the lowest index
    }
    return best;
}

Eigen::VectorXd td_target(const std::vector<const Transition*>& batch, const DuelingNet& online,
                          const DuelingNet& target, double gamma) {
    const int n = static_cast<int>(batch.size());
    Eigen::VectorXd y(n);
    std::vector<int> pending;  // batch slots that need a bootstrap term
    for (int i = 0; i < n; ++i) {
        y[i] = batch[static_cast<std::size_t>(i)]->reward;
        if (!batch[static_cast<std::size_t>(i)]->done) pending.push_back(i);
    }
    if (pending.empty()) return y;

    Eigen::MatrixXd next_states(online.input_dim(), static_cast<Eigen::Index>(pending.size()));
    for (std::size_t k = 0; k < pending.size(); ++k) {
        next_states.col(static_cast<Eigen::Index>(k)) =
            batch[static_cast<std::size_t>(pending[k])]->next_state;
    }
    const Eigen::MatrixXd q_online = online.forward(next_states);
    const Eigen::MatrixXd q_target = target.forward(next_states);
    for (std::size_t k = 0; k < pending.size(); ++k) {
        int best = 0;
        for (int a = 1; a < q_online.rows(); ++a) {
            if (q_online(a, static_cast<Eigen::Index>(k)) > q_online(best, static_cast<Eigen::Index>(k))) {
                best = a;
            }
        }
        y[pending[k]] += gamma * q_target(best, static_cast<Eigen::Index>(k));
    }
    return y;
}

namespace {

double epsilon_at(const TrainConfig& cfg, long env_step, long total_steps) {
    const double horizon = cfg.eps_fraction * static_cast<double>(total_steps);
    if (horizon <= 0.0) return cfg.eps_end;
    const double frac = std::min(1.0, static_cast<double>(env_step) / horizon);
    return cfg.eps_start + frac * (cfg.eps_end - cfg.eps_start);
}

double per_beta_at(const TrainConfig& cfg, long env_step, long total_steps) {
    if (total_steps <= 0) return cfg.per_beta_end;
    const double frac = std::min(1.0, static_cast<double>(env_step) / static_cast<double>(total_steps));
    return cfg.per_beta_start + frac * (cfg.per_beta_end - cfg.per_beta_start);
}

}  // namespace

TrainResult train(RlEnv& env, const TrainConfig& config) {
    DuelingNet net(env.state_dim(), config.hidden1, config.hidden2, env.action_count(),
                   derive_seed(config.seed, 1));
    DuelingNet target = net;
    PrioritizedReplay replay(config.replay_capacity, config.per_alpha, config.per_floor);
    std::mt19937_64 action_rng(derive_seed(config.seed, 2));
    std::mt19937_64 replay_rng(derive_seed(config.seed, 3));

    const long total_steps = static_cast<long>(config.episodes) * env.max_steps();
    const AdamConfig adam{config.lr, 0.9, 0.999, 1e-8};

    TrainResult result;
    long env_steps = 0;
    long opt_steps = 0;
    for (int ep = 0; ep < config.episodes; ++ep) {
        Eigen::VectorXd state = env.reset(derive_seed(config.seed, 100, static_cast<std::uint64_t>(ep)));
        double cum_reward = 0.0;
        int steps = 0;
        bool done = false;
        while (!done) {
            const double eps = epsilon_at(config, env_steps, total_steps);
            const int action = select_action(net, state, eps, action_rng);
            StepOutcome out = env.step(action);
            replay.push(Transition{state, action, out.reward, out.state, out.done});
            state = out.state;
            cum_reward += out.reward;
            done = out.done;
            ++steps;
            ++env_steps;

            if (replay.size() >= static_cast<std::size_t>(std::max(config.learn_start, config.batch))) {
                for (int u = 0; u < config.updates_per_step; ++u) {
                    const double beta = per_beta_at(config, env_steps, total_steps);
                    auto batch = replay.sample(config.batch, beta, replay_rng);

                    Eigen::MatrixXd states(net.input_dim(), config.batch);
                    std::vector<int> actions(static_cast<std::size_t>(config.batch));
                    for (int i = 0; i < config.batch; ++i) {
                        states.col(i) = batch.items[static_cast<std::size_t>(i)]->state;
                        actions[static_cast<std::size_t>(i)] = batch.items[static_cast<std::size_t>(i)]->action;
                    }
                    const Eigen::VectorXd targets = td_target(batch.items, net, target, config.gamma);

                    DuelingNet::Cache cache;
                    const Eigen::MatrixXd q = net.forward(states, cache);
                    std::vector<double> td_errors(static_cast<std::size_t>(config.batch));
                    for (int i = 0; i < config.batch; ++i) {
                        td_errors[static_cast<std::size_t>(i)] =
                            q(actions[static_cast<std::size_t>(i)], i) - targets[i];
                    }
                    net.apply(net.backward(cache, actions, targets, batch.weights), adam);
                    replay.update(batch.indices, td_errors);
                    ++opt_steps;
                    if (opt_steps % config.target_sync == 0) target = net;
                }
            }
        }
        result.curve.push_back({ep, cum_reward, epsilon_at(config, env_steps, total_steps), steps});
    }
    result.net = std::move(net);
    result.optimizer_steps = opt_steps;
    result.env_steps = env_steps;
    return result;
}

void save_reward_curve(const std::vector<EpisodeRow>& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_reward_curve: cannot open " + path);
    out.precision(17);
    out << "episode,cum_reward,epsilon,steps\n";
    for (const auto& row : curve) {
        out << row.episode << ',' << row.cum_reward << ',' << row.epsilon << ',' << row.steps << "\n";
    }
}

std::vector<EpisodeRow> load_reward_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_reward_curve: cannot open " + path);
    std::vector<EpisodeRow> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        EpisodeRow row;
        char comma = 0;
        std::istringstream ss(line);
        ss >> row.episode >> comma >> row.cum_reward >> comma >> row.epsilon >> comma >> row.steps;
        if (!ss) throw std::runtime_error("load_reward_curve: malformed row in " + path);
        rows.push_back(row);
    }
    return rows;
}

std::vector<EvalEpisode> evaluate_policy(Environment& env, const Policy& policy, int episodes,
                                         std::uint64_t seed, const std::vector<ResetSpec>* resets) {
    if (resets && static_cast<int>(resets->size()) < episodes) {
        throw std::invalid_argument("evaluate_policy: not enough reset specs");
    }
    std::vector<EvalEpisode> out;
    out.reserve(static_cast<std::size_t>(episodes));
    for (int ep = 0; ep < episodes; ++ep) {
        const auto t0 = std::chrono::steady_clock::now();
        Eigen::VectorXd state = resets ? env.reset((*resets)[static_cast<std::size_t>(ep)])
                                       : env.reset(derive_seed(seed, 500, static_cast<std::uint64_t>(ep)));
        StepInfo last = env.trace().back();
        while (!env.done()) {
            StepOutcome step = env.step(policy(state, env));
            state = step.state;
            last = step.info;
        }
        const auto t1 = std::chrono::steady_clock::now();

        EvalEpisode record;
        record.truth = env.truth().value_or(ViewAngles{});
        record.estimate = env.current();
        record.err_alpha = last.err_alpha;
        record.err_beta = last.err_beta;
        record.steps = env.steps_taken();
        record.seconds = std::chrono::duration<double>(t1 - t0).count();
        record.trace = env.trace();
        out.push_back(std::move(record));
    }
    return out;
}

std::vector<EvalEpisode> evaluate(const DuelingNet& net, Environment& env, int episodes,
                                  std::uint64_t seed, const std::vector<ResetSpec>* resets) {
    std::mt19937_64 rng(0);  // unused at epsilon = 0
    Policy greedy = [&net, &rng](const Eigen::VectorXd& state, const Environment&) {
        return select_action(net, state, 0.0, rng);
    };
    return evaluate_policy(env, greedy, episodes, seed, resets);
}

}  // namespace sarinv
