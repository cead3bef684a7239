#include "sarinv/environment.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

namespace sarinv {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::array<double, 3> level_magnitudes(ActionMode mode, bool alpha) {
    if (mode == ActionMode::kCoarse) {
        return alpha ? std::array<double, 3>{8.0, 3.0, 1.0} : std::array<double, 3>{30.0, 10.0, 2.0};
    }
    return alpha ? std::array<double, 3>{2.0, 1.0, 0.5} : std::array<double, 3>{5.0, 2.0, 1.0};
}

}  // namespace

bool ActionTable::contains(double d_alpha, double d_beta) const {
    for (const auto& a : actions) {
        if (a.d_alpha == d_alpha && a.d_beta == d_beta) return true;
    }
    return false;
}

ActionTable action_table(ActionMode mode) {
    ActionTable table;
    table.mode = mode;
    table.actions.push_back({0.0, 0.0, 0});  // terminal
    const auto alpha_mag = level_magnitudes(mode, true);
    const auto beta_mag = level_magnitudes(mode, false);
    for (int level = 0; level < 3; ++level) {
        const std::array<double, 3> xs{alpha_mag[static_cast<std::size_t>(level)],
                                       -alpha_mag[static_cast<std::size_t>(level)], 0.0};
        const std::array<double, 3> ys{beta_mag[static_cast<std::size_t>(level)],
                                       -beta_mag[static_cast<std::size_t>(level)], 0.0};
        for (double x : xs) {
            for (double y : ys) {
                if (x == 0.0 && y == 0.0) continue;  // (0,0) only appears as the terminal action
                table.actions.push_back({x, y, level + 1});
            }
        }
    }
    return table;
}

double r1(double theta_t, double theta_ref, bool circular) {
    return -angular_error(theta_t, theta_ref, circular);
}

double reward_base(double r1_now_alpha, double r1_prev_alpha, double r1_now_beta, double r1_prev_beta) {
    return (r1_now_alpha - r1_prev_alpha) + (r1_now_beta - r1_prev_beta);
}

double reward_exp(double err_alpha, double err_beta, const RewardParams& params) {
    if (params.literal_exp_sign) {
        return std::exp(params.eta_alpha * -err_alpha) + std::exp(params.eta_beta * -err_beta);
    }
    return std::exp(params.eta_alpha * err_alpha) + std::exp(params.eta_beta * err_beta);
}

double reward_bonus(double err_alpha, double err_beta, double improve_alpha, double improve_beta,
                    const RewardParams& params) {
    double tiers = 0.0;
    for (int i = 0; i < 3; ++i) {
        const auto& ta = params.alpha_tiers[static_cast<std::size_t>(i)];
        const auto& tb = params.beta_tiers[static_cast<std::size_t>(i)];
        const bool alpha_hit = err_alpha < ta.proximity && improve_alpha > ta.improvement;
        const bool beta_hit = err_beta < tb.proximity && improve_beta > tb.improvement;
        if (alpha_hit && beta_hit) tiers += 1.0;
    }
    return params.bonus_coefficient * tiers;
}

BoundaryResult reward_boundary(double proposed_alpha, double lo, double hi, double penalty) {
    if (proposed_alpha < lo) return {penalty, lo};
    if (proposed_alpha > hi) return {penalty, hi};
    return {0.0, proposed_alpha};
}

// ---------------------------------------------------------------------------

Environment::Environment(Scene scene, RenderConfig render_config, EnvConfig env_config)
    : scene_(std::move(scene)),
      render_config_(render_config),
      config_(env_config),
      table_(action_table(env_config.action_mode)) {
    render_config_.alpha_min = config_.alpha_min;
    render_config_.alpha_max = config_.alpha_max;
}

FeatureVector Environment::render_features(const ViewAngles& angles) const {
    RenderConfig rc = render_config_;
    rc.seed = episode_seed_;
    return extract(render(scene_, angles, rc));
}

double Environment::error_of(double estimate, double truth_value, bool circular) const {
    return angular_error(estimate, truth_value, circular);
}

Eigen::VectorXd Environment::make_state() const {
    Eigen::VectorXd state = Eigen::VectorXd::Zero(kStateDim);
    if (config_.state_sequential_diff && t_ > 0) {
        state.segment(0, kFeatureDim) =
            config_.state_feature_gain * (current_features_ - previous_features_);
    }
    if (config_.state_feature_diff) {
        state.segment(kFeatureDim, kFeatureDim) =
            config_.state_feature_gain * (current_features_ - input_features_);
    }
    const double alpha_mid = 0.5 * (config_.alpha_min + config_.alpha_max);
    const double alpha_half = 0.5 * (config_.alpha_max - config_.alpha_min);
    state[2 * kFeatureDim] = (current_.alpha - alpha_mid) / alpha_half;
    state[2 * kFeatureDim + 1] = std::sin(deg2rad(current_.beta));
    state[2 * kFeatureDim + 2] = std::cos(deg2rad(current_.beta));
    return state;
}

Eigen::VectorXd Environment::reset(std::uint64_t seed) {
    return reset(ResetSpec{seed, std::nullopt, std::nullopt, std::nullopt});
}

Eigen::VectorXd Environment::reset(const ResetSpec& spec) {
    episode_seed_ = derive_seed(spec.seed, 31);
    std::mt19937_64 rng(derive_seed(spec.seed, 32));
    std::uniform_real_distribution<double> alpha_dist(config_.alpha_min, config_.alpha_max);
    std::uniform_real_distribution<double> beta_dist(0.0, 360.0);

    truth_ = spec.truth;
    if (!truth_ && !spec.input_features) {
        truth_ = ViewAngles{alpha_dist(rng), beta_dist(rng)};
    }
    initial_ = spec.init ? *spec.init : ViewAngles{alpha_dist(rng), beta_dist(rng)};
    initial_.beta = wrap_azimuth(initial_.beta);
    initial_.alpha = std::clamp(initial_.alpha, config_.alpha_min, config_.alpha_max);
    current_ = initial_;

    if (spec.input_features) {
        if (spec.input_features->size() != kFeatureDim) {
            throw std::invalid_argument("reset: input feature vector has wrong length");
        }
        input_features_ = *spec.input_features;
    } else {
        input_features_ = render_features(*truth_);
    }

    current_features_ = render_features(current_);
    previous_features_ = current_features_;
    t_ = 0;
    done_ = false;
    trace_.clear();

    StepInfo info;
    info.t = 0;
    info.alpha = current_.alpha;
    info.beta = current_.beta;
    if (truth_) {
        info.err_alpha = error_of(current_.alpha, truth_->alpha, false);
        info.err_beta = error_of(current_.beta, truth_->beta, config_.beta_circular);
    } else {
        info.err_alpha = kNan;
        info.err_beta = kNan;
    }
    err0_alpha_ = info.err_alpha;
    err0_beta_ = info.err_beta;
    prev_r1_alpha_ = -info.err_alpha;
    prev_r1_beta_ = -info.err_beta;
    trace_.push_back(info);
    return make_state();
}

StepOutcome Environment::step(int action) {
    if (done_) throw std::logic_error("Environment::step called on a finished episode");
    if (action < 0 || action >= table_.size()) throw std::out_of_range("Environment::step: bad action index");

    const Action& act = table_[action];
    const bool terminal_action = act.d_alpha == 0.0 && act.d_beta == 0.0;

    const double proposed_alpha = current_.alpha + act.d_alpha;
    const BoundaryResult bounded = reward_boundary(proposed_alpha, config_.alpha_min, config_.alpha_max,
                                                   config_.reward.boundary_penalty);
    current_.alpha = bounded.alpha;
    current_.beta = wrap_azimuth(current_.beta + act.d_beta);
    ++t_;

    previous_features_ = current_features_;
    if (!terminal_action) current_features_ = render_features(current_);  // no-op leaves the image unchanged

    StepInfo info;
    info.t = t_;
    info.alpha = current_.alpha;
    info.beta = current_.beta;
    info.action_dalpha = act.d_alpha;
    info.action_dbeta = act.d_beta;

    double reward = 0.0;
    if (truth_) {
        info.err_alpha = error_of(current_.alpha, truth_->alpha, false);
        info.err_beta = error_of(current_.beta, truth_->beta, config_.beta_circular);
        const double r1_alpha = -info.err_alpha;
        const double r1_beta = -info.err_beta;
        info.r_base = reward_base(r1_alpha, prev_r1_alpha_, r1_beta, prev_r1_beta_);
        info.r1 = config_.use_r1 ? reward_exp(info.err_alpha, info.err_beta, config_.reward) : 0.0;
        const double improve_alpha = std::max(0.0, err0_alpha_ - info.err_alpha);
        const double improve_beta = std::max(0.0, err0_beta_ - info.err_beta);
        info.r2 = config_.use_r2
                      ? reward_bonus(info.err_alpha, info.err_beta, improve_alpha, improve_beta, config_.reward)
                      : 0.0;
        info.r3 = config_.use_r3 ? bounded.penalty : 0.0;
        reward = info.r_base + info.r1 + info.r2 + info.r3;
        prev_r1_alpha_ = r1_alpha;
        prev_r1_beta_ = r1_beta;
    } else {
        info.err_alpha = kNan;
        info.err_beta = kNan;
        info.r_base = info.r1 = info.r2 = info.r3 = kNan;
        reward = 0.0;
    }
    info.total = reward;

    bool done = terminal_action || t_ >= config_.max_steps;
    if (config_.training && truth_) {
        const double mean_err = 0.5 * (info.err_alpha + info.err_beta);
        if (mean_err < config_.done_error_threshold) done = true;
    }
    done_ = done;
    info.done = done;
    trace_.push_back(info);

    StepOutcome out;
    out.state = make_state();
    out.reward = reward;
    out.done = done;
    out.info = info;
    return out;
}

std::string trace_csv_header() {
    return "t,alpha,beta,action_dx,action_dy,R_base,R1,R2,R3,R_t,err_alpha,err_beta,done";
}

void Environment::write_trace_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path);
    out.precision(17);
    out << trace_csv_header() << "\n";
    for (const auto& row : trace_) {
        out << row.t << ',' << row.alpha << ',' << row.beta << ',' << row.action_dalpha << ','
            << row.action_dbeta << ',' << row.r_base << ',' << row.r1 << ',' << row.r2 << ','
            << row.r3 << ',' << row.total << ',' << row.err_alpha << ',' << row.err_beta << ','
            << (row.done ? 1 : 0) << "\n";
    }
}

}  // namespace sarinv
