#pragma once

#include "sarinv/features.hpp"
#include "sarinv/renderer.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sarinv {

// ---------------------------------------------------------------------------
// Action space

enum class ActionMode { kCoarse, kFine };

/// One incremental adjustment (degrees). level 1..3 orders magnitudes large to
/// small; the terminal no-op carries level 0.
struct Action {
    double d_alpha = 0.0;
    double d_beta = 0.0;
    int level = 0;
};

/// 25 actions: the terminal (0,0) at index 0, then for each magnitude level
/// the eight non-trivial sign combinations of that level's (alpha, beta) steps.
struct ActionTable {
    ActionMode mode = ActionMode::kCoarse;
    std::vector<Action> actions;

    int size() const { return static_cast<int>(actions.size()); }
    const Action& operator[](int i) const { return actions[static_cast<std::size_t>(i)]; }
    bool contains(double d_alpha, double d_beta) const;
};

ActionTable action_table(ActionMode mode);

// ---------------------------------------------------------------------------
// Rewards

struct RewardTier {
    double proximity = 0.0;    // error must fall below this
    double improvement = 0.0;  // error reduction since episode start must exceed this
};

struct RewardParams {
    double eta_alpha = -0.05;
    double eta_beta = -0.2;
    std::array<RewardTier, 3> alpha_tiers{{{5.0, 5.0}, {3.0, 10.0}, {1.5, 15.0}}};
    std::array<RewardTier, 3> beta_tiers{{{10.0, 15.0}, {5.0, 30.0}, {2.0, 60.0}}};
    double boundary_penalty = -10.0;
    double bonus_coefficient = 5.0;
    // Literal reading of the smoothing term feeds the signed deviation into the
    // exponential, which grows with error; kept switchable for parity studies.
    bool literal_exp_sign = false;
};

/// Negated angular deviation of theta_t from theta_ref; <= 0, zero at match.
double r1(double theta_t, double theta_ref, bool circular);

/// Memory-difference reward: improvement of r1 across one step, summed over
/// both angles. Positive when total error decreased.
double reward_base(double r1_now_alpha, double r1_prev_alpha, double r1_now_beta, double r1_prev_beta);

/// Smoothing reward exp(eta_a * err_a) + exp(eta_b * err_b); each term in
/// (0, 1] and strictly decreasing in its error.
double reward_exp(double err_alpha, double err_beta, const RewardParams& params);

/// Tiered proximity bonus: coefficient * number of tiers where both angles are
/// simultaneously close enough and improved enough; one of {0, 5, 10, 15}.
double reward_bonus(double err_alpha, double err_beta, double improve_alpha, double improve_beta,
                    const RewardParams& params);

struct BoundaryResult {
    double penalty = 0.0;
    double alpha = 0.0;
};

/// Clamps a proposed incidence into [lo, hi]; stepping outside costs `penalty`.
BoundaryResult reward_boundary(double proposed_alpha, double lo = 30.0, double hi = 75.0,
                               double penalty = -10.0);

// ---------------------------------------------------------------------------
// Episode machinery

inline constexpr int kStateDim = 2 * kFeatureDim + 3;  // 551

struct StepInfo {
    int t = 0;
    double alpha = 0.0, beta = 0.0;
    double action_dalpha = 0.0, action_dbeta = 0.0;
    double r_base = 0.0, r1 = 0.0, r2 = 0.0, r3 = 0.0, total = 0.0;
    double err_alpha = 0.0, err_beta = 0.0;
    bool done = false;
};

struct StepOutcome {
    Eigen::VectorXd state;
    double reward = 0.0;
    bool done = false;
    StepInfo info;
};

/// Minimal episodic-control surface shared by the SAR environment and
/// surrogate test environments.
class RlEnv {
  public:
    virtual ~RlEnv() = default;
    virtual int state_dim() const = 0;
    virtual int action_count() const = 0;
    virtual int max_steps() const = 0;
    virtual Eigen::VectorXd reset(std::uint64_t seed) = 0;
    virtual StepOutcome step(int action) = 0;
};

struct EnvConfig {
    int max_steps = 20;  // 10, 20 or 40
    ActionMode action_mode = ActionMode::kCoarse;
    bool training = true;  // enables the sub-threshold early stop
    double done_error_threshold = 2.0;
    double alpha_min = 30.0;
    double alpha_max = 75.0;
    bool beta_circular = true;
    RewardParams reward;
    bool use_r1 = true;
    bool use_r2 = true;
    bool use_r3 = true;
    bool state_sequential_diff = true;  // temporal feature block
    bool state_feature_diff = true;     // semantic (input-image) feature block
    // Conditioning gain on the two feature-difference blocks so their
    // per-entry scale is commensurate with the encoded angles (the descriptor
    // works in log-intensity units, whose differences are small).
    double state_feature_gain = 25.0;
};

/// Optional reset controls; unset members are drawn from the reset seed.
struct ResetSpec {
    std::uint64_t seed = 0;
    std::optional<ViewAngles> truth;
    std::optional<ViewAngles> init;
    /// External-input hook: descriptor of a supplied image instead of a
    /// rendered truth. When set without `truth`, error info and reward
    /// components are NaN and the step reward is 0.
    std::optional<FeatureVector> input_features;
};

/// The angle-inversion MDP around the forward renderer. One instance owns one
/// episode at a time; independent instances may run concurrently.
class Environment final : public RlEnv {
  public:
    Environment(Scene scene, RenderConfig render_config, EnvConfig env_config);

    int state_dim() const override { return kStateDim; }
    int action_count() const override { return table_.size(); }
    int max_steps() const override { return config_.max_steps; }

    Eigen::VectorXd reset(std::uint64_t seed) override;
    Eigen::VectorXd reset(const ResetSpec& spec);
    /// Throws std::logic_error once the episode is done.
    StepOutcome step(int action) override;

    const ActionTable& actions() const { return table_; }
    const EnvConfig& config() const { return config_; }
    const RenderConfig& render_config() const { return render_config_; }
    const Scene& scene() const { return scene_; }

    ViewAngles current() const { return current_; }
    std::optional<ViewAngles> truth() const { return truth_; }
    int steps_taken() const { return t_; }
    bool done() const { return done_; }
    /// Per-step records including a t=0 row for the initial angles.
    const std::vector<StepInfo>& trace() const { return trace_; }

    void write_trace_csv(const std::string& path) const;

  private:
    FeatureVector render_features(const ViewAngles& angles) const;
    Eigen::VectorXd make_state() const;
    double error_of(double estimate, double truth_value, bool circular) const;

    Scene scene_;
    RenderConfig render_config_;
    EnvConfig config_;
    ActionTable table_;

    std::optional<ViewAngles> truth_;
    ViewAngles initial_{};
    ViewAngles current_{};
    FeatureVector input_features_;
    FeatureVector current_features_;
    FeatureVector previous_features_;
    double err0_alpha_ = 0.0, err0_beta_ = 0.0;
    double prev_r1_alpha_ = 0.0, prev_r1_beta_ = 0.0;
    int t_ = 0;
    bool done_ = true;
    std::uint64_t episode_seed_ = 0;
    std::vector<StepInfo> trace_;
};

/// Header used by write_trace_csv and the harness trace readers.
std::string trace_csv_header();

}  // namespace sarinv
