#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sarinv {

/// Fully connected layer with its Adam moment buffers. Batches are stored one
/// sample per column so forward passes are single matrix products.
struct DenseLayer {
    Eigen::MatrixXd w;  // out x in
    Eigen::VectorXd b;
    Eigen::MatrixXd m_w, v_w;
    Eigen::VectorXd m_b, v_b;

    void init(int out, int in, std::mt19937_64& rng);
    Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const { return (w * x).colwise() + b; }
};

struct LayerGrads {
    Eigen::MatrixXd w;
    Eigen::VectorXd b;
};

struct AdamConfig {
    double lr = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// One bias-corrected adaptive-moment update; `t` is the 1-based step count.
void adam_update(DenseLayer& layer, const LayerGrads& grads, const AdamConfig& cfg, long t);

inline Eigen::MatrixXd relu(const Eigen::MatrixXd& x) { return x.cwiseMax(0.0); }

// ---------------------------------------------------------------------------

/// Action-value network with a two-layer trunk and separate state-value /
/// advantage heads combined as Q = V + A - mean(A).
class DuelingNet {
  public:
    DuelingNet() = default;
    DuelingNet(int input, int hidden1, int hidden2, int actions, std::uint64_t seed);

    int input_dim() const { return input_; }
    int action_count() const { return actions_; }

    /// Q-values for a batch (inputs as columns; result actions x batch).
    Eigen::MatrixXd forward(const Eigen::MatrixXd& states) const;
    Eigen::VectorXd forward_one(const Eigen::VectorXd& state) const;

    struct Cache {
        Eigen::MatrixXd x, z1, a1, z2, a2, value, advantage, q;
    };
    Eigen::MatrixXd forward(const Eigen::MatrixXd& states, Cache& cache) const;

    struct Grads {
        LayerGrads l1, l2, value, advantage;
    };

    /// Gradients of the importance-weighted mean squared TD error
    /// (1/B) sum_i w_i (Q(s_i, a_i) - y_i)^2 for a cached forward pass.
    Grads backward(const Cache& cache, const std::vector<int>& actions,
                   const Eigen::VectorXd& targets, const Eigen::VectorXd& is_weights) const;

    void apply(const Grads& grads, const AdamConfig& cfg);
    long optimizer_steps() const { return adam_t_; }

    void save(const std::string& path) const;
    static DuelingNet load(const std::string& path);

    DenseLayer& layer1() { return l1_; }
    DenseLayer& layer2() { return l2_; }
    DenseLayer& value_head() { return value_; }
    DenseLayer& advantage_head() { return advantage_; }
    const DenseLayer& layer1() const { return l1_; }
    const DenseLayer& layer2() const { return l2_; }
    const DenseLayer& value_head() const { return value_; }
    const DenseLayer& advantage_head() const { return advantage_; }

    bool equals(const DuelingNet& other) const;

  private:
    int input_ = 0, hidden1_ = 0, hidden2_ = 0, actions_ = 0;
    long adam_t_ = 0;
    DenseLayer l1_, l2_, value_, advantage_;
};

// ---------------------------------------------------------------------------

/// Plain feedforward regressor: rectified-linear hidden layers, linear output.
class Mlp {
  public:
    Mlp() = default;
    Mlp(const std::vector<int>& layer_sizes, std::uint64_t seed);

    int input_dim() const { return sizes_.empty() ? 0 : sizes_.front(); }
    int output_dim() const { return sizes_.empty() ? 0 : sizes_.back(); }

    Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
    Eigen::VectorXd forward_one(const Eigen::VectorXd& x) const;

    /// One Adam step on the mean squared error against `targets`
    /// (targets as columns); returns the pre-update loss.
    double train_step(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets, const AdamConfig& cfg);

    void save(const std::string& path) const;
    static Mlp load(const std::string& path);

    std::vector<DenseLayer>& layers() { return layers_; }
    const std::vector<DenseLayer>& layers() const { return layers_; }

  private:
    std::vector<int> sizes_;
    std::vector<DenseLayer> layers_;
    long adam_t_ = 0;
};

}  // namespace sarinv
