#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace sarinv {

struct Transition {
    Eigen::VectorXd state;
    int action = 0;
    double reward = 0.0;
    Eigen::VectorXd next_state;
    bool done = false;
};

/// Binary indexed tree over non-negative priorities supporting prefix-sum
/// descent in O(log n).
class SumTree {
  public:
    explicit SumTree(std::size_t capacity);

    std::size_t capacity() const { return capacity_; }
    double total() const { return nodes_[1]; }
    double get(std::size_t index) const { return nodes_[leaf_base_ + index]; }
    void set(std::size_t index, double priority);

    /// Index of the leaf whose cumulative interval contains `prefix`,
    /// with prefix in [0, total()).
    std::size_t find(double prefix) const;

  private:
    std::size_t capacity_ = 0;
    std::size_t leaf_base_ = 1;
    std::vector<double> nodes_;  // 1-based heap layout; nodes_[1] is the root
};

/// FIFO experience store with proportional prioritized sampling:
/// P(i) ~ (|td_i| + floor)^exponent. New transitions enter at the current
/// maximum priority so each is replayed at least once with full weight.
class PrioritizedReplay {
  public:
    PrioritizedReplay(std::size_t capacity, double priority_exponent = 0.6, double priority_floor = 1e-3);

    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t i) const { return items_[i]; }
    double priority(std::size_t i) const { return tree_.get(i); }
    double total_priority() const { return tree_.total(); }

    void push(Transition t);

    struct Batch {
        std::vector<std::size_t> indices;
        std::vector<const Transition*> items;
        Eigen::VectorXd weights;  // importance weights, normalized by the batch max
    };

    /// Draws `batch` independent proportional samples. `beta` is the
    /// importance-sampling exponent. Throws std::logic_error when empty.
    Batch sample(int batch, double beta, std::mt19937_64& rng) const;

    void update(const std::vector<std::size_t>& indices, const std::vector<double>& td_errors);

  private:
    std::size_t capacity_ = 0;
    double exponent_ = 0.6;
    double floor_ = 1e-3;
    double max_priority_ = 1.0;
    std::size_t next_slot_ = 0;
    std::vector<Transition> items_;
    SumTree tree_;
};

}  // namespace sarinv
