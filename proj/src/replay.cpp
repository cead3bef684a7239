#include "sarinv/replay.hpp"

#include <cmath>
#include <stdexcept>

namespace sarinv {

SumTree::SumTree(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("SumTree: capacity must be positive");
    leaf_base_ = 1;
    while (leaf_base_ < capacity) leaf_base_ *= 2;
    nodes_.assign(2 * leaf_base_, 0.0);
}

void SumTree::set(std::size_t index, double priority) {
    if (index >= capacity_) throw std::out_of_range("SumTree::set: index out of range");
    if (!(priority >= 0.0)) throw std::invalid_argument("SumTree::set: priority must be non-negative");
    std::size_t node = leaf_base_ + index;
    nodes_[node] = priority;
    node /= 2;
    while (node >= 1) {
        nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
        node /= 2;
    }
}

std::size_t SumTree::find(double prefix) const {
    std::size_t node = 1;
    while (node < leaf_base_) {
        const std::size_t left = 2 * node;
        if (prefix < nodes_[left]) {
            node = left;
        } else {
            prefix -= nodes_[left];
            node = left + 1;
        }
    }
    std::size_t index = node - leaf_base_;
    if (index >= capacity_) index = capacity_ - 1;  // guards the prefix == total edge
    return index;
}

PrioritizedReplay::PrioritizedReplay(std::size_t capacity, double priority_exponent, double priority_floor)
    : capacity_(capacity), exponent_(priority_exponent), floor_(priority_floor), tree_(capacity) {
    if (capacity == 0) throw std::invalid_argument("PrioritizedReplay: capacity must be positive");
}

void PrioritizedReplay::push(Transition t) {
    if (items_.size() < capacity_) {
        items_.push_back(std::move(t));
        tree_.set(items_.size() - 1, max_priority_);
    } else {
        items_[next_slot_] = std::move(t);  // FIFO eviction
        tree_.set(next_slot_, max_priority_);
    }
    next_slot_ = (next_slot_ + 1) % capacity_;
}

PrioritizedReplay::Batch PrioritizedReplay::sample(int batch, double beta, std::mt19937_64& rng) const {
    if (items_.empty()) throw std::logic_error("PrioritizedReplay::sample: buffer is empty");
    if (batch <= 0) throw std::invalid_argument("PrioritizedReplay::sample: batch must be positive");
    const double total = tree_.total();
    if (!(total > 0.0)) throw std::logic_error("PrioritizedReplay::sample: zero total priority");

    Batch out;
    out.indices.resize(static_cast<std::size_t>(batch));
    out.items.resize(static_cast<std::size_t>(batch));
    out.weights.resize(batch);
    std::uniform_real_distribution<double> uni(0.0, total);
    const double n = static_cast<double>(items_.size());
    for (int k = 0; k < batch; ++k) {
        const std::size_t idx = tree_.find(uni(rng));
        out.indices[static_cast<std::size_t>(k)] = idx;
        out.items[static_cast<std::size_t>(k)] = &items_[idx];
        const double prob = tree_.get(idx) / total;
        out.weights[k] = std::pow(n * prob, -beta);
    }
    const double max_w = out.weights.maxCoeff();
    if (max_w > 0.0) out.weights /= max_w;
    return out;
}

void PrioritizedReplay::update(const std::vector<std::size_t>& indices,
                               const std::vector<double>& td_errors) {
    if (indices.size() != td_errors.size()) {
        throw std::invalid_argument("PrioritizedReplay::update: size mismatch");
    }
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const double p = std::pow(std::abs(td_errors[k]) + floor_, exponent_);
        tree_.set(indices[k], p);
        max_priority_ = std::max(max_priority_, p);
    }
}

}  // namespace sarinv
