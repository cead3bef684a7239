#include "sarinv/net.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace sarinv {

void DenseLayer::init(int out, int in, std::mt19937_64& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> uni(-bound, bound);
    w.resize(out, in);
    b.resize(out);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = uni(rng);
    }
    for (Eigen::Index r = 0; r < b.size(); ++r) b[r] = uni(rng);
    m_w = Eigen::MatrixXd::Zero(out, in);
    v_w = Eigen::MatrixXd::Zero(out, in);
    m_b = Eigen::VectorXd::Zero(out);
    v_b = Eigen::VectorXd::Zero(out);
}

void adam_update(DenseLayer& layer, const LayerGrads& grads, const AdamConfig& cfg, long t) {
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    layer.m_w = cfg.beta1 * layer.m_w + (1.0 - cfg.beta1) * grads.w;
    layer.v_w = cfg.beta2 * layer.v_w + (1.0 - cfg.beta2) * grads.w.cwiseAbs2();
    layer.m_b = cfg.beta1 * layer.m_b + (1.0 - cfg.beta1) * grads.b;
    layer.v_b = cfg.beta2 * layer.v_b + (1.0 - cfg.beta2) * grads.b.cwiseAbs2();
    layer.w -= (cfg.lr / bc1) * (layer.m_w.array() / ((layer.v_w / bc2).cwiseSqrt().array() + cfg.eps)).matrix();
    layer.b -= (cfg.lr / bc1) * (layer.m_b.array() / ((layer.v_b / bc2).cwiseSqrt().array() + cfg.eps)).matrix();
}

// ---------------------------------------------------------------------------

DuelingNet::DuelingNet(int input, int hidden1, int hidden2, int actions, std::uint64_t seed)
    : input_(input), hidden1_(hidden1), hidden2_(hidden2), actions_(actions) {
    std::mt19937_64 rng(seed);
    l1_.init(hidden1, input, rng);
    l2_.init(hidden2, hidden1, rng);
    value_.init(1, hidden2, rng);
    advantage_.init(actions, hidden2, rng);
}

Eigen::MatrixXd DuelingNet::forward(const Eigen::MatrixXd& states, Cache& cache) const {
    if (states.rows() != input_) throw std::invalid_argument("DuelingNet::forward: wrong state dimension");
    cache.x = states;
    cache.z1 = l1_.forward(states);
    cache.a1 = relu(cache.z1);
    cache.z2 = l2_.forward(cache.a1);
    cache.a2 = relu(cache.z2);
    cache.value = value_.forward(cache.a2);
    cache.advantage = advantage_.forward(cache.a2);
    const Eigen::RowVectorXd mean_adv = cache.advantage.colwise().mean();
    cache.q = cache.advantage;
    cache.q.rowwise() += cache.value.row(0) - mean_adv;
    return cache.q;
}

Eigen::MatrixXd DuelingNet::forward(const Eigen::MatrixXd& states) const {
    Cache cache;
    return forward(states, cache);
}

Eigen::VectorXd DuelingNet::forward_one(const Eigen::VectorXd& state) const {
    return forward(Eigen::MatrixXd(state)).col(0);
}

DuelingNet::Grads DuelingNet::backward(const Cache& cache, const std::vector<int>& actions,
                                       const Eigen::VectorXd& targets,
                                       const Eigen::VectorXd& is_weights) const {
    const Eigen::Index batch = cache.x.cols();
    if (static_cast<Eigen::Index>(actions.size()) != batch || targets.size() != batch ||
        is_weights.size() != batch) {
        throw std::invalid_argument("DuelingNet::backward: batch size mismatch");
    }

    // dL/dQ is non-zero only at the taken action of each sample
    Eigen::VectorXd g(batch);
    for (Eigen::Index i = 0; i < batch; ++i) {
        const int a = actions[static_cast<std::size_t>(i)];
        if (a < 0 || a >= actions_) throw std::invalid_argument("DuelingNet::backward: bad action index");
        g[i] = 2.0 / static_cast<double>(batch) * is_weights[i] * (cache.q(a, i) - targets[i]);
    }

    // through the dueling combination: dQ/dV = 1, dQ/dA_k = [k == a] - 1/actions
    Eigen::MatrixXd d_adv = Eigen::MatrixXd::Constant(actions_, batch, -1.0 / actions_);
    d_adv.array().rowwise() *= g.transpose().array();
    for (Eigen::Index i = 0; i < batch; ++i) d_adv(actions[static_cast<std::size_t>(i)], i) += g[i];
    const Eigen::RowVectorXd d_value = g.transpose();

    Grads grads;
    grads.advantage.w = d_adv * cache.a2.transpose();
    grads.advantage.b = d_adv.rowwise().sum();
    grads.value.w = d_value * cache.a2.transpose();
    grads.value.b = Eigen::VectorXd::Constant(1, d_value.sum());

    Eigen::MatrixXd d_a2 = advantage_.w.transpose() * d_adv + value_.w.transpose() * d_value;
    Eigen::MatrixXd d_z2 = d_a2.cwiseProduct((cache.z2.array() > 0.0).cast<double>().matrix());
    grads.l2.w = d_z2 * cache.a1.transpose();
    grads.l2.b = d_z2.rowwise().sum();

    Eigen::MatrixXd d_a1 = l2_.w.transpose() * d_z2;
    Eigen::MatrixXd d_z1 = d_a1.cwiseProduct((cache.z1.array() > 0.0).cast<double>().matrix());
    grads.l1.w = d_z1 * cache.x.transpose();
    grads.l1.b = d_z1.rowwise().sum();
    return grads;
}

void DuelingNet::apply(const Grads& grads, const AdamConfig& cfg) {
    ++adam_t_;
    adam_update(l1_, grads.l1, cfg, adam_t_);
    adam_update(l2_, grads.l2, cfg, adam_t_);
    adam_update(value_, grads.value, cfg, adam_t_);
    adam_update(advantage_, grads.advantage, cfg, adam_t_);
}

bool DuelingNet::equals(const DuelingNet& other) const {
    return input_ == other.input_ && hidden1_ == other.hidden1_ && hidden2_ == other.hidden2_ &&
           actions_ == other.actions_ && l1_.w == other.l1_.w && l1_.b == other.l1_.b &&
           l2_.w == other.l2_.w && l2_.b == other.l2_.b && value_.w == other.value_.w &&
           value_.b == other.value_.b && advantage_.w == other.advantage_.w &&
           advantage_.b == other.advantage_.b;
}

// ---------------------------------------------------------------------------
// Binary persistence. All scalars little-endian; doubles raw IEEE-754.

namespace {

void write_bytes(std::ofstream& out, const void* data, std::size_t bytes) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
}

void read_bytes(std::ifstream& in, void* data, std::size_t bytes, const std::string& path) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(bytes));
    if (in.gcount() != static_cast<std::streamsize>(bytes)) {
        throw std::runtime_error("checkpoint: truncated file " + path);
    }
}

void write_i32(std::ofstream& out, std::int32_t v) { write_bytes(out, &v, sizeof v); }
void write_i64(std::ofstream& out, std::int64_t v) { write_bytes(out, &v, sizeof v); }

std::int32_t read_i32(std::ifstream& in, const std::string& path) {
    std::int32_t v = 0;
    read_bytes(in, &v, sizeof v, path);
    return v;
}

std::int64_t read_i64(std::ifstream& in, const std::string& path) {
    std::int64_t v = 0;
    read_bytes(in, &v, sizeof v, path);
    return v;
}

void write_matrix(std::ofstream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double v = m(r, c);
            write_bytes(out, &v, sizeof v);
        }
    }
}

void read_matrix(std::ifstream& in, Eigen::MatrixXd& m, const std::string& path) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            double v = 0.0;
            read_bytes(in, &v, sizeof v, path);
            m(r, c) = v;
        }
    }
}

void write_vector(std::ofstream& out, const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double x = v[i];
        write_bytes(out, &x, sizeof x);
    }
}

void read_vector(std::ifstream& in, Eigen::VectorXd& v, const std::string& path) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        double x = 0.0;
        read_bytes(in, &x, sizeof x, path);
        v[i] = x;
    }
}

void write_layer(std::ofstream& out, const DenseLayer& l) {
    write_matrix(out, l.w);
    write_vector(out, l.b);
    write_matrix(out, l.m_w);
    write_matrix(out, l.v_w);
    write_vector(out, l.m_b);
    write_vector(out, l.v_b);
}

void read_layer(std::ifstream& in, DenseLayer& l, int out_dim, int in_dim, const std::string& path) {
    l.w.resize(out_dim, in_dim);
    l.b.resize(out_dim);
    l.m_w.resize(out_dim, in_dim);
    l.v_w.resize(out_dim, in_dim);
    l.m_b.resize(out_dim);
    l.v_b.resize(out_dim);
    read_matrix(in, l.w, path);
    read_vector(in, l.b, path);
    read_matrix(in, l.m_w, path);
    read_matrix(in, l.v_w, path);
    read_vector(in, l.m_b, path);
    read_vector(in, l.v_b, path);
}

constexpr char kDuelingMagic[4] = {'S', 'Q', 'N', '1'};
constexpr char kMlpMagic[4] = {'S', 'M', 'R', '1'};

}  // namespace

void DuelingNet::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("DuelingNet::save: cannot open " + path);
    write_bytes(out, kDuelingMagic, 4);
    write_i32(out, input_);
    write_i32(out, hidden1_);
    write_i32(out, hidden2_);
    write_i32(out, actions_);
    write_i64(out, adam_t_);
    write_layer(out, l1_);
    write_layer(out, l2_);
    write_layer(out, value_);
    write_layer(out, advantage_);
    if (!out) throw std::runtime_error("DuelingNet::save: short write to " + path);
}

DuelingNet DuelingNet::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("DuelingNet::load: cannot open " + path);
    char magic[4];
    read_bytes(in, magic, 4, path);
    if (std::string(magic, 4) != std::string(kDuelingMagic, 4)) {
        throw std::runtime_error("DuelingNet::load: " + path + " is not an action-value checkpoint");
    }
    DuelingNet net;
    net.input_ = read_i32(in, path);
    net.hidden1_ = read_i32(in, path);
    net.hidden2_ = read_i32(in, path);
    net.actions_ = read_i32(in, path);
    net.adam_t_ = read_i64(in, path);
    read_layer(in, net.l1_, net.hidden1_, net.input_, path);
    read_layer(in, net.l2_, net.hidden2_, net.hidden1_, path);
    read_layer(in, net.value_, 1, net.hidden2_, path);
    read_layer(in, net.advantage_, net.actions_, net.hidden2_, path);
    return net;
}

// ---------------------------------------------------------------------------

Mlp::Mlp(const std::vector<int>& layer_sizes, std::uint64_t seed) : sizes_(layer_sizes) {
    if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output sizes");
    std::mt19937_64 rng(seed);
    layers_.resize(sizes_.size() - 1);
    for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
        layers_[i].init(sizes_[i + 1], sizes_[i], rng);
    }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd h = x;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        h = layers_[i].forward(h);
        if (i + 1 < layers_.size()) h = relu(h);
    }
    return h;
}

Eigen::VectorXd Mlp::forward_one(const Eigen::VectorXd& x) const {
    return forward(Eigen::MatrixXd(x)).col(0);
}

double Mlp::train_step(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                       const AdamConfig& cfg) {
    const Eigen::Index batch = inputs.cols();
    std::vector<Eigen::MatrixXd> pre(layers_.size());
    std::vector<Eigen::MatrixXd> act(layers_.size() + 1);
    act[0] = inputs;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        pre[i] = layers_[i].forward(act[i]);
        act[i + 1] = (i + 1 < layers_.size()) ? relu(pre[i]) : pre[i];
    }
    const Eigen::MatrixXd diff = act.back() - targets;
    const double loss = diff.squaredNorm() / static_cast<double>(batch);

    ++adam_t_;
    Eigen::MatrixXd delta = 2.0 / static_cast<double>(batch) * diff;
    for (std::size_t i = layers_.size(); i-- > 0;) {
        if (i + 1 < layers_.size()) {
            delta = delta.cwiseProduct((pre[i].array() > 0.0).cast<double>().matrix());
        }
        LayerGrads grads;
        grads.w = delta * act[i].transpose();
        grads.b = delta.rowwise().sum();
        if (i > 0) delta = layers_[i].w.transpose() * delta;
        adam_update(layers_[i], grads, cfg, adam_t_);
    }
    return loss;
}

void Mlp::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("Mlp::save: cannot open " + path);
    write_bytes(out, kMlpMagic, 4);
    write_i32(out, static_cast<std::int32_t>(sizes_.size()));
    for (int s : sizes_) write_i32(out, s);
    write_i64(out, adam_t_);
    for (const auto& l : layers_) write_layer(out, l);
    if (!out) throw std::runtime_error("Mlp::save: short write to " + path);
}

Mlp Mlp::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("Mlp::load: cannot open " + path);
    char magic[4];
    read_bytes(in, magic, 4, path);
    if (std::string(magic, 4) != std::string(kMlpMagic, 4)) {
        throw std::runtime_error("Mlp::load: " + path + " is not a regressor checkpoint");
    }
    Mlp net;
    const int n = read_i32(in, path);
    net.sizes_.resize(static_cast<std::size_t>(n));
    for (auto& s : net.sizes_) s = read_i32(in, path);
    net.adam_t_ = read_i64(in, path);
    net.layers_.resize(net.sizes_.size() - 1);
    for (std::size_t i = 0; i + 1 < net.sizes_.size(); ++i) {
        read_layer(in, net.layers_[i], net.sizes_[i + 1], net.sizes_[i], path);
    }
    return net;
}

}  // namespace sarinv
