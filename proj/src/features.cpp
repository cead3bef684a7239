#include "sarinv/features.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace sarinv {

namespace {

void pool_blocks(const Eigen::MatrixXd& log_img, int grid, FeatureVector& out, int offset) {
    const Eigen::Index bh = log_img.rows() / grid;
    const Eigen::Index bw = log_img.cols() / grid;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            out[offset + i * grid + j] = log_img.block(i * bh, j * bw, bh, bw).mean();
        }
    }
}

}  // namespace

FeatureVector extract(const SarImage& image) {
    const Eigen::Index h = image.intensity.rows();
    const Eigen::Index w = image.intensity.cols();
    if (h == 0 || w == 0 || h % 16 != 0 || w % 16 != 0) {
        throw std::invalid_argument("extract: image dimensions must be positive and divisible by 16");
    }
    const Eigen::MatrixXd log_img = image.intensity.array().log1p();
    FeatureVector out(kFeatureDim);
    pool_blocks(log_img, 16, out, 0);
    pool_blocks(log_img, 4, out, 256);
    const double mean = log_img.mean();
    const double var = (log_img.array() - mean).square().mean();
    out[272] = mean;
    out[273] = std::sqrt(var);
    return out;
}

double feature_l1(const FeatureVector& a, const FeatureVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("feature_l1: length mismatch");
    return (a - b).cwiseAbs().sum();
}

FeatureNormalizer fit_normalizer(const std::vector<FeatureVector>& features) {
    if (features.size() < 2) throw std::invalid_argument("fit_normalizer: need at least 2 samples");
    const Eigen::Index dim = features.front().size();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
    for (const auto& f : features) {
        if (f.size() != dim) throw std::invalid_argument("fit_normalizer: inconsistent feature lengths");
        mean += f;
    }
    mean /= static_cast<double>(features.size());
    Eigen::VectorXd var = Eigen::VectorXd::Zero(dim);
    for (const auto& f : features) var += (f - mean).cwiseAbs2();
    var /= static_cast<double>(features.size());
    FeatureNormalizer n;
    n.mean = mean;
    n.stddev = var.cwiseSqrt();
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (n.stddev[i] < 1e-12) n.stddev[i] = 1.0;
    }
    return n;
}

FeatureNormalizer fit_normalizer(const std::vector<SarImage>& images) {
    std::vector<FeatureVector> features;
    features.reserve(images.size());
    for (const auto& img : images) features.push_back(extract(img));
    return fit_normalizer(features);
}

FeatureVector normalize(const FeatureVector& v, const FeatureNormalizer& n) {
    if (v.size() != n.mean.size()) throw std::invalid_argument("normalize: length mismatch");
    return (v - n.mean).cwiseQuotient(n.stddev);
}

void save_normalizer(const FeatureNormalizer& n, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_normalizer: cannot open " + path);
    out.precision(17);
    for (Eigen::Index i = 0; i < n.mean.size(); ++i) {
        out << n.mean[i] << " " << n.stddev[i] << "\n";
    }
}

FeatureNormalizer load_normalizer(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_normalizer: cannot open " + path);
    std::vector<double> means, stds;
    double m = 0.0, s = 0.0;
    while (in >> m >> s) {
        means.push_back(m);
        stds.push_back(s);
    }
    if (means.empty()) throw std::runtime_error("load_normalizer: " + path + " is empty");
    FeatureNormalizer n;
    n.mean = Eigen::Map<Eigen::VectorXd>(means.data(), static_cast<Eigen::Index>(means.size()));
    n.stddev = Eigen::Map<Eigen::VectorXd>(stds.data(), static_cast<Eigen::Index>(stds.size()));
    return n;
}

}  // namespace sarinv
