#pragma once

#include "sarinv/image.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace sarinv {

/// 256 log-intensity means on a 16x16 grid, 16 on a 4x4 grid, then the global
/// mean and standard deviation of log(1+I).
inline constexpr int kFeatureDim = 274;

using FeatureVector = Eigen::VectorXd;

/// Deterministic multi-resolution descriptor of a SAR image. Throws
/// std::invalid_argument unless both image dimensions are divisible by 16.
FeatureVector extract(const SarImage& image);

/// Sum of absolute component differences. Throws on length mismatch.
double feature_l1(const FeatureVector& a, const FeatureVector& b);

/// Per-dimension affine standardization fitted on a feature set. Dimensions
/// with zero variance keep sigma = 1 so normalization stays total.
struct FeatureNormalizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;
};

FeatureNormalizer fit_normalizer(const std::vector<FeatureVector>& features);
FeatureNormalizer fit_normalizer(const std::vector<SarImage>& images);
FeatureVector normalize(const FeatureVector& v, const FeatureNormalizer& n);

/// Two-column text persistence: "mean stddev" per line.
void save_normalizer(const FeatureNormalizer& n, const std::string& path);
FeatureNormalizer load_normalizer(const std::string& path);

}  // namespace sarinv
