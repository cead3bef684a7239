#pragma once

#include "sarinv/geometry.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace sarinv {

/// Non-negative backscatter intensity grid. Rows index slant range (near range
/// first), columns index azimuth.
struct SarImage {
    Eigen::MatrixXd intensity;
    ViewAngles angles;
    std::uint64_t seed = 0;

    int height() const { return static_cast<int>(intensity.rows()); }
    int width() const { return static_cast<int>(intensity.cols()); }
};

using Image8 = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// 8-bit quicklook: i8 = round(255 * log(1+I) / log(1+I_max)). A flat or empty
/// image quantizes to all zeros.
Image8 quantize8(const SarImage& image);

/// Writes the 8-bit quicklook of `image` as binary PGM (P5, maxval 255).
void write_pgm(const SarImage& image, const std::string& path);
void write_pgm(const Image8& grid, const std::string& path);

/// Reads a binary P5 PGM with maxval 255. Throws std::runtime_error on header
/// mismatch or truncated payload.
Image8 read_pgm(const std::string& path);

/// Line-oriented sidecar with alpha=, beta=, seed= keys.
void write_meta(const std::string& path, const ViewAngles& angles, std::uint64_t seed);
struct ImageMeta {
    ViewAngles angles;
    std::uint64_t seed = 0;
};
ImageMeta read_meta(const std::string& path);

/// Replaces the .pgm suffix (or appends) to form the sidecar path.
std::string meta_path_for(const std::string& pgm_path);

}  // namespace sarinv
