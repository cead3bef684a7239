#pragma once

#include "sarinv/renderer.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sarinv {

struct ManifestEntry {
    std::string path;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
};

/// Exhaustive grid: alpha 35..70 step 5 crossed with beta 0..355 step 5
/// (576 images by default).
struct GridSpec {
    double alpha_start = 35.0, alpha_stop = 70.0, alpha_step = 5.0;
    double beta_start = 0.0, beta_stop = 355.0, beta_step = 5.0;
};

/// Discrete-uniform sampling over the lattice {a, a+rho, ..., b} for alpha and
/// {c, c+upsilon, ...} < d for beta.
struct DistSpec {
    double a = 35.0, b = 75.0, rho = 5.0;
    double c = 0.0, d = 360.0, upsilon = 5.0;
    int count = 100;
};

/// Values of the alpha lattice (9 entries with the defaults).
std::vector<double> dist_alpha_support(const DistSpec& spec);
std::vector<double> dist_beta_support(const DistSpec& spec);

/// Renders one image per entry into out_dir (img_00000.pgm plus .meta),
/// deterministic for a given seed. Per-image render seeds derive from `seed`.
DatasetManifest gen_dataset(const Scene& scene, const RenderConfig& config, const GridSpec& spec,
                            const std::string& out_dir, std::uint64_t seed);
DatasetManifest gen_dataset(const Scene& scene, const RenderConfig& config, const DistSpec& spec,
                            const std::string& out_dir, std::uint64_t seed);

/// CSV persistence: header path,alpha,beta,seed.
void save_manifest(const DatasetManifest& manifest, const std::string& path);
DatasetManifest load_manifest(const std::string& path);

}  // namespace sarinv
