#pragma once

#include "sarinv/geometry.hpp"
#include "sarinv/image.hpp"
#include "sarinv/mesh.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace sarinv {

/// Two-parameter gamma distribution (shape k, scale theta) for scattering
/// texture amplitudes.
struct GammaTexture {
    double shape = 1.0;
    double scale = 1.0;
};

/// Texture fits for the vehicle and clutter regions used by the default scenes.
inline constexpr GammaTexture kTargetTexture{2.311, 0.162};
inline constexpr GammaTexture kBackgroundTexture{2.867, 0.029};

/// n i.i.d. draws from Gamma(shape, scale); identical sequences for identical
/// seeds. Throws std::invalid_argument on non-positive parameters.
std::vector<double> sample_gamma(const GammaTexture& texture, int n, std::uint64_t seed);

/// Target mesh plus a textured ground patch at z = 0.
struct Scene {
    TriangleMesh target;
    TriangleMesh ground;
};

/// Assembles a scene: every target facet receives one draw from target_tex and
/// every ground facet one draw from bg_tex, deterministically from `seed`.
/// The ground is a grid of ground_subdiv^2 quads with side max(4 x target
/// extent, ground_side) so the target footprint is always contained.
/// Throws std::invalid_argument on an empty target or a target below z = 0.
Scene build_scene(const TriangleMesh& target, const GammaTexture& target_tex,
                  const GammaTexture& bg_tex, std::uint64_t seed,
                  int ground_subdiv = 16, double ground_side = 0.0);

struct RenderConfig {
    int image_size = 128;        // mapping units per axis
    int samples_per_facet = 64;  // stratified barycentric samples
    double azimuth_window = 0.0; // meters; 0 = auto-fit to the ground patch
    double range_window = 0.0;   // meters; 0 = auto-fit
    bool speckle = false;        // multiplicative unit-mean exponential noise
    std::uint64_t seed = 0;
    double alpha_min = 30.0;     // accepted incidence range, degrees
    double alpha_max = 75.0;
};

/// Geometry of the mapping grid actually used by a render, for callers that
/// need to translate radar-frame coordinates into pixel bins.
struct RenderFrame {
    int size = 0;            // bins per axis
    double x_min = 0.0;      // azimuth window start (radar X')
    double z_min = 0.0;      // slant-range window start (radar Z')
    double bin_x = 0.0;      // meters per azimuth bin
    double bin_z = 0.0;      // meters per range bin
    double slant_center = 0.0;  // slant range of the world origin
    long projection_cells = 0;  // occlusion-buffer cells per axis

    int range_bin(double z) const { return static_cast<int>(std::floor((z - z_min) / bin_z)); }
    int azimuth_bin(double x) const { return static_cast<int>(std::floor((x - x_min) / bin_x)); }
};

/// Pre-speckle intensity grids attributed to the target and ground meshes;
/// their sum is the rendered image.
struct RenderParts {
    Eigen::MatrixXd target;
    Eigen::MatrixXd ground;
    RenderFrame frame;
};

RenderParts render_parts(const Scene& scene, const ViewAngles& angles, const RenderConfig& config);

/// Far-field mapping/projection render. Deterministic for identical
/// (scene, angles, config, seed); azimuth is periodic mod 360.
/// Throws std::out_of_range when alpha is outside the configured bounds and
/// std::invalid_argument on degenerate configs.
SarImage render(const Scene& scene, const ViewAngles& angles, const RenderConfig& config);

/// Antenna position on the viewing ray for the given scene and angles
/// (10x the scene bounding-sphere radius from the origin).
Vec3 antenna_position(const Scene& scene, const ViewAngles& angles);

}  // namespace sarinv
