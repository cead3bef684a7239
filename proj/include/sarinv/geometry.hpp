#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace sarinv {

using Vec3 = Eigen::Vector3d;
using RotationMatrix = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * (kPi / 180.0); }
inline double rad2deg(double rad) { return rad * (180.0 / kPi); }

/// Radar view angles in degrees: incidence alpha (from the vertical),
/// azimuth beta (about the target, periodic on [0, 360)).
struct ViewAngles {
    double alpha = 0.0;
    double beta = 0.0;
};

/// Maps any finite azimuth into [0, 360), congruent mod 360.
double wrap_azimuth(double beta_deg);

/// Absolute angular difference in degrees. With circular=true both inputs are
/// wrapped and the shorter arc is returned, so the result lies in [0, 180].
double angular_error(double estimate_deg, double truth_deg, bool circular);

/// World-to-radar rotation for the given view angles. Azimuth is wrapped
/// before any trigonometry so beta and beta+360 give identical matrices.
/// The result is always a proper rotation (orthonormal, det = +1).
RotationMatrix rotation_matrix(const ViewAngles& angles);

/// Triangulated surface with a per-face scattering coefficient.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
    std::vector<double> face_texture;  // one non-negative coefficient per face

    int face_count() const { return static_cast<int>(faces.size()); }
    int vertex_count() const { return static_cast<int>(vertices.size()); }

    Vec3 face_vertex(int face, int corner) const {
        return vertices[static_cast<std::size_t>(faces[static_cast<std::size_t>(face)][static_cast<std::size_t>(corner)])];
    }
    double face_area(int face) const;
    /// Unit normal following the winding order (counter-clockwise = outward).
    Vec3 face_normal(int face) const;
    double total_area() const;
};

/// Throws std::invalid_argument if any face index is out of range, any face
/// is degenerate (area == 0), or any texture coefficient is negative.
void validate_mesh(const TriangleMesh& mesh);

/// Appends `extra` to `mesh`, re-indexing faces; textures are concatenated.
void append_mesh(TriangleMesh& mesh, const TriangleMesh& extra);

/// Rigid transform of every vertex v into the radar frame, v_r = R^T (v - antenna).
/// Faces and textures are carried over unchanged.
TriangleMesh to_radar_frame(const TriangleMesh& mesh, const ViewAngles& angles, const Vec3& antenna);

/// Number of projection-plane units for a mapping plane of n_mapping units at
/// incidence alpha: round-half-even(n_mapping * tan(alpha)).
/// Throws std::domain_error unless 0 < alpha < 90.
long projection_units(long n_mapping, double alpha_deg);

/// Deterministic 64-bit mix used to derive independent sub-seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

}  // namespace sarinv
