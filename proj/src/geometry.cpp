#include "sarinv/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sarinv {

double wrap_azimuth(double beta_deg) {
    double r = std::fmod(beta_deg, 360.0);
    if (r < 0.0) r += 360.0;
    if (r >= 360.0) r -= 360.0;
    return r + 0.0;  // normalizes -0 to +0
}

double angular_error(double estimate_deg, double truth_deg, bool circular) {
    if (!circular) return std::abs(estimate_deg - truth_deg);
    double d = std::abs(wrap_azimuth(estimate_deg) - wrap_azimuth(truth_deg));
    return std::min(d, 360.0 - d);
}

RotationMatrix rotation_matrix(const ViewAngles& angles) {
    const double a = deg2rad(angles.alpha);
    const double b = deg2rad(wrap_azimuth(angles.beta));
    const double sa = std::sin(a), ca = std::cos(a);
    const double sb = std::sin(b), cb = std::cos(b);
    RotationMatrix r;
    r << -cb, -ca * sb, -sa * sb,
         0.0,       sa,      -ca,
          sb, -ca * cb, -sa * cb;
    return r;
}

double TriangleMesh::face_area(int face) const {
    const Vec3 e1 = face_vertex(face, 1) - face_vertex(face, 0);
    const Vec3 e2 = face_vertex(face, 2) - face_vertex(face, 0);
    return 0.5 * e1.cross(e2).norm();
}

Vec3 TriangleMesh::face_normal(int face) const {
    const Vec3 e1 = face_vertex(face, 1) - face_vertex(face, 0);
    const Vec3 e2 = face_vertex(face, 2) - face_vertex(face, 0);
    return e1.cross(e2).normalized();
}

double TriangleMesh::total_area() const {
    double sum = 0.0;
    for (int f = 0; f < face_count(); ++f) sum += face_area(f);
    return sum;
}

void validate_mesh(const TriangleMesh& mesh) {
    const int nv = mesh.vertex_count();
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        for (int idx : mesh.faces[f]) {
            if (idx < 0 || idx >= nv) {
                throw std::invalid_argument("mesh face " + std::to_string(f) +
                                            " references vertex " + std::to_string(idx) +
                                            " out of range [0, " + std::to_string(nv) + ")");
            }
        }
        if (mesh.face_area(static_cast<int>(f)) <= 0.0) {
            throw std::invalid_argument("mesh face " + std::to_string(f) + " is degenerate (zero area)");
        }
    }
    if (!mesh.face_texture.empty() && mesh.face_texture.size() != mesh.faces.size()) {
        throw std::invalid_argument("mesh texture count does not match face count");
    }
    for (double t : mesh.face_texture) {
        if (!(t >= 0.0)) throw std::invalid_argument("mesh face texture must be non-negative");
    }
}

void append_mesh(TriangleMesh& mesh, const TriangleMesh& extra) {
    const int base = mesh.vertex_count();
    mesh.vertices.insert(mesh.vertices.end(), extra.vertices.begin(), extra.vertices.end());
    for (const auto& f : extra.faces) {
        mesh.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
    }
    mesh.face_texture.insert(mesh.face_texture.end(), extra.face_texture.begin(), extra.face_texture.end());
}

TriangleMesh to_radar_frame(const TriangleMesh& mesh, const ViewAngles& angles, const Vec3& antenna) {
    const RotationMatrix rt = rotation_matrix(angles).transpose();
    TriangleMesh out = mesh;
    for (auto& v : out.vertices) v = rt * (v - antenna);
    return out;
}

namespace {

long round_half_even(double x) {
    const double f = std::floor(x);
    const double frac = x - f;
    if (frac > 0.5) return static_cast<long>(f) + 1;
    if (frac < 0.5) return static_cast<long>(f);
    const long lo = static_cast<long>(f);
    return (lo % 2 == 0) ? lo : lo + 1;
}

}  // namespace

long projection_units(long n_mapping, double alpha_deg) {
    if (!(alpha_deg > 0.0 && alpha_deg < 90.0)) {
        throw std::domain_error("projection_units: incidence must lie in (0, 90) degrees, got " +
                                std::to_string(alpha_deg));
    }
    if (n_mapping < 0) throw std::domain_error("projection_units: mapping unit count must be >= 0");
    return round_half_even(static_cast<double>(n_mapping) * std::tan(deg2rad(alpha_deg)));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    // splitmix64 applied to a combined word; cheap and well dispersed
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1) + 0xbf58476d1ce4e5b9ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace sarinv
