#include "sarinv/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace sarinv {

std::vector<double> sample_gamma(const GammaTexture& texture, int n, std::uint64_t seed) {
    if (!(texture.shape > 0.0) || !(texture.scale > 0.0)) {
        throw std::invalid_argument("sample_gamma: shape and scale must be positive");
    }
    if (n < 0) throw std::invalid_argument("sample_gamma: n must be >= 0");
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> dist(texture.shape, texture.scale);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& v : out) v = dist(rng);
    return out;
}

Scene build_scene(const TriangleMesh& target, const GammaTexture& target_tex,
                  const GammaTexture& bg_tex, std::uint64_t seed,
                  int ground_subdiv, double ground_side) {
    if (target.face_count() == 0) throw std::invalid_argument("build_scene: target mesh has no faces");
    validate_mesh(target);

    Vec3 lo = target.vertices.front(), hi = lo;
    for (const auto& v : target.vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    if (lo.z() < -1e-9) throw std::invalid_argument("build_scene: target extends below the ground plane");
    const double extent = (hi - lo).maxCoeff();
    const double footprint = 2.0 * std::max({std::abs(lo.x()), std::abs(hi.x()),
                                             std::abs(lo.y()), std::abs(hi.y())});
    const double side = std::max({4.0 * extent, footprint, ground_side});

    Scene scene;
    scene.target = target;
    scene.target.face_texture = sample_gamma(target_tex, target.face_count(), derive_seed(seed, 1));
    scene.ground = ground_plane(side, ground_subdiv);
    scene.ground.face_texture = sample_gamma(bg_tex, scene.ground.face_count(), derive_seed(seed, 2));
    return scene;
}

namespace {

struct SceneBounds {
    Vec3 lo{0, 0, 0}, hi{0, 0, 0};
    double diameter() const { return (hi - lo).norm(); }
};

SceneBounds scene_bounds(const Scene& scene) {
    SceneBounds b;
    bool first = true;
    for (const TriangleMesh* m : {&scene.target, &scene.ground}) {
        for (const auto& v : m->vertices) {
            if (first) {
                b.lo = b.hi = v;
                first = false;
            } else {
                b.lo = b.lo.cwiseMin(v);
                b.hi = b.hi.cwiseMax(v);
            }
        }
    }
    return b;
}

// Occlusion buffer over the projection plane (X' azimuth, Y' cross-range):
// per cell, the minimum slant range of any facet covering the cell center.
struct DepthBuffer {
    int n = 0;
    double x0 = 0, y0 = 0, cell = 0;
    std::vector<double> z;

    void init(int cells, double x_min, double y_min, double cell_size) {
        n = cells;
        x0 = x_min;
        y0 = y_min;
        cell = cell_size;
        z.assign(static_cast<std::size_t>(n) * n, std::numeric_limits<double>::infinity());
    }

    double at(double x, double y) const {
        const int i = static_cast<int>(std::floor((x - x0) / cell));
        const int j = static_cast<int>(std::floor((y - y0) / cell));
        if (i < 0 || i >= n || j < 0 || j >= n) return std::numeric_limits<double>::infinity();
        return z[static_cast<std::size_t>(j) * n + i];
    }

    void rasterize(const Vec3& a, const Vec3& b, const Vec3& c) {
        const double area2 = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
        if (std::abs(area2) < 1e-14) return;  // edge-on in projection
        const double sign = area2 > 0 ? 1.0 : -1.0;
        const double xmin = std::min({a.x(), b.x(), c.x()});
        const double xmax = std::max({a.x(), b.x(), c.x()});
        const double ymin = std::min({a.y(), b.y(), c.y()});
        const double ymax = std::max({a.y(), b.y(), c.y()});
        const int i0 = std::max(0, static_cast<int>(std::floor((xmin - x0) / cell - 0.5)));
        const int i1 = std::min(n - 1, static_cast<int>(std::ceil((xmax - x0) / cell - 0.5)));
        const int j0 = std::max(0, static_cast<int>(std::floor((ymin - y0) / cell - 0.5)));
        const int j1 = std::min(n - 1, static_cast<int>(std::ceil((ymax - y0) / cell - 0.5)));
        for (int j = j0; j <= j1; ++j) {
            const double py = y0 + (j + 0.5) * cell;
            for (int i = i0; i <= i1; ++i) {
                const double px = x0 + (i + 0.5) * cell;
                const double w0 = sign * ((c.x() - b.x()) * (py - b.y()) - (c.y() - b.y()) * (px - b.x()));
                const double w1 = sign * ((a.x() - c.x()) * (py - c.y()) - (a.y() - c.y()) * (px - c.x()));
                const double w2 = sign * ((b.x() - a.x()) * (py - a.y()) - (b.y() - a.y()) * (px - a.x()));
                if (w0 < 0 || w1 < 0 || w2 < 0) continue;
                const double wsum = w0 + w1 + w2;
                if (wsum <= 0) continue;
                const double depth = (w0 * a.z() + w1 * b.z() + w2 * c.z()) / wsum;
                auto& slot = z[static_cast<std::size_t>(j) * n + i];
                slot = std::min(slot, depth);
            }
        }
    }
};

std::vector<Vec3> radar_vertices(const TriangleMesh& mesh, const Eigen::Matrix3d& world_to_radar,
                                 const Vec3& offset) {
    std::vector<Vec3> out(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        out[i] = world_to_radar * mesh.vertices[i] + offset;
    }
    return out;
}

void validate_textures(const TriangleMesh& mesh, const char* name) {
    if (mesh.face_count() == 0) return;
    if (mesh.face_texture.size() != mesh.faces.size()) {
        throw std::invalid_argument(std::string("render: ") + name + " mesh lacks per-face textures");
    }
}

}  // namespace

Vec3 antenna_position(const Scene& scene, const ViewAngles& angles) {
    const SceneBounds b = scene_bounds(scene);
    const Vec3 center = 0.5 * (b.lo + b.hi);
    double radius = 0.0;
    for (const TriangleMesh* m : {&scene.target, &scene.ground}) {
        for (const auto& v : m->vertices) radius = std::max(radius, (v - center).norm());
    }
    const double a = deg2rad(angles.alpha);
    const double bet = deg2rad(wrap_azimuth(angles.beta));
    const Vec3 direction(std::sin(a) * std::cos(bet), std::sin(a) * std::sin(bet), std::cos(a));
    return 10.0 * std::max(radius, 1.0) * direction;
}

RenderParts render_parts(const Scene& scene, const ViewAngles& angles_in, const RenderConfig& config) {
    if (config.image_size < 16) throw std::invalid_argument("render: image_size must be >= 16");
    if (config.samples_per_facet < 1) throw std::invalid_argument("render: samples_per_facet must be >= 1");
    if (scene.target.face_count() + scene.ground.face_count() == 0) {
        throw std::invalid_argument("render: scene has no faces");
    }
    ViewAngles angles{angles_in.alpha, wrap_azimuth(angles_in.beta)};
    if (!(angles.alpha >= config.alpha_min && angles.alpha <= config.alpha_max)) {
        throw std::out_of_range("render: incidence " + std::to_string(angles.alpha) +
                                " outside [" + std::to_string(config.alpha_min) + ", " +
                                std::to_string(config.alpha_max) + "]");
    }
    validate_textures(scene.target, "target");
    validate_textures(scene.ground, "ground");

    const SceneBounds bounds = scene_bounds(scene);
    double auto_window = 0.0;
    if (scene.ground.face_count() > 0) {
        Vec3 glo = scene.ground.vertices.front(), ghi = glo;
        for (const auto& v : scene.ground.vertices) {
            glo = glo.cwiseMin(v);
            ghi = ghi.cwiseMax(v);
        }
        auto_window = std::sqrt(2.0) * (ghi - glo).head<2>().maxCoeff();
    } else {
        auto_window = std::sqrt(2.0) * 4.0 * (bounds.hi - bounds.lo).maxCoeff();
    }
    const double window_x = config.azimuth_window > 0.0 ? config.azimuth_window : auto_window;
    const double window_z = config.range_window > 0.0 ? config.range_window : auto_window;
    if (!(window_x > 0.0) || !(window_z > 0.0)) {
        throw std::invalid_argument("render: image window has zero area");
    }

    // world -> radar frame; the scene is z-up with beta measured from +x
    const Vec3 antenna = antenna_position(scene, angles);
    const double slant_center = antenna.norm();
    Eigen::Matrix3d axis_map;  // z-up world axes into the rotation's vertical-axis convention
    axis_map << 0, 1, 0,
                0, 0, 1,
                1, 0, 0;
    const Eigen::Matrix3d rt = rotation_matrix(angles).transpose();
    const Eigen::Matrix3d world_to_radar = rt * axis_map;
    const Vec3 offset = -(world_to_radar * antenna);

    const int n = config.image_size;
    RenderFrame frame;
    frame.size = n;
    frame.x_min = -window_x / 2.0;
    frame.z_min = slant_center - window_z / 2.0;
    frame.bin_x = window_x / n;
    frame.bin_z = window_z / n;
    frame.slant_center = slant_center;
    frame.projection_cells = projection_units(n, angles.alpha);

    const std::vector<Vec3> target_verts = radar_vertices(scene.target, world_to_radar, offset);
    const std::vector<Vec3> ground_verts = radar_vertices(scene.ground, world_to_radar, offset);

    DepthBuffer zbuf;
    zbuf.init(static_cast<int>(frame.projection_cells), -window_x / 2.0, -window_x / 2.0,
              window_x / static_cast<double>(frame.projection_cells));
    auto rasterize_mesh = [&](const TriangleMesh& mesh, const std::vector<Vec3>& verts) {
        for (const auto& f : mesh.faces) {
            zbuf.rasterize(verts[static_cast<std::size_t>(f[0])], verts[static_cast<std::size_t>(f[1])],
                           verts[static_cast<std::size_t>(f[2])]);
        }
    };
    rasterize_mesh(scene.target, target_verts);
    rasterize_mesh(scene.ground, ground_verts);

    // Base visibility slack; a slope-scaled term is added per facet so samples
    // are never occluded by their own surface inside one projection cell.
    const double base_tolerance = 1e-3 * bounds.diameter();
    const double slack_cap = 8.0 * window_z / n;

    const int spf = config.samples_per_facet;
    int strata = static_cast<int>(std::sqrt(static_cast<double>(spf)));
    while (strata * strata > spf) --strata;

    RenderParts parts;
    parts.frame = frame;
    parts.target = Eigen::MatrixXd::Zero(n, n);
    parts.ground = Eigen::MatrixXd::Zero(n, n);

    auto deposit_mesh = [&](const TriangleMesh& mesh, const std::vector<Vec3>& verts,
                            std::uint64_t mesh_stream, Eigen::MatrixXd& grid) {
        for (int f = 0; f < mesh.face_count(); ++f) {
            const auto& face = mesh.faces[static_cast<std::size_t>(f)];
            const Vec3& a = verts[static_cast<std::size_t>(face[0])];
            const Vec3 e1 = verts[static_cast<std::size_t>(face[1])] - a;
            const Vec3 e2 = verts[static_cast<std::size_t>(face[2])] - a;
            const Vec3 cross = e1.cross(e2);
            const double area = 0.5 * cross.norm();
            if (area <= 0.0) continue;
            const double cos_inc = std::max(0.0, -cross.z() / (2.0 * area));  // toward the radar is -Z'
            if (cos_inc <= 0.0) continue;
            const double weight = mesh.face_texture[static_cast<std::size_t>(f)] * area * cos_inc / spf;
            if (weight == 0.0) continue;

            // depth spread of this facet across half a projection cell
            const Vec3 normal = cross / (2.0 * area);
            const double gx = std::abs(normal.x() / normal.z());
            const double gy = std::abs(normal.y() / normal.z());
            const double slope_slack = std::min(0.5 * zbuf.cell * (gx + gy), slack_cap);
            const double tolerance = base_tolerance + slope_slack;

            std::mt19937_64 rng(derive_seed(config.seed, mesh_stream, static_cast<std::uint64_t>(f)));
            std::uniform_real_distribution<double> uni(0.0, 1.0);
            for (int k = 0; k < spf; ++k) {
                double u, v;
                if (k < strata * strata) {
                    u = (k % strata + uni(rng)) / strata;
                    v = (k / strata + uni(rng)) / strata;
                } else {
                    u = uni(rng);
                    v = uni(rng);
                }
                if (u + v > 1.0) {  // fold the unit square onto the triangle
                    u = 1.0 - u;
                    v = 1.0 - v;
                }
                const Vec3 p = a + u * e1 + v * e2;
                if (p.z() > zbuf.at(p.x(), p.y()) + tolerance) continue;  // occluded
                const int col = frame.azimuth_bin(p.x());
                const int row = frame.range_bin(p.z());
                if (col < 0 || col >= n || row < 0 || row >= n) continue;
                grid(row, col) += weight;
            }
        }
    };
    deposit_mesh(scene.target, target_verts, 11, parts.target);
    deposit_mesh(scene.ground, ground_verts, 12, parts.ground);
    // report reflectivity-style intensity: accumulated energy per unit bin area
    const double bin_area = frame.bin_x * frame.bin_z;
    parts.target /= bin_area;
    parts.ground /= bin_area;
    return parts;
}

SarImage render(const Scene& scene, const ViewAngles& angles, const RenderConfig& config) {
    RenderParts parts = render_parts(scene, angles, config);
    SarImage image;
    image.intensity = parts.target + parts.ground;
    image.angles = {angles.alpha, wrap_azimuth(angles.beta)};
    image.seed = config.seed;
    if (config.speckle) {
        std::mt19937_64 rng(derive_seed(config.seed, 21));
        std::exponential_distribution<double> exp1(1.0);
        for (Eigen::Index r = 0; r < image.intensity.rows(); ++r) {
            for (Eigen::Index c = 0; c < image.intensity.cols(); ++c) {
                image.intensity(r, c) *= exp1(rng);
            }
        }
    }
    return image;
}

}  // namespace sarinv
