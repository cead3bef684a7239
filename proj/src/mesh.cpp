#include "sarinv/mesh.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sarinv {

namespace {

void require_positive(double dx, double dy, double dz) {
    if (!(dx > 0.0 && dy > 0.0 && dz > 0.0)) {
        throw std::invalid_argument("primitive dimensions must be positive");
    }
}

void add_quad(TriangleMesh& m, int a, int b, int c, int d) {
    m.faces.push_back({a, b, c});
    m.faces.push_back({a, c, d});
}

}  // namespace

TriangleMesh box_mesh(double dx, double dy, double dz) {
    require_positive(dx, dy, dz);
    TriangleMesh m;
    const double hx = dx / 2.0, hy = dy / 2.0;
    // bottom ring (z=0) then top ring (z=dz), CCW seen from +z
    m.vertices = {
        {-hx, -hy, 0.0}, {hx, -hy, 0.0}, {hx, hy, 0.0}, {-hx, hy, 0.0},
        {-hx, -hy, dz},  {hx, -hy, dz},  {hx, hy, dz},  {-hx, hy, dz},
    };
    add_quad(m, 0, 3, 2, 1);  // bottom, normal -z
    add_quad(m, 4, 5, 6, 7);  // top, normal +z
    add_quad(m, 0, 1, 5, 4);  // -y side
    add_quad(m, 1, 2, 6, 5);  // +x side
    add_quad(m, 2, 3, 7, 6);  // +y side
    add_quad(m, 3, 0, 4, 7);  // -x side
    return m;
}

TriangleMesh wedge_mesh(double dx, double dy, double dz) {
    require_positive(dx, dy, dz);
    TriangleMesh m;
    const double hx = dx / 2.0, hy = dy / 2.0;
    // triangular cross-section in (x, z); extruded from -y to +y
    m.vertices = {
        {-hx, -hy, 0.0}, {hx, -hy, 0.0}, {-hx, -hy, dz},  // near end
        {-hx, hy, 0.0},  {hx, hy, 0.0},  {-hx, hy, dz},   // far end
    };
    m.faces.push_back({0, 1, 2});  // -y end cap
    m.faces.push_back({3, 5, 4});  // +y end cap
    add_quad(m, 0, 3, 4, 1);       // bottom
    add_quad(m, 0, 2, 5, 3);       // vertical back wall (-x)
    add_quad(m, 1, 4, 5, 2);       // sloped face
    return m;
}

TriangleMesh tank_like_mesh() {
    // hull
    TriangleMesh m = box_mesh(5.0, 2.6, 1.1);
    // turret, set back of center so front and rear silhouettes differ
    TriangleMesh turret = box_mesh(2.0, 1.8, 0.8);
    for (auto& v : turret.vertices) v += Vec3(-0.7, 0.0, 1.1);
    append_mesh(m, turret);
    // barrel: prism protruding well forward of the turret
    TriangleMesh barrel = wedge_mesh(3.2, 0.35, 0.35);
    for (auto& v : barrel.vertices) v += Vec3(0.3 + 1.6, 0.0, 1.35);
    append_mesh(m, barrel);
    // rear engine deck, lower and wider than the turret
    TriangleMesh deck = box_mesh(1.0, 2.2, 0.35);
    for (auto& v : deck.vertices) v += Vec3(-2.0, 0.0, 1.1);
    append_mesh(m, deck);
    return m;
}

TriangleMesh primitive_mesh(PrimitiveKind kind, double dx, double dy, double dz) {
    switch (kind) {
        case PrimitiveKind::kBox: return box_mesh(dx, dy, dz);
        case PrimitiveKind::kWedge: return wedge_mesh(dx, dy, dz);
        case PrimitiveKind::kTankLike: return tank_like_mesh();
    }
    throw std::invalid_argument("unknown primitive kind");
}

TriangleMesh ground_plane(double side, int subdiv) {
    if (!(side > 0.0) || subdiv < 1) throw std::invalid_argument("ground_plane: side and subdiv must be positive");
    TriangleMesh m;
    const int n = subdiv + 1;
    const double h = side / 2.0;
    const double step = side / subdiv;
    m.vertices.reserve(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            m.vertices.emplace_back(-h + i * step, -h + j * step, 0.0);
        }
    }
    for (int j = 0; j < subdiv; ++j) {
        for (int i = 0; i < subdiv; ++i) {
            const int a = j * n + i;
            const int b = a + 1;
            const int c = a + n + 1;
            const int d = a + n;
            add_quad(m, a, b, c, d);  // CCW from above, normal +z
        }
    }
    return m;
}

namespace {

int parse_obj_index(const std::string& token, int vertex_count, const std::string& path, int line_no) {
    std::size_t slash = token.find('/');
    const std::string head = (slash == std::string::npos) ? token : token.substr(0, slash);
    int idx = 0;
    try {
        std::size_t used = 0;
        idx = std::stoi(head, &used);
        if (used != head.size()) throw std::invalid_argument(head);
    } catch (const std::exception&) {
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ": bad face index '" + token + "'");
    }
    if (idx < 0) idx = vertex_count + idx + 1;  // negative indices count from the end
    if (idx < 1 || idx > vertex_count) {
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ": face index " + head + " out of range (have " +
                                 std::to_string(vertex_count) + " vertices)");
    }
    return idx - 1;
}

}  // namespace

TriangleMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_obj: cannot open " + path);
    TriangleMesh m;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ss >> x >> y >> z)) {
                throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                         ": malformed vertex record");
            }
            m.vertices.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string token;
            while (ss >> token) idx.push_back(parse_obj_index(token, m.vertex_count(), path, line_no));
            if (idx.size() < 3) {
                throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                         ": face needs at least 3 vertices");
            }
            for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
                m.faces.push_back({idx[0], idx[k], idx[k + 1]});  // fan triangulation
            }
        }
        // vn/vt/o/g/s/usemtl/mtllib records carry no geometry here; skipped
    }
    validate_mesh(m);
    return m;
}

}  // namespace sarinv
