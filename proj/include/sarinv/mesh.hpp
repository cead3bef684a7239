#pragma once

#include "sarinv/geometry.hpp"

#include <string>

namespace sarinv {

/// Axis-aligned box of the given extents, base resting on z = 0, centered in x/y.
/// 12 triangles, outward winding.
TriangleMesh box_mesh(double dx, double dy, double dz);

/// Right-angle wedge (triangular prism) extruded along y: vertical back wall at
/// x = -dx/2, sloped top falling to z = 0 at x = +dx/2. 8 triangles.
TriangleMesh wedge_mesh(double dx, double dy, double dz);

/// Tank-like target: hull box, turret box set back of center, and a barrel
/// prism protruding forward (+x). Deliberately azimuth-asymmetric so the
/// heading is identifiable from imagery.
TriangleMesh tank_like_mesh();

enum class PrimitiveKind { kBox, kWedge, kTankLike };

/// Dispatch on kind; dims are ignored for the tank. Throws on non-positive dims.
TriangleMesh primitive_mesh(PrimitiveKind kind, double dx = 1.0, double dy = 1.0, double dz = 1.0);

/// Flat square ground patch at z = 0, side `side`, subdivided into
/// subdiv x subdiv quads (two triangles each), normals up.
TriangleMesh ground_plane(double side, int subdiv);

/// Reads a Wavefront OBJ subset: `v x y z` and `f i j k ...` records
/// (1-based indices, optional /texture/normal suffixes ignored, polygons
/// fan-triangulated). Other record types are skipped. Throws
/// std::runtime_error naming the offending line on malformed input.
TriangleMesh load_obj(const std::string& path);

}  // namespace sarinv
