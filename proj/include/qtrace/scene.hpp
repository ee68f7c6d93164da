#pragma once

// Renderable world: objects, materials, point lights and camera, plus the
// JSON scene format (docs/scene_format.md).

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qtrace/color.hpp"
#include "qtrace/geometry.hpp"
#include "qtrace/quotient.hpp"

namespace qtrace {

/// Phong-style coefficients. ke is the specular exponent (roughness).
struct Material {
  std::string name;
  Rgb ka, kd, ks;
  double ke = 1;
  Rgb emission;
};

/// Set of points at geodesic distance <= radius from center.
struct Sphere {
  ModelPoint center;
  Real radius = 0;
};

/// Planar parallelogram corner + s edge_u + t edge_v, s, t in [0,1].
/// Euclidean scenes only; shaded from both sides.
struct Quad {
  ModelPoint corner;
  TangentVec edge_u, edge_v;
};

/// Tubes along the edges of the mirrored dodecahedron, approximated by chains
/// of overlapping geodesic spheres ("beads"). They sit on the domain boundary,
/// so the mirrors complete each tube from the quarter lying inside.
struct EdgeTubes {
  Real radius = 0;
  int beads_per_edge = 0;
  struct Edge {
    Sphere bound;                 // encloses every bead of the edge
    std::vector<Sphere> beads;
  };
  std::vector<Edge> edges;
};

using Shape = std::variant<Sphere, Quad, EdgeTubes>;

struct SceneObject {
  int id = 0;
  std::string name;
  Shape shape;
  Material material;
};

struct PointLight {
  std::string name;
  ModelPoint position;
  Rgb intensity;
};

/// Camera placement: origin plus a g-orthonormal frame in T_origin.
struct CameraSpec {
  ModelPoint origin;
  TangentVec right, up, forward;
  double vfov = 1;  // radians
};

struct Scene {
  QuotientManifold manifold;
  Rgb ambient;
  CameraSpec camera;
  std::vector<PointLight> lights;
  std::vector<SceneObject> objects;

  GeometryTag tag() const { return manifold.tag; }
};

/// Malformed text. line is 1-based, 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0);
  int line() const { return line_; }

 private:
  int line_;
};

struct Violation {
  std::string entity;
  std::string rule;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// The scene file could not be read.
class SceneFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses and validates. Throws ParseError or ValidationError.
Scene parse_scene(std::string_view text);
Scene load_scene(const std::filesystem::path& path);

/// Writes the scene back to its file format (parse(serialize(s)) == s).
std::string serialize_scene(const Scene& scene);

/// Empty iff every scene invariant holds.
std::vector<Violation> validate(const Scene& scene);

/// Beads for the mirrored dodecahedron edges.
EdgeTubes make_edge_tubes(const QuotientManifold& q, Real radius, int beads_per_edge);

/// Camera frame from a position, a target and an up hint; all given in the
/// scene chart (Klein coordinates for hyperbolic manifolds).
CameraSpec look_at_camera(GeometryTag tag, const Vec3& from, const Vec3& target, const Vec3& up_hint,
                          double vfov);

/// Chart coordinates <-> model points (Klein ball for H3, xyz for E3).
ModelPoint point_from_chart(GeometryTag tag, const Vec3& c);
Vec3 point_to_chart(GeometryTag tag, const ModelPoint& p);

}  // namespace qtrace
