#pragma once

// Geodesic ray casting through a quotient manifold: intersect the objects of
// the fundamental domain along the current geodesic segment, and otherwise
// carry the ray across the exit face with the face pairing.

#include <optional>

#include "qtrace/geometry.hpp"
#include "qtrace/scene.hpp"

namespace qtrace {

/// Offset for secondary and shadow ray origins; also the minimum accepted hit t.
inline constexpr Real kSurfaceEps = 1e-7L;

/// Default bound on fundamental-domain crossings per ray.
inline constexpr int kDefaultMaxLevel = 8;

struct Ray {
  ModelPoint p;
  TangentVec v;
  GeometryTag tag = GeometryTag::Euclidean;
};

struct HitRecord {
  int object = -1;
  Real t = 0;              // cumulative geodesic parameter from the ray origin
  ModelPoint point;
  TangentVec direction;    // r'(t) at the hit, pointing along the ray
  TangentVec normal;       // unit; outward for spheres, facing the ray for quads
  int transport_level = 0; // domain crossings before the hit
};

/// Smallest t > t_min with distance(center, r(t)) = radius.
std::optional<Real> intersect_sphere(GeometryTag tag, const Ray& ray, const Sphere& sphere,
                                     Real t_min = kSurfaceEps);

/// Euclidean ray against a parallelogram.
std::optional<Real> intersect_quad(const Ray& ray, const Quad& quad, Real t_min = kSurfaceEps);

/// Closest hit of the ray with any object within t in (t_min, t_max].
struct LocalHit {
  Real t = 0;
  int object = -1;
  const Sphere* sphere = nullptr;  // hit sphere or bead; null for quads
};
std::optional<LocalHit> intersect_objects(const Scene& scene, const Ray& ray, Real t_max,
                                          Real t_min = kSurfaceEps);

/// Traces (p, v) through the quotient manifold, crossing at most maxlevel faces.
std::optional<HitRecord> trace_ray(const Scene& scene, const ModelPoint& p, const TangentVec& v,
                                   int maxlevel);

/// Geodesic from p to the nearest copy of a light among the manifold's
/// neighbor copies.
struct LightConnection {
  TangentVec direction;  // unit tangent at p
  Real distance = 0;
};
LightConnection connect_to_light(const Scene& scene, const ModelPoint& p, const PointLight& light);

/// True iff an object blocks the connection from the surface point p (normal n)
/// to the light. The shadow ray starts kSurfaceEps along n.
bool occluded(const Scene& scene, const ModelPoint& p, const TangentVec& n, const PointLight& light,
              int maxlevel);

/// Point moved kSurfaceEps along the unit tangent n.
ModelPoint offset_point(GeometryTag tag, const ModelPoint& p, const TangentVec& n);

}  // namespace qtrace
