#include "qtrace/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qtrace {

namespace {

constexpr Real kInf = std::numeric_limits<Real>::infinity();
constexpr Real kTwoPi = 2 * std::numbers::pi_v<Real>;

// Smallest of two candidate roots above t_min.
std::optional<Real> first_above(Real a, Real b, Real t_min) {
  if (a > b) std::swap(a, b);
  if (a > t_min) return a;
  if (b > t_min) return b;
  return std::nullopt;
}

struct Vec3r {
  Real x, y, z;
};
Vec3r xyz(const Vec4& v) { return {v.x, v.y, v.z}; }
Real dot(const Vec3r& a, const Vec3r& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3r cross(const Vec3r& a, const Vec3r& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

bool starts_inside(GeometryTag tag, const Ray& ray, const Sphere& s) {
  return distance(tag, ray.p, s.center) < s.radius;
}

}  // namespace

std::optional<Real> intersect_sphere(GeometryTag tag, const Ray& ray, const Sphere& sphere, Real t_min) {
  const ModelPoint& p = ray.p;
  const TangentVec& v = ray.v;
  const ModelPoint& c = sphere.center;
  const Real radius = sphere.radius;

  switch (tag) {
    case GeometryTag::Euclidean: {
      // |p + t v - c|^2 = R^2 with |v| = 1.
      const Vec4 oc = p - c;
      const Real b = inner(tag, v, oc);
      const Real k = inner(tag, oc, oc) - radius * radius;
      const Real disc = b * b - k;
      if (disc < 0) return std::nullopt;
      const Real q = -(b + std::copysign(std::sqrt(disc), b));
      if (q == 0) return first_above(0, 0, t_min);
      return first_above(q, k / q, t_min);
    }
    case GeometryTag::Hyperbolic: {
      // cosh(t) A + sinh(t) B = -cosh R, as a quadratic in x = e^t:
      // (A + B) x^2 + 2 cosh(R) x + (A - B) = 0.
      const Real A = inner(tag, p, c), B = inner(tag, v, c);
      const Real alpha = A + B, beta = 2 * std::cosh(radius), gamma = A - B;
      const Real disc = beta * beta - 4 * alpha * gamma;
      if (disc < 0 || alpha == 0) return std::nullopt;
      const Real q = -(beta + std::sqrt(disc)) / 2;
      const Real x1 = q / alpha, x2 = gamma / q;
      const Real t1 = x1 > 0 ? std::log(x1) : -kInf;
      const Real t2 = x2 > 0 ? std::log(x2) : -kInf;
      return first_above(t1, t2, t_min);
    }
    case GeometryTag::Spherical: {
      // cos(t) A + sin(t) B = cos R, i.e. rho cos(t - phi) = cos R.
      const Real A = inner(tag, p, c), B = inner(tag, v, c);
      const Real rho = std::hypot(A, B), k = std::cos(radius);
      if (rho == 0 || std::fabs(k) > rho) return std::nullopt;
      const Real phi = std::atan2(B, A), delta = std::acos(k / rho);
      Real best = kInf;
      for (Real t : {phi - delta, phi + delta}) {
        t = std::fmod(t, kTwoPi);
        if (t < 0) t += kTwoPi;
        if (t <= t_min) t += kTwoPi;
        best = std::min(best, t);
      }
      return best;
    }
  }
  return std::nullopt;
}

std::optional<Real> intersect_quad(const Ray& ray, const Quad& quad, Real t_min) {
  const Vec3r u = xyz(quad.edge_u), w = xyz(quad.edge_v);
  const Vec3r n = cross(u, w);
  const Vec3r dir = xyz(ray.v);
  const Real denom = dot(n, dir);
  if (std::fabs(denom) < 1e-18L) return std::nullopt;
  const Vec3r to_corner = xyz(quad.corner - ray.p);
  const Real t = dot(n, to_corner) / denom;
  if (!(t > t_min)) return std::nullopt;
  const Vec3r d{ray.p.x + t * dir.x - quad.corner.x, ray.p.y + t * dir.y - quad.corner.y,
                ray.p.z + t * dir.z - quad.corner.z};
  const Real nn = dot(n, n);
  const Real s = dot(cross(d, w), n) / nn;
  const Real r = dot(cross(u, d), n) / nn;
  if (s < 0 || s > 1 || r < 0 || r > 1) return std::nullopt;
  return t;
}

std::optional<LocalHit> intersect_objects(const Scene& scene, const Ray& ray, Real t_max, Real t_min) {
  const GeometryTag tag = scene.tag();
  std::optional<LocalHit> best;
  auto consider = [&](std::optional<Real> t, int id, const Sphere* s) {
    if (t && *t <= t_max && (!best || *t < best->t)) best = LocalHit{*t, id, s};
  };

  for (const SceneObject& obj : scene.objects) {
    if (const auto* s = std::get_if<Sphere>(&obj.shape)) {
      consider(intersect_sphere(tag, ray, *s, t_min), obj.id, s);
    } else if (const auto* q = std::get_if<Quad>(&obj.shape)) {
      consider(intersect_quad(ray, *q, t_min), obj.id, nullptr);
    } else if (const auto* tubes = std::get_if<EdgeTubes>(&obj.shape)) {
      for (const EdgeTubes::Edge& e : tubes->edges) {
        const Real limit = best ? std::min(best->t, t_max) : t_max;
        if (!starts_inside(tag, ray, e.bound)) {
          const auto entry = intersect_sphere(tag, ray, e.bound, t_min);
          if (!entry || *entry > limit) continue;
        }
        for (const Sphere& bead : e.beads) consider(intersect_sphere(tag, ray, bead, t_min), obj.id, &bead);
      }
    }
  }
  return best;
}

std::optional<HitRecord> trace_ray(const Scene& scene, const ModelPoint& p0, const TangentVec& v0,
                                   int maxlevel) {
  const QuotientManifold& q = scene.manifold;
  const GeometryTag tag = q.tag;
  ModelPoint p = p0;
  TangentVec v = v0;
  Real t_acc = 0;

  for (int level = 0;; ++level) {
    const auto exit = find_domain_exit(q, p, v);
    const Real t_max = exit ? exit->t : kInf;

    if (const auto local = intersect_objects(scene, {p, v, tag}, t_max)) {
      const GeodesicState at = geodesic(tag, p, v, local->t);
      HitRecord hit;
      hit.object = local->object;
      hit.t = t_acc + local->t;
      hit.point = at.point;
      hit.direction = at.tangent;
      hit.transport_level = level;
      if (local->sphere) {
        hit.normal = TangentVec(-connect(tag, at.point, local->sphere->center).direction);
      } else {
        const auto& quad = std::get<Quad>(scene.objects[static_cast<size_t>(local->object)].shape);
        const Vec3r n = cross(xyz(quad.edge_u), xyz(quad.edge_v));
        TangentVec nv = unit_tangent(tag, at.point, Vec4(n.x, n.y, n.z, 0));
        if (inner(tag, nv, at.tangent) > 0) nv = TangentVec(-nv);
        hit.normal = nv;
      }
      return hit;
    }

    if (!exit || level >= maxlevel) return std::nullopt;
    if (!q.faces[static_cast<size_t>(exit->face)].pairing) return std::nullopt;
    const GeodesicState at = geodesic(tag, p, v, exit->t);
    const GeodesicState moved = transport(q, at.point, at.tangent, exit->face);
    p = moved.point;
    v = moved.tangent;
    t_acc += exit->t;
  }
}

LightConnection connect_to_light(const Scene& scene, const ModelPoint& p, const PointLight& light) {
  const GeometryTag tag = scene.tag();
  ModelPoint nearest = light.position;
  Real best = kInf;
  for (const Isometry& g : scene.manifold.neighbor_copies) {
    const ModelPoint copy = apply_isometry(g, light.position);
    const Real d = distance(tag, p, copy);
    if (d < best) {
      best = d;
      nearest = copy;
    }
  }
  const Connection c = connect(tag, p, nearest);
  return {c.direction, c.length};
}

ModelPoint offset_point(GeometryTag tag, const ModelPoint& p, const TangentVec& n) {
  return geodesic(tag, p, n, kSurfaceEps).point;
}

bool occluded(const Scene& scene, const ModelPoint& p, const TangentVec& n, const PointLight& light,
              int maxlevel) {
  const ModelPoint origin = offset_point(scene.tag(), p, n);
  const LightConnection lc = connect_to_light(scene, origin, light);
  if (lc.distance <= 0) return false;
  const auto hit = trace_ray(scene, origin, lc.direction, maxlevel);
  return hit && hit->t < lc.distance;
}

}  // namespace qtrace
