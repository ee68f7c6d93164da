#pragma once

// Random generators shared by the property tests.

#include <random>

#include "qtrace/geometry.hpp"

namespace qtrace::test {

inline Vec3 random_direction(std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  for (;;) {
    const Vec3 v{n(gen), n(gen), n(gen)};
    const Real len = norm3(v);
    if (len > 1e-6L) return {v.x / len, v.y / len, v.z / len};
  }
}

/// Points within geodesic distance ~1 of the chart origin (E, H) or anywhere on S3.
inline ModelPoint random_point(GeometryTag tag, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1, 1);
  switch (tag) {
    case GeometryTag::Euclidean:
      return euclidean_point(u(gen), u(gen), u(gen));
    case GeometryTag::Hyperbolic: {
      const Vec3 d = random_direction(gen);
      const Real r = std::uniform_real_distribution<double>(0, 1)(gen);
      return geodesic(tag, origin(), TangentVec(d.x, d.y, d.z, 0), r).point;
    }
    case GeometryTag::Spherical: {
      std::normal_distribution<double> n;
      return project_point(tag, Vec4(n(gen), n(gen), n(gen), n(gen)));
    }
  }
  return origin();
}

inline TangentVec random_unit_tangent(GeometryTag tag, const ModelPoint& p, std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  for (;;) {
    const Vec4 raw(n(gen), n(gen), n(gen), tag == GeometryTag::Euclidean ? 0 : n(gen));
    const TangentVec t = project_tangent(tag, p, raw);
    if (tangent_norm(tag, t) > 1e-3L) return unit_tangent(tag, p, t);
  }
}

}  // namespace qtrace::test
