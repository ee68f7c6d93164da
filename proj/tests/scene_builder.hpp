#pragma once

// Small programmatic scenes for unit tests.

#include <string>
#include <utility>

#include "qtrace/scene.hpp"

namespace qtrace::test {

inline Scene empty_scene(QuotientManifold q) {
  Scene s;
  s.manifold = std::move(q);
  s.camera.origin = s.manifold.interior_point;
  if (s.manifold.tag == GeometryTag::Euclidean) s.camera.origin = euclidean_point(0.5L, 0.5L, 0.5L);
  s.camera.right = TangentVec(1, 0, 0, 0);
  s.camera.up = TangentVec(0, 1, 0, 0);
  s.camera.forward = TangentVec(0, 0, -1, 0);
  return s;
}

inline Material diffuse(double kd) {
  Material m;
  m.name = "diffuse";
  m.kd = Rgb::gray(kd);
  return m;
}

inline int add_sphere(Scene& s, const ModelPoint& center, Real radius, Material m = diffuse(0.5)) {
  const int id = static_cast<int>(s.objects.size());
  s.objects.push_back({id, "sphere" + std::to_string(id), Sphere{center, radius}, std::move(m)});
  return id;
}

inline int add_quad(Scene& s, const ModelPoint& corner, const TangentVec& u, const TangentVec& v,
                    Material m = diffuse(0.5)) {
  const int id = static_cast<int>(s.objects.size());
  s.objects.push_back({id, "quad" + std::to_string(id), Quad{corner, u, v}, std::move(m)});
  return id;
}

inline void add_light(Scene& s, const ModelPoint& p, Rgb intensity) {
  s.lights.push_back({"light" + std::to_string(s.lights.size()), p, intensity});
}

}  // namespace qtrace::test
