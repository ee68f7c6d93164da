#include "qtrace/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qtrace {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

const Material& material_of(const Scene& scene, const HitRecord& hit) {
  return scene.objects[static_cast<std::size_t>(hit.object)].material;
}

}  // namespace

Rng Rng::stream(std::uint64_t seed, std::uint64_t pixel, std::uint64_t sample, std::uint64_t bounce) {
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ pixel);
  h = mix64(h ^ (sample * 0xd1b54a32d192ed03ULL));
  h = mix64(h ^ (bounce * 0xaef17502108ef2d9ULL));
  return Rng(h);
}

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

HemisphereSample sample_hemisphere(GeometryTag tag, const ModelPoint& p, const TangentVec& n, Rng& rng) {
  const double u1 = rng.uniform(), u2 = rng.uniform();
  const double phi = 2 * kPi * u1;
  const double cos_theta = std::sqrt(1 - u2);
  const double sin_theta = std::sqrt(u2);
  const auto [t, b] = tangent_frame(tag, p, n);
  const Vec4 w = (sin_theta * std::cos(phi)) * Vec4(t) + (sin_theta * std::sin(phi)) * Vec4(b) +
                 Real(cos_theta) * Vec4(n);
  return {unit_tangent(tag, p, w), cos_theta / kPi};
}

Rgb brdf(const Material& m, GeometryTag tag, const TangentVec& n, const TangentVec& v, const TangentVec& w) {
  Rgb f = m.kd * (1 / kPi);
  if (!m.ks.is_black()) {
    const double c = std::clamp(static_cast<double>(inner(tag, reflect_tangent(tag, w, n), v)), 0.0, 1.0);
    f += m.ks * ((m.ke + 2) / (2 * kPi) * std::pow(c, m.ke));
  }
  return f;
}

Rgb direct_illumination(const Scene& scene, const HitRecord& hit, const TangentVec& view, int maxlevel,
                        bool include_ambient) {
  const GeometryTag tag = scene.tag();
  const Material& m = material_of(scene, hit);
  Rgb out = include_ambient ? m.ka * scene.ambient : Rgb{};
  if (m.kd.is_black() && m.ks.is_black()) return out;

  for (const PointLight& light : scene.lights) {
    if (light.intensity.is_black()) continue;
    const LightConnection lc = connect_to_light(scene, hit.point, light);
    const double cos_i = std::clamp(static_cast<double>(inner(tag, lc.direction, hit.normal)), 0.0, 1.0);
    // A light below the surface contributes nothing.
    if (cos_i <= 0) continue;
    const TangentVec w_r = reflect_tangent(tag, lc.direction, hit.normal);
    const double spec = std::clamp(static_cast<double>(inner(tag, w_r, view)), 0.0, 1.0);
    const Rgb response = m.kd * cos_i + m.ks * std::pow(spec, m.ke);
    if (response.is_black()) continue;
    if (occluded(scene, hit.point, hit.normal, light, maxlevel)) continue;
    out += light.intensity * response;
  }
  return out;
}

Rgb indirect_illumination(const Scene& scene, const ModelPoint& p, const TangentVec& v, int d, int maxlevel,
                          const PathKey& key, int vertex) {
  if (d < 0) return {};
  const auto hit = trace_ray(scene, p, v, maxlevel);
  if (!hit) return {};

  const GeometryTag tag = scene.tag();
  const Material& m = material_of(scene, *hit);
  const TangentVec view(-hit->direction);
  Rgb c = m.emission + direct_illumination(scene, *hit, view, maxlevel, false);
  // At d == 0 the recursion below would return zero.
  if (d == 0 || (m.kd.is_black() && m.ks.is_black())) return c;

  Rng rng = key.at_bounce(static_cast<std::uint64_t>(vertex) + 1);
  const HemisphereSample s = sample_hemisphere(tag, hit->point, hit->normal, rng);
  const Rgb f = brdf(m, tag, hit->normal, view, s.w);
  if (f.is_black() || !(s.pdf > 0)) return c;
  const double cos_w = static_cast<double>(inner(tag, s.w, hit->normal));
  const ModelPoint origin = offset_point(tag, hit->point, hit->normal);
  const TangentVec w = unit_tangent(tag, origin, s.w);
  const Rgb incoming = indirect_illumination(scene, origin, w, d - 1, maxlevel, key, vertex + 1);
  c += f * incoming * (cos_w / s.pdf);
  return c;
}

Rgb radiance(const Scene& scene, const ModelPoint& p, const TangentVec& v, const RenderSettings& settings,
             const PathKey& key) {
  if (settings.indirect_enabled) return indirect_illumination(scene, p, v, settings.depth, settings.maxlevel, key);
  const auto hit = trace_ray(scene, p, v, settings.maxlevel);
  if (!hit) return {};
  const Material& m = material_of(scene, *hit);
  return m.emission + direct_illumination(scene, *hit, TangentVec(-hit->direction), settings.maxlevel, true);
}

}  // namespace qtrace
