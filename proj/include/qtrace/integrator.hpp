#pragma once

// Riemannian illumination: Phong-style direct lighting evaluated with the
// metric g_p, and one-sample-per-bounce Monte Carlo for the indirect term.

#include <cstdint>

#include "qtrace/color.hpp"
#include "qtrace/scene.hpp"
#include "qtrace/tracer.hpp"

namespace qtrace {

struct RenderSettings {
  int spp = 16;
  int depth = 5;                     // bounces
  int maxlevel = kDefaultMaxLevel;   // domain crossings per ray
  std::uint64_t seed = 0;
  bool indirect_enabled = true;
};

/// SplitMix64 stream (period 2^64). State is a single 64-bit counter that
/// advances by the golden-ratio increment; outputs are the mixed counter.
class Rng {
 public:
  explicit Rng(std::uint64_t state) : state_(state) {}

  /// Independent stream for one (seed, pixel, sample, bounce) key.
  static Rng stream(std::uint64_t seed, std::uint64_t pixel, std::uint64_t sample, std::uint64_t bounce);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t state_;
};

/// Key from which every random stream of one camera path is derived.
/// Bounce 0 drives the pixel jitter; bounce k >= 1 the k-th hemisphere sample.
struct PathKey {
  std::uint64_t seed = 0;
  std::uint64_t pixel = 0;
  std::uint64_t sample = 0;

  Rng at_bounce(std::uint64_t bounce) const { return Rng::stream(seed, pixel, sample, bounce); }
};

struct HemisphereSample {
  TangentVec w;
  double pdf = 0;  // solid-angle density d_w(w)
};

/// Cosine-weighted direction about n in T_p: d_w(w) = g_p(w, n) / pi.
HemisphereSample sample_hemisphere(GeometryTag tag, const ModelPoint& p, const TangentVec& n, Rng& rng);

/// f_r(v, w) = kd/pi + ks (ke+2)/(2 pi) max(0, g(reflect(w, n), v))^ke.
Rgb brdf(const Material& m, GeometryTag tag, const TangentVec& n, const TangentVec& v, const TangentVec& w);

/// Local illumination at a hit seen from direction `view` (unit, towards the
/// viewer). Each light contributes through its nearest copy and is dropped
/// when occluded. Ambient k_a L_a only when include_ambient.
Rgb direct_illumination(const Scene& scene, const HitRecord& hit, const TangentVec& view, int maxlevel,
                        bool include_ambient);

/// Radiance arriving back along the ray (p, v) with up to d further bounces:
/// emission + direct light at the first hit, plus one hemisphere sample
/// recursing with d - 1. Zero for d < 0 or a miss. `vertex` numbers the path
/// vertex of the hit (selects the RNG stream).
Rgb indirect_illumination(const Scene& scene, const ModelPoint& p, const TangentVec& v, int d, int maxlevel,
                          const PathKey& key, int vertex = 0);

/// Full estimate for a camera ray: L_e + L_dir (+ L_ind when enabled, or the
/// ambient approximation when not). Misses are black.
Rgb radiance(const Scene& scene, const ModelPoint& p, const TangentVec& v, const RenderSettings& settings,
             const PathKey& key);

}  // namespace qtrace
