#pragma once

// Model geometries E3, H3 and S3 in a shared 4-component ambient layout.
//
//   Euclidean   points (x, y, z, 1), tangents (x, y, z, 0); inner product on xyz
//   Hyperbolic  hyperboloid <p,p>_L = -1, w > 0; Lorentzian product x x' + y y' + z z' - w w'
//   Spherical   unit sphere <p,p>_E = 1 in E4; Euclidean 4-component product
//
// Coordinates are stored as long double. On a hyperboloid point at geodesic
// distance 10 from the apex the coordinates reach ~1.1e4, and one double ulp
// of w already moves <p,p>_L by ~4e-8.

#include <array>
#include <cmath>
#include <utility>

namespace qtrace {

using Real = long double;

enum class GeometryTag { Euclidean, Hyperbolic, Spherical };

const char* to_string(GeometryTag tag);

/// Constraint tolerance for manifold membership and tangency checks.
inline constexpr Real kManifoldEps = 1e-9L;

struct Vec4 {
  Real x{}, y{}, z{}, w{};

  constexpr Vec4() = default;
  constexpr Vec4(Real x_, Real y_, Real z_, Real w_) : x(x_), y(y_), z(z_), w(w_) {}

  constexpr Real operator[](int i) const { return i == 0 ? x : i == 1 ? y : i == 2 ? z : w; }
  constexpr Real& operator[](int i) { return i == 0 ? x : i == 1 ? y : i == 2 ? z : w; }

  constexpr Vec4& operator+=(const Vec4& o) { x += o.x; y += o.y; z += o.z; w += o.w; return *this; }
  constexpr Vec4& operator-=(const Vec4& o) { x -= o.x; y -= o.y; z -= o.z; w -= o.w; return *this; }
  constexpr Vec4& operator*=(Real s) { x *= s; y *= s; z *= s; w *= s; return *this; }

  friend constexpr Vec4 operator+(Vec4 a, const Vec4& b) { return a += b; }
  friend constexpr Vec4 operator-(Vec4 a, const Vec4& b) { return a -= b; }
  friend constexpr Vec4 operator-(const Vec4& a) { return {-a.x, -a.y, -a.z, -a.w}; }
  friend constexpr Vec4 operator*(Real s, Vec4 a) { return a *= s; }
  friend constexpr Vec4 operator*(Vec4 a, Real s) { return a *= s; }
  friend constexpr Vec4 operator/(Vec4 a, Real s) { return a *= (1 / s); }
  friend constexpr bool operator==(const Vec4&, const Vec4&) = default;
};

struct Vec3 {
  Real x{}, y{}, z{};
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

inline Real norm3(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

/// A point of a model geometry.
struct ModelPoint : Vec4 {
  constexpr ModelPoint() : Vec4(0, 0, 0, 1) {}
  constexpr explicit ModelPoint(const Vec4& v) : Vec4(v) {}
  constexpr ModelPoint(Real x_, Real y_, Real z_, Real w_) : Vec4(x_, y_, z_, w_) {}
};

/// A tangent vector. The base point is carried alongside it (ray origin,
/// hit point) rather than inside the value.
struct TangentVec : Vec4 {
  constexpr TangentVec() = default;
  constexpr explicit TangentVec(const Vec4& v) : Vec4(v) {}
  constexpr TangentVec(Real x_, Real y_, Real z_, Real w_) : Vec4(x_, y_, z_, w_) {}
};

/// Euclidean point (x, y, z) in homogeneous layout.
constexpr ModelPoint euclidean_point(Real x, Real y, Real z) { return {x, y, z, 1}; }
constexpr TangentVec euclidean_vector(Real x, Real y, Real z) { return {x, y, z, 0}; }

/// The canonical base point (0,0,0,1), valid in every geometry.
constexpr ModelPoint origin() { return {0, 0, 0, 1}; }

Real inner(GeometryTag tag, const Vec4& u, const Vec4& v);

/// Metric norm sqrt(g(v,v)); meaningful for tangents (spacelike vectors).
Real tangent_norm(GeometryTag tag, const Vec4& v);

Real distance(GeometryTag tag, const ModelPoint& p, const ModelPoint& q);

/// Distance of p from the manifold constraint, |<p,p> - expected|.
Real manifold_residual(GeometryTag tag, const ModelPoint& p);
Real tangency_residual(GeometryTag tag, const ModelPoint& p, const Vec4& v);

/// Pull an ambient 4-vector back onto the manifold.
ModelPoint project_point(GeometryTag tag, const Vec4& p);
/// Remove the normal component of v at p (Gram-Schmidt in the ambient product).
TangentVec project_tangent(GeometryTag tag, const ModelPoint& p, const Vec4& v);
/// Tangent projection followed by normalization under g_p.
TangentVec unit_tangent(GeometryTag tag, const ModelPoint& p, const Vec4& v);

struct GeodesicState {
  ModelPoint point;
  TangentVec tangent;
};

/// Unit-speed geodesic through p with initial unit tangent v, evaluated at t.
/// Returns r(t) and r'(t), re-projected onto the manifold.
GeodesicState geodesic(GeometryTag tag, const ModelPoint& p, const TangentVec& v, Real t);

/// Perfect reflection w_r = -w_i + 2 g(w_i, N) N.
TangentVec reflect_tangent(GeometryTag tag, const TangentVec& w_i, const TangentVec& n);

/// Initial unit tangent at p of the geodesic running towards q, plus its
/// length. Degenerate (q == p) gives a zero tangent and length 0.
struct Connection {
  TangentVec direction;
  Real length = 0;
};
Connection connect(GeometryTag tag, const ModelPoint& p, const ModelPoint& q);

/// Two unit tangents completing n to a g-orthonormal frame of T_p.
std::pair<TangentVec, TangentVec> tangent_frame(GeometryTag tag, const ModelPoint& p,
                                                const TangentVec& n);

/// Klein projection p -> p_xyz / p_w of a hyperboloid point into the unit ball.
Vec3 to_klein(const ModelPoint& p);
/// Inverse of to_klein: (k, 1) / sqrt(1 - |k|^2). Requires |k| < 1.
ModelPoint from_klein(const Vec3& k);

struct Mat4 {
  std::array<std::array<Real, 4>, 4> a{};

  static constexpr Mat4 identity() {
    Mat4 m;
    for (int i = 0; i < 4; ++i) m.a[i][i] = 1;
    return m;
  }
  Vec4 operator*(const Vec4& v) const;
  Mat4 operator*(const Mat4& o) const;
  friend bool operator==(const Mat4&, const Mat4&) = default;
};

/// Linear (Euclidean: homogeneous affine) action of an isometry of a model geometry.
struct Isometry {
  Mat4 m = Mat4::identity();
  GeometryTag tag = GeometryTag::Euclidean;

  static Isometry identity(GeometryTag tag) { return {Mat4::identity(), tag}; }
  static Isometry translation(Real dx, Real dy, Real dz);
  /// Hyperbolic reflection x -> x - 2 <x,n>_L / <n,n>_L n across the plane n^perp.
  static Isometry hyperbolic_reflection(const Vec4& spacelike_normal);
  /// Lorentz boost carrying the apex (0,0,0,1) to p, with no rotation.
  static Isometry hyperbolic_translation_to(const ModelPoint& p);

  Isometry then(const Isometry& next) const { return {next.m * m, tag}; }
};

ModelPoint apply_isometry(const Isometry& iso, const ModelPoint& p);
TangentVec apply_isometry(const Isometry& iso, const ModelPoint& p, const TangentVec& v);

}  // namespace qtrace
