#include "qtrace/geometry.hpp"

#include <algorithm>

namespace qtrace {

const char* to_string(GeometryTag tag) {
  switch (tag) {
    case GeometryTag::Euclidean: return "euclidean";
    case GeometryTag::Hyperbolic: return "hyperbolic";
    case GeometryTag::Spherical: return "spherical";
  }
  return "unknown";
}

Real inner(GeometryTag tag, const Vec4& u, const Vec4& v) {
  const Real xyz = u.x * v.x + u.y * v.y + u.z * v.z;
  switch (tag) {
    case GeometryTag::Euclidean: return xyz;
    case GeometryTag::Hyperbolic: return xyz - u.w * v.w;
    case GeometryTag::Spherical: return xyz + u.w * v.w;
  }
  return xyz;
}

Real tangent_norm(GeometryTag tag, const Vec4& v) {
  return std::sqrt(std::max(inner(tag, v, v), Real(0)));
}

Real distance(GeometryTag tag, const ModelPoint& p, const ModelPoint& q) {
  switch (tag) {
    case GeometryTag::Euclidean: {
      const Vec4 d = p - q;
      return std::sqrt(inner(tag, d, d));
    }
    case GeometryTag::Hyperbolic:
      return std::acosh(std::max(-inner(tag, p, q), Real(1)));
    case GeometryTag::Spherical:
      return std::acos(std::clamp(inner(tag, p, q), Real(-1), Real(1)));
  }
  return 0;
}

Real manifold_residual(GeometryTag tag, const ModelPoint& p) {
  switch (tag) {
    case GeometryTag::Euclidean: return std::fabs(p.w - 1);
    case GeometryTag::Hyperbolic: return std::fabs(inner(tag, p, p) + 1);
    case GeometryTag::Spherical: return std::fabs(inner(tag, p, p) - 1);
  }
  return 0;
}

Real tangency_residual(GeometryTag tag, const ModelPoint& p, const Vec4& v) {
  if (tag == GeometryTag::Euclidean) return std::fabs(v.w);
  return std::fabs(inner(tag, p, v));
}

ModelPoint project_point(GeometryTag tag, const Vec4& p) {
  switch (tag) {
    case GeometryTag::Euclidean: return ModelPoint(p.x, p.y, p.z, 1);
    case GeometryTag::Hyperbolic: {
      const Real q = -inner(tag, p, p);
      if (!(q > 0)) return ModelPoint(p);
      const Real s = (p.w < 0 ? -1 : 1) / std::sqrt(q);
      return ModelPoint(p * s);
    }
    case GeometryTag::Spherical: {
      const Real n = std::sqrt(inner(tag, p, p));
      if (!(n > 0)) return ModelPoint(p);
      return ModelPoint(p / n);
    }
  }
  return ModelPoint(p);
}

TangentVec project_tangent(GeometryTag tag, const ModelPoint& p, const Vec4& v) {
  if (tag == GeometryTag::Euclidean) return TangentVec(v.x, v.y, v.z, 0);
  const Real pp = inner(tag, p, p);
  return TangentVec(v - (inner(tag, v, p) / pp) * p);
}

TangentVec unit_tangent(GeometryTag tag, const ModelPoint& p, const Vec4& v) {
  TangentVec t = project_tangent(tag, p, v);
  const Real n = tangent_norm(tag, t);
  if (n > 0) t *= 1 / n;
  return t;
}

GeodesicState geodesic(GeometryTag tag, const ModelPoint& p, const TangentVec& v, Real t) {
  Vec4 point;
  Vec4 tangent;
  switch (tag) {
    case GeometryTag::Euclidean:
      point = p + t * v;
      tangent = v;
      break;
    case GeometryTag::Hyperbolic: {
      const Real c = std::cosh(t), s = std::sinh(t);
      point = c * p + s * v;
      tangent = s * p + c * v;
      break;
    }
    case GeometryTag::Spherical: {
      const Real c = std::cos(t), s = std::sin(t);
      point = c * p + s * v;
      tangent = c * v - s * p;
      break;
    }
  }
  const ModelPoint q = project_point(tag, point);
  return {q, unit_tangent(tag, q, tangent)};
}

TangentVec reflect_tangent(GeometryTag tag, const TangentVec& w_i, const TangentVec& n) {
  return TangentVec(2 * inner(tag, w_i, n) * n - w_i);
}

Connection connect(GeometryTag tag, const ModelPoint& p, const ModelPoint& q) {
  Vec4 dir;
  switch (tag) {
    case GeometryTag::Euclidean: dir = q - p; break;
    // Projection of q onto T_p; for both curved models this is q - (<p,q>/<p,p>) p.
    case GeometryTag::Hyperbolic:
    case GeometryTag::Spherical: dir = project_tangent(tag, p, q); break;
  }
  Connection c;
  c.length = distance(tag, p, q);
  const Real n = tangent_norm(tag, dir);
  if (n > 0 && c.length > 0) c.direction = project_tangent(tag, p, dir / n);
  return c;
}

std::pair<TangentVec, TangentVec> tangent_frame(GeometryTag tag, const ModelPoint& p,
                                                const TangentVec& n) {
  // Gram-Schmidt of the ambient axis that survives projection best.
  auto orthogonalize = [&](const Vec4& e, const TangentVec* other) {
    TangentVec u = project_tangent(tag, p, e);
    u = TangentVec(u - inner(tag, u, n) * n);
    if (other) u = TangentVec(u - inner(tag, u, *other) * *other);
    return u;
  };
  const Vec4 axes[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};

  TangentVec best;
  Real best_norm = -1;
  int best_axis = 0;
  for (int i = 0; i < 4; ++i) {
    const TangentVec u = orthogonalize(axes[i], nullptr);
    const Real un = tangent_norm(tag, u);
    if (un > best_norm) { best = u; best_norm = un; best_axis = i; }
  }
  const TangentVec t(best / best_norm);

  TangentVec second;
  Real second_norm = -1;
  for (int i = 0; i < 4; ++i) {
    if (i == best_axis) continue;
    const TangentVec u = orthogonalize(axes[i], &t);
    const Real un = tangent_norm(tag, u);
    if (un > second_norm) { second = u; second_norm = un; }
  }
  return {t, TangentVec(second / second_norm)};
}

Vec3 to_klein(const ModelPoint& p) { return {p.x / p.w, p.y / p.w, p.z / p.w}; }

ModelPoint from_klein(const Vec3& k) {
  const Real s = 1 / std::sqrt(1 - (k.x * k.x + k.y * k.y + k.z * k.z));
  return ModelPoint(k.x * s, k.y * s, k.z * s, s);
}

Vec4 Mat4::operator*(const Vec4& v) const {
  Vec4 r;
  for (int i = 0; i < 4; ++i) r[i] = a[i][0] * v.x + a[i][1] * v.y + a[i][2] * v.z + a[i][3] * v.w;
  return r;
}

Mat4 Mat4::operator*(const Mat4& o) const {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Real s = 0;
      for (int k = 0; k < 4; ++k) s += a[i][k] * o.a[k][j];
      r.a[i][j] = s;
    }
  return r;
}

Isometry Isometry::translation(Real dx, Real dy, Real dz) {
  Isometry iso = identity(GeometryTag::Euclidean);
  iso.m.a[0][3] = dx;
  iso.m.a[1][3] = dy;
  iso.m.a[2][3] = dz;
  return iso;
}

Isometry Isometry::hyperbolic_reflection(const Vec4& n) {
  constexpr GeometryTag H = GeometryTag::Hyperbolic;
  const Real nn = inner(H, n, n);
  // Column j of the matrix is the image of the j-th basis vector.
  const Vec4 jn(n.x, n.y, n.z, -n.w);  // J n, so that <x,n>_L = x . (J n)
  Isometry iso = identity(H);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) iso.m.a[i][j] -= 2 * n[i] * jn[j] / nn;
  return iso;
}

Isometry Isometry::hyperbolic_translation_to(const ModelPoint& p) {
  Isometry iso = identity(GeometryTag::Hyperbolic);
  const Real x[3] = {p.x, p.y, p.z};
  const Real w = p.w;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) iso.m.a[i][j] += x[i] * x[j] / (1 + w);
    iso.m.a[i][3] = x[i];
    iso.m.a[3][i] = x[i];
  }
  iso.m.a[3][3] = w;
  return iso;
}

ModelPoint apply_isometry(const Isometry& iso, const ModelPoint& p) {
  return project_point(iso.tag, iso.m * p);
}

TangentVec apply_isometry(const Isometry& iso, const ModelPoint& p, const TangentVec& v) {
  const ModelPoint q = apply_isometry(iso, p);
  return project_tangent(iso.tag, q, iso.m * v);
}

}  // namespace qtrace
