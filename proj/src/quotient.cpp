#include "qtrace/quotient.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numbers>

namespace qtrace {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;
constexpr Real kPhi = std::numbers::phi_v<Real>;

// Opposite faces of the unit cube, ordered +x, -x, +y, -y, +z, -z.
std::vector<DomainFace> unit_cube_faces(bool glued) {
  std::vector<DomainFace> faces;
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign : {+1, -1}) {
      DomainFace f;
      f.id = static_cast<int>(faces.size());
      f.plane[axis] = sign;
      f.plane.w = sign > 0 ? -1 : 0;
      if (glued) {
        Real shift[3] = {0, 0, 0};
        shift[axis] = -sign;
        f.pairing = Isometry::translation(shift[0], shift[1], shift[2]);
        f.partner = f.id ^ 1;
      }
      faces.push_back(f);
    }
  }
  return faces;
}

// Outward unit normals of a regular dodecahedron: the icosahedron vertex
// directions, cyclic permutations of (0, +-1, +-phi).
std::array<Vec3, 12> dodecahedron_face_directions() {
  std::array<Vec3, 12> dirs;
  const Real n = std::sqrt(1 + kPhi * kPhi);
  int k = 0;
  for (int s1 : {1, -1})
    for (int s2 : {1, -1}) {
      const Real a = s1 / n, b = s2 * kPhi / n;
      dirs[k++] = {0, a, b};
      dirs[k++] = {a, b, 0};
      dirs[k++] = {b, 0, a};
    }
  return dirs;
}

Real dot3(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

// Faces of a regular dodecahedron are adjacent iff their normals meet at the
// smallest angle other than zero (cos = 1/sqrt 5).
bool adjacent_directions(const Vec3& a, const Vec3& b) {
  const Real c = dot3(a, b);
  return std::fabs(c - 1 / std::sqrt(Real(5))) < 1e-9L;
}

// Ratio inradius / circumradius of the regular dodecahedron.
Real dodecahedron_in_circ_ratio() { return std::sqrt((5 + 2 * std::sqrt(Real(5))) / 15); }

// Lorentz normal of the Klein plane {k : u.k = d}.
Vec4 lorentz_face_normal(const Vec3& u, Real d) {
  const Real s = 1 / std::sqrt(1 - d * d);
  return {u.x * s, u.y * s, u.z * s, d * s};
}

Real dihedral_for_offset(Real d) {
  const auto dirs = dodecahedron_face_directions();
  int j = 1;
  while (!adjacent_directions(dirs[0], dirs[j])) ++j;
  const Vec4 a = lorentz_face_normal(dirs[0], d);
  const Vec4 b = lorentz_face_normal(dirs[j], d);
  return std::acos(std::clamp(-inner(GeometryTag::Hyperbolic, a, b), Real(-1), Real(1)));
}

Real face_exit_time(GeometryTag tag, Real a, Real b) {
  // a = side(p), b = d/dt side(r(t)) at t = 0; only outward crossings count.
  constexpr Real none = std::numeric_limits<Real>::infinity();
  switch (tag) {
    case GeometryTag::Euclidean:
      if (b <= 0) return none;
      return std::max(Real(0), -a / b);
    case GeometryTag::Hyperbolic: {
      // a cosh t + b sinh t = 0
      if (b <= 0) return none;
      if (a >= 0) return 0;
      const Real r = -a / b;
      if (r >= 1) return none;
      return std::atanh(r);
    }
    case GeometryTag::Spherical: {
      // a cos t + b sin t = rho cos(t - phi); upward zero at t = phi - pi/2.
      if (a >= 0 && b > 0) return 0;
      if (a == 0 && b == 0) return none;
      Real t = std::atan2(b, a) - kPi / 2;
      while (t < 0) t += 2 * kPi;
      return t;
    }
  }
  return none;
}

}  // namespace

bool QuotientManifold::closed() const {
  return std::all_of(faces.begin(), faces.end(),
                     [](const DomainFace& f) { return f.pairing.has_value(); });
}

QuotientManifold flat_torus() {
  QuotientManifold q;
  q.name = "flat_torus";
  q.tag = GeometryTag::Euclidean;
  q.faces = unit_cube_faces(true);
  q.interior_point = euclidean_point(0.5, 0.5, 0.5);
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dz = -1; dz <= 1; ++dz) q.neighbor_copies.push_back(Isometry::translation(dx, dy, dz));
  // Identity first.
  std::stable_partition(q.neighbor_copies.begin(), q.neighbor_copies.end(), [](const Isometry& g) {
    return g.m == Mat4::identity();
  });
  return q;
}

QuotientManifold euclidean_box() {
  QuotientManifold q;
  q.name = "euclidean_box";
  q.tag = GeometryTag::Euclidean;
  q.faces = unit_cube_faces(false);
  q.interior_point = euclidean_point(0.5, 0.5, 0.5);
  q.neighbor_copies.push_back(Isometry::identity(GeometryTag::Euclidean));
  return q;
}

DodecahedronScale right_angled_dodecahedron_scale() {
  const Real ratio = dodecahedron_in_circ_ratio();
  const Real target = kPi / 2;
  // The dihedral angle falls monotonically from the Euclidean value at s = 0.
  Real lo = 0, hi = 1;
  DodecahedronScale out;
  for (out.iterations = 0; out.iterations < 200; ++out.iterations) {
    const Real mid = (lo + hi) / 2;
    const Real angle = dihedral_for_offset(mid * ratio);
    if (std::fabs(angle - target) < 1e-12L) {
      lo = hi = mid;
      break;
    }
    (angle > target ? lo : hi) = mid;
  }
  out.scale = (lo + hi) / 2;
  out.klein_offset = out.scale * ratio;
  out.dihedral = dihedral_for_offset(out.klein_offset);
  return out;
}

QuotientManifold mirrored_dodecahedron() {
  const DodecahedronScale scale = right_angled_dodecahedron_scale();
  const auto dirs = dodecahedron_face_directions();

  QuotientManifold q;
  q.name = "mirrored_dodecahedron";
  q.tag = GeometryTag::Hyperbolic;
  q.interior_point = origin();
  for (int i = 0; i < 12; ++i) {
    DomainFace f;
    f.id = i;
    f.plane = lorentz_face_normal(dirs[i], scale.klein_offset);
    f.pairing = Isometry::hyperbolic_reflection(f.plane);
    f.partner = i;
    q.faces.push_back(f);
  }

  q.neighbor_copies.push_back(Isometry::identity(GeometryTag::Hyperbolic));
  for (const DomainFace& f : q.faces) q.neighbor_copies.push_back(*f.pairing);
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j)
      if (adjacent_directions(dirs[i], dirs[j]))
        q.neighbor_copies.push_back(q.faces[i].pairing->then(*q.faces[j].pairing));
  return q;
}

std::optional<QuotientManifold> manifold_by_name(std::string_view name) {
  if (name == "flat_torus") return flat_torus();
  if (name == "mirrored_dodecahedron") return mirrored_dodecahedron();
  if (name == "euclidean_box") return euclidean_box();
  return std::nullopt;
}

Real dihedral_angle(const QuotientManifold& q, int face_a, int face_b) {
  const Vec4& a = q.faces.at(face_a).plane;
  const Vec4& b = q.faces.at(face_b).plane;
  if (q.tag == GeometryTag::Hyperbolic)
    return std::acos(std::clamp(-inner(q.tag, a, b), Real(-1), Real(1)));
  const Real c = a.x * b.x + a.y * b.y + a.z * b.z;
  return std::acos(std::clamp(-c, Real(-1), Real(1)));
}

std::vector<std::pair<Vec3, Vec3>> dodecahedron_edges(const QuotientManifold& q) {
  struct Vertex {
    Vec3 k;
    std::array<int, 3> faces;
  };
  const int n = static_cast<int>(q.faces.size());
  std::vector<Vec3> u(n);
  std::vector<Real> d(n);
  for (int i = 0; i < n; ++i) {
    const Vec4& pl = q.faces[i].plane;
    // Lorentz normal (u, d) s  <->  Klein plane u.k = d.
    const Real s = std::sqrt(pl.x * pl.x + pl.y * pl.y + pl.z * pl.z);
    u[i] = {pl.x / s, pl.y / s, pl.z / s};
    d[i] = pl.w / s;
  }

  std::vector<Vertex> verts;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        if (!adjacent_directions(u[a], u[b]) || !adjacent_directions(u[b], u[c]) ||
            !adjacent_directions(u[a], u[c]))
          continue;
        // Cramer's rule on the rows u_a, u_b, u_c.
        auto det = [](const Vec3& r0, const Vec3& r1, const Vec3& r2) {
          return r0.x * (r1.y * r2.z - r1.z * r2.y) - r0.y * (r1.x * r2.z - r1.z * r2.x) +
                 r0.z * (r1.x * r2.y - r1.y * r2.x);
        };
        const Real D = det(u[a], u[b], u[c]);
        const Vec3 cx{u[a].x, u[b].x, u[c].x}, cy{u[a].y, u[b].y, u[c].y},
            cz{u[a].z, u[b].z, u[c].z}, rhs{d[a], d[b], d[c]};
        // Column form: det of the matrix with one column replaced by rhs.
        auto det_cols = [&](const Vec3& c0, const Vec3& c1, const Vec3& c2) {
          return det({c0.x, c1.x, c2.x}, {c0.y, c1.y, c2.y}, {c0.z, c1.z, c2.z});
        };
        verts.push_back({{det_cols(rhs, cy, cz) / D, det_cols(cx, rhs, cz) / D,
                          det_cols(cx, cy, rhs) / D},
                         {a, b, c}});
      }

  std::vector<std::pair<Vec3, Vec3>> edges;
  for (size_t i = 0; i < verts.size(); ++i)
    for (size_t j = i + 1; j < verts.size(); ++j) {
      int shared = 0;
      for (int fa : verts[i].faces)
        for (int fb : verts[j].faces) shared += fa == fb;
      if (shared == 2) edges.emplace_back(verts[i].k, verts[j].k);
    }
  return edges;
}

Real face_side(GeometryTag tag, const DomainFace& face, const Vec4& x) {
  if (tag == GeometryTag::Hyperbolic) return inner(tag, face.plane, x);
  return face.plane.x * x.x + face.plane.y * x.y + face.plane.z * x.z + face.plane.w * x.w;
}

Real face_distance(const QuotientManifold& q, const DomainFace& face, const ModelPoint& p) {
  const Real s = face_side(q.tag, face, p);
  switch (q.tag) {
    case GeometryTag::Euclidean: return s;
    case GeometryTag::Hyperbolic: return std::asinh(s);
    case GeometryTag::Spherical: return std::asin(std::clamp(s, Real(-1), Real(1)));
  }
  return s;
}

bool contains(const QuotientManifold& q, const ModelPoint& p, Real eps) {
  return std::all_of(q.faces.begin(), q.faces.end(),
                     [&](const DomainFace& f) { return face_side(q.tag, f, p) <= eps; });
}

std::optional<DomainExit> find_domain_exit(const QuotientManifold& q, const ModelPoint& p,
                                           const TangentVec& v) {
  DomainExit best{std::numeric_limits<Real>::infinity(), -1};
  for (const DomainFace& f : q.faces) {
    const Real t = face_exit_time(q.tag, face_side(q.tag, f, p), face_side(q.tag, f, v));
    if (t < best.t) best = {t, f.id};
  }
  if (best.face < 0) return std::nullopt;
  return best;
}

DomainExit domain_exit(const QuotientManifold& q, const ModelPoint& p, const TangentVec& v) {
  auto exit = find_domain_exit(q, p, v);
  if (!exit) throw NoExitError("geodesic does not leave the fundamental domain of " + q.name);
  return *exit;
}

GeodesicState transport(const QuotientManifold& q, const ModelPoint& p_exit, const TangentVec& v,
                        int face) {
  const DomainFace& f = q.faces.at(face);
  if (!f.pairing) throw std::logic_error("face " + std::to_string(face) + " of " + q.name + " is open");
  const ModelPoint p = apply_isometry(*f.pairing, p_exit);
  TangentVec w = apply_isometry(*f.pairing, p_exit, v);
  const Real n = tangent_norm(q.tag, w);
  if (n > 0) w *= tangent_norm(q.tag, v) / n;
  return {p, w};
}

}  // namespace qtrace
