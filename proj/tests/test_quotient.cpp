#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

#include "doctest.h"
#include "qtrace/quotient.hpp"
#include "random_points.hpp"

using namespace qtrace;

namespace {

constexpr GeometryTag E = GeometryTag::Euclidean;
constexpr GeometryTag H = GeometryTag::Hyperbolic;

bool near(const Vec4& a, const Vec4& b, Real tol) {
  for (int i = 0; i < 4; ++i)
    if (std::fabs(a[i] - b[i]) > tol) return false;
  return true;
}

bool is_identity(const Mat4& m, Real tol) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (std::fabs(m.a[i][j] - (i == j ? 1 : 0)) > tol) return false;
  return true;
}

// Adjacent dodecahedron faces have outward normals at 63.4 degrees
// (dot 1/sqrt 5); opposite and non-adjacent pairs have dot <= -1/sqrt 5.
bool adjacent(const DomainFace& a, const DomainFace& b) {
  const Real dot = a.plane.x * b.plane.x + a.plane.y * b.plane.y + a.plane.z * b.plane.z;
  return dot > 0;
}

}  // namespace

TEST_CASE("flat torus") {
  const QuotientManifold t = flat_torus();
  CHECK(t.tag == E);
  REQUIRE(t.faces.size() == 6);
  CHECK(t.closed());

  SUBCASE("x = 1 pairing") {
    const Isometry& g = *t.faces[0].pairing;
    CHECK(near(apply_isometry(g, euclidean_point(1, 0.3L, 0.7L)), euclidean_point(0, 0.3L, 0.7L), 1e-18L));
    const TangentVec v = euclidean_vector(0.48L, 0.6L, 0.64L);
    CHECK(near(apply_isometry(g, euclidean_point(1, 0.3L, 0.7L), v), v, 0));
  }
  SUBCASE("opposite pairings cancel") {
    for (const DomainFace& f : t.faces) {
      const DomainFace& other = t.faces[static_cast<std::size_t>(f.partner)];
      CHECK(other.partner == f.id);
      CHECK(is_identity(f.pairing->then(*other.pairing).m, 0));
    }
  }
  SUBCASE("neighbor copies") {
    CHECK(t.neighbor_copies.size() == 27);
    CHECK(is_identity(t.neighbor_copies.front().m, 0));
  }
}

TEST_CASE("manifold lookup") {
  CHECK(manifold_by_name("flat_torus")->faces.size() == 6);
  CHECK(manifold_by_name("mirrored_dodecahedron")->faces.size() == 12);
  CHECK_FALSE(manifold_by_name("euclidean_box")->closed());
  CHECK_FALSE(manifold_by_name("klein_bottle").has_value());
}

TEST_CASE("domain exit in the torus") {
  const QuotientManifold t = flat_torus();
  const ModelPoint c = euclidean_point(0.5L, 0.5L, 0.5L);

  SUBCASE("axis aligned") {
    const DomainExit e = domain_exit(t, c, euclidean_vector(1, 0, 0));
    CHECK(std::fabs(e.t - 0.5L) < 1e-18L);
    CHECK(e.face == 0);
    CHECK(domain_exit(t, c, euclidean_vector(0, 0, -1)).face == 5);
  }
  SUBCASE("edge hit resolves to the lower face id") {
    const Real h = std::sqrt(0.5L);
    const DomainExit e = domain_exit(t, c, euclidean_vector(h, h, 0));
    CHECK(std::fabs(e.t - h) < 1e-15L);
    CHECK(e.face == 0);
  }
  SUBCASE("a ray leaving a face inward ignores it") {
    const DomainExit e = domain_exit(t, euclidean_point(0, 0.5L, 0.5L), euclidean_vector(1, 0, 0));
    CHECK(e.face == 0);
    CHECK(std::fabs(e.t - 1) < 1e-18L);
  }
  SUBCASE("zero direction has no exit") {
    CHECK_FALSE(find_domain_exit(t, c, euclidean_vector(0, 0, 0)).has_value());
    CHECK_THROWS_AS(domain_exit(t, c, euclidean_vector(0, 0, 0)), NoExitError);
  }
}

TEST_CASE("transport") {
  const QuotientManifold t = flat_torus();
  const TangentVec v = euclidean_vector(0.6L, 0, 0.8L);
  const GeodesicState s = transport(t, euclidean_point(1, 0.3L, 0.7L), v, 0);
  CHECK(near(s.point, euclidean_point(0, 0.3L, 0.7L), 1e-18L));
  CHECK(near(s.tangent, v, 0));

  const QuotientManifold box = euclidean_box();
  CHECK_THROWS_AS(transport(box, euclidean_point(1, 0.3L, 0.7L), v, 0), std::logic_error);
}

TEST_CASE("axis rays close up in the torus") {
  const QuotientManifold t = flat_torus();
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int n = 0; n < 100; ++n) {
    const ModelPoint p0 = euclidean_point(u(gen), u(gen), u(gen));
    for (int axis = 0; axis < 3; ++axis) {
      TangentVec v;
      v[axis] = 1;
      const DomainExit e = domain_exit(t, p0, v);
      const GeodesicState s = transport(t, geodesic(E, p0, v, e.t).point, v, e.face);
      // Back at the start after one full lap of length 1.
      const Real rest = 1 - e.t;
      REQUIRE(near(geodesic(E, s.point, s.tangent, rest).point, p0, 1e-9L));
      REQUIRE(domain_exit(t, s.point, s.tangent).t > rest);
    }
  }
}

TEST_CASE("right-angled dodecahedron") {
  const QuotientManifold q = mirrored_dodecahedron();
  CHECK(q.tag == H);
  REQUIRE(q.faces.size() == 12);
  CHECK(q.closed());

  SUBCASE("scale") {
    const DodecahedronScale s = right_angled_dodecahedron_scale();
    // Adjacent unit face normals meet at dot 1/sqrt 5; the Lorentz normals
    // (u, d) are orthogonal exactly when d^2 = 1/sqrt 5.
    CHECK(std::fabs(s.klein_offset - std::pow(5.0L, -0.25L)) < 1e-9L);
    CHECK(std::fabs(s.dihedral - std::numbers::pi_v<Real> / 2) < 1e-6L);
    CHECK(s.iterations > 0);
  }
  SUBCASE("every adjacent pair meets at a right angle") {
    int pairs = 0;
    for (const DomainFace& a : q.faces)
      for (const DomainFace& b : q.faces) {
        if (a.id >= b.id || !adjacent(a, b)) continue;
        ++pairs;
        CHECK(std::fabs(dihedral_angle(q, a.id, b.id) - std::numbers::pi_v<Real> / 2) < 1e-6L);
      }
    CHECK(pairs == 30);
  }
  SUBCASE("pairings are involutive reflections") {
    std::mt19937_64 gen(29);
    for (const DomainFace& f : q.faces) {
      CHECK(f.partner == f.id);
      CHECK(is_identity(f.pairing->then(*f.pairing).m, 1e-9L));
      for (int n = 0; n < 20; ++n) {
        const ModelPoint p = test::random_point(H, gen), r = test::random_point(H, gen);
        const Real d = distance(H, p, r);
        REQUIRE(std::fabs(distance(H, apply_isometry(*f.pairing, p), apply_isometry(*f.pairing, r)) - d) < 1e-9L);
      }
    }
  }
  SUBCASE("edges") {
    const auto edges = dodecahedron_edges(q);
    CHECK(edges.size() == 30);
    std::set<std::tuple<long, long, long>> vertices;
    for (const auto& [a, b] : edges)
      for (const Vec3& v : {a, b})
        vertices.insert({std::lround(v.x * 1e6L), std::lround(v.y * 1e6L), std::lround(v.z * 1e6L)});
    CHECK(vertices.size() == 20);
  }
}

TEST_CASE("domain exit in the dodecahedron lands on the face plane") {
  const QuotientManifold q = mirrored_dodecahedron();
  std::mt19937_64 gen(31);
  for (int n = 0; n < 500; ++n) {
    const Vec3 d = test::random_direction(gen);
    const TangentVec v(d.x, d.y, d.z, 0);
    const DomainExit e = domain_exit(q, q.interior_point, v);
    REQUIRE(e.t > 0);
    const ModelPoint x = geodesic(H, q.interior_point, v, e.t).point;
    REQUIRE(std::fabs(face_side(H, q.faces[static_cast<std::size_t>(e.face)], x)) < 1e-9L);
    REQUIRE(contains(q, x));

    // After reflection the ray starts on the same face heading back inside.
    const GeodesicState s = transport(q, x, geodesic(H, q.interior_point, v, e.t).tangent, e.face);
    REQUIRE(manifold_residual(H, s.point) < 1e-9L);
    const DomainExit next = domain_exit(q, s.point, s.tangent);
    REQUIRE(next.t > 1e-6L);
  }
}

TEST_CASE("contains") {
  const QuotientManifold t = flat_torus();
  CHECK(contains(t, euclidean_point(0.5L, 0.5L, 0.5L)));
  CHECK_FALSE(contains(t, euclidean_point(1.5L, 0.5L, 0.5L)));
  CHECK(contains(t, euclidean_point(1, 0.5L, 0.5L)));

  const QuotientManifold q = mirrored_dodecahedron();
  CHECK(contains(q, q.interior_point));
  CHECK_FALSE(contains(q, from_klein({0.9L, 0, 0})));
  CHECK(face_distance(q, q.faces[0], q.interior_point) < 0);
}
