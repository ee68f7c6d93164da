#pragma once

// Fundamental domains of quotient manifolds M / Gamma and the transport of
// geodesics across their faces.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qtrace/geometry.hpp"

namespace qtrace {

/// One boundary face of a fundamental domain, stored as a half-space.
///
/// The face function is side(x) = <plane, x>, using the 4-component Euclidean
/// dot for Euclidean/Spherical domains (so a Euclidean plane n.x = c is stored
/// as (n, -c) against homogeneous points) and the Lorentzian product for
/// hyperbolic domains (plane is a unit spacelike normal). Points with
/// side(x) <= 0 are inside; the normal points outward.
struct DomainFace {
  int id = 0;
  Vec4 plane;
  /// Gamma generator carrying the exterior of this face back into the domain.
  /// Empty for open boundaries (rays leaving through it terminate).
  std::optional<Isometry> pairing;
  /// Face onto which the pairing maps this one.
  int partner = -1;
};

struct QuotientManifold {
  std::string name;
  GeometryTag tag = GeometryTag::Euclidean;
  std::vector<DomainFace> faces;
  ModelPoint interior_point;
  /// Group elements near the identity. Used to pick the nearest copy of a
  /// point (light connections); always starts with the identity.
  std::vector<Isometry> neighbor_copies;

  /// True when every face has a pairing, i.e. the quotient has no boundary.
  bool closed() const;
};

class NoExitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The 3-torus: unit cube [0,1]^3 with opposite faces glued by unit translations.
/// Face ids: 0 x=1, 1 x=0, 2 y=1, 3 y=0, 4 z=1, 5 z=0.
QuotientManifold flat_torus();

/// The unit cube [0,1]^3 in E3 with open faces (no identification).
QuotientManifold euclidean_box();

/// Right-angled regular dodecahedron in H3, centered at the apex, with every
/// face a mirror (pairing = hyperbolic reflection across the face).
QuotientManifold mirrored_dodecahedron();

/// Looks up "flat_torus", "mirrored_dodecahedron" or "euclidean_box".
std::optional<QuotientManifold> manifold_by_name(std::string_view name);

struct DodecahedronScale {
  Real scale = 0;          // Klein-ball scale of the unit-circumradius dodecahedron
  Real klein_offset = 0;   // Klein distance from center to each face plane
  Real dihedral = 0;       // resulting interior dihedral angle, radians
  int iterations = 0;
};

/// Bisection on the Klein scale s until the dihedral angle is pi/2.
DodecahedronScale right_angled_dodecahedron_scale();

/// Interior dihedral angle between two faces of a domain.
Real dihedral_angle(const QuotientManifold& q, int face_a, int face_b);

/// Edges of the mirrored dodecahedron as Klein-ball endpoint pairs, derived
/// from the face planes (vertices are triple intersections of adjacent faces).
std::vector<std::pair<Vec3, Vec3>> dodecahedron_edges(const QuotientManifold& q);

/// side(x) of a face; see DomainFace.
Real face_side(GeometryTag tag, const DomainFace& face, const Vec4& x);

/// Signed geodesic distance from p to the face plane (negative inside).
Real face_distance(const QuotientManifold& q, const DomainFace& face, const ModelPoint& p);

/// Boundary counts as inside (tolerance eps on the face function).
bool contains(const QuotientManifold& q, const ModelPoint& p, Real eps = kManifoldEps);

struct DomainExit {
  Real t = 0;
  int face = -1;
};

/// Smallest t >= 0 at which the geodesic (p, v) crosses a face outward. Ties
/// go to the lowest face id. Faces the ray moves away from are never hit,
/// so a ray starting on a face and pointing inward ignores that face.
std::optional<DomainExit> find_domain_exit(const QuotientManifold& q, const ModelPoint& p,
                                           const TangentVec& v);

/// As find_domain_exit, but throws NoExitError when nothing is hit.
DomainExit domain_exit(const QuotientManifold& q, const ModelPoint& p, const TangentVec& v);

/// Applies the face pairing to an exit point and its tangent.
/// Throws std::logic_error for open faces.
GeodesicState transport(const QuotientManifold& q, const ModelPoint& p_exit,
                        const TangentVec& v, int face);

}  // namespace qtrace
