#include "qtrace/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace qtrace {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Real kFrameTol = 1e-9L;
constexpr Real kLiftTol = 1e-12L;

std::string join_violations(const std::vector<Violation>& vs) {
  std::ostringstream out;
  out << "invalid scene:";
  for (const Violation& v : vs) out << "\n  " << v.entity << ": " << v.rule;
  return out.str();
}

int line_of_offset(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

// Isometry carrying the chart origin (0,0,0,1) to p.
Isometry chart_translation(GeometryTag tag, const ModelPoint& p) {
  if (tag == GeometryTag::Hyperbolic) return Isometry::hyperbolic_translation_to(p);
  return Isometry::translation(p.x, p.y, p.z);
}

Isometry chart_translation_inverse(GeometryTag tag, const ModelPoint& p) {
  if (tag == GeometryTag::Hyperbolic)
    return Isometry::hyperbolic_translation_to(ModelPoint(-p.x, -p.y, -p.z, p.w));
  return Isometry::translation(-p.x, -p.y, -p.z);
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

Vec3 normalized(const Vec3& v) {
  const Real n = norm3(v);
  return {v.x / n, v.y / n, v.z / n};
}

// Reads typed values out of a json tree, reporting errors by JSON path.
class Reader {
 public:
  static void expect_object(const json& j, const std::string& path,
                            std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw ParseError(path + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
        throw ParseError(path + ": unknown key '" + it.key() + "'");
    }
  }

  static const json& member(const json& j, const std::string& path, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(path + ": missing key '" + key + "'");
    return *it;
  }

  static double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(path + ": expected a finite number");
    return v;
  }

  static int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
    return j.get<int>();
  }

  static std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ParseError(path + ": expected a string");
    return j.get<std::string>();
  }

  static Vec3 vec3(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) throw ParseError(path + ": expected [x, y, z]");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]"), number(j[2], path + "[2]")};
  }

  // [r, g, b] or a single gray value.
  static Rgb rgb(const json& j, const std::string& path) {
    if (j.is_number()) return Rgb::gray(number(j, path));
    if (!j.is_array() || j.size() != 3) throw ParseError(path + ": expected [r, g, b] or a number");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]"), number(j[2], path + "[2]")};
  }
};

json to_json(const Vec3& v) {
  return json::array({static_cast<double>(v.x), static_cast<double>(v.y), static_cast<double>(v.z)});
}
json to_json(const Rgb& c) { return json::array({c.r, c.g, c.b}); }

Vec3 tangent_to_chart_frame(GeometryTag tag, const ModelPoint& origin, const TangentVec& v) {
  const TangentVec at_apex = apply_isometry(chart_translation_inverse(tag, origin), origin, v);
  return {at_apex.x, at_apex.y, at_apex.z};
}

TangentVec tangent_from_chart_frame(GeometryTag tag, const ModelPoint& origin, const Vec3& v) {
  return apply_isometry(chart_translation(tag, origin), qtrace::origin(), TangentVec(v.x, v.y, v.z, 0));
}

Material parse_material(const json& j, const std::string& path, const std::string& owner) {
  Reader::expect_object(j, path, {"name", "ka", "kd", "ks", "ke", "emission"});
  Material m;
  m.name = j.contains("name") ? Reader::string(j["name"], path + ".name") : owner + ".material";
  m.ka = j.contains("ka") ? Reader::rgb(j["ka"], path + ".ka") : Rgb{};
  m.kd = j.contains("kd") ? Reader::rgb(j["kd"], path + ".kd") : Rgb{};
  m.ks = j.contains("ks") ? Reader::rgb(j["ks"], path + ".ks") : Rgb{};
  m.ke = j.contains("ke") ? Reader::number(j["ke"], path + ".ke") : 1.0;
  m.emission = j.contains("emission") ? Reader::rgb(j["emission"], path + ".emission") : Rgb{};
  return m;
}

json material_to_json(const Material& m) {
  return {{"name", m.name}, {"ka", to_json(m.ka)}, {"kd", to_json(m.kd)},
          {"ks", to_json(m.ks)}, {"ke", m.ke},       {"emission", to_json(m.emission)}};
}

// Chart point, raising a validation error when it cannot be lifted.
ModelPoint lift(GeometryTag tag, const Vec3& c, const std::string& entity) {
  if (tag == GeometryTag::Hyperbolic && !(norm3(c) < 1))
    throw ValidationError({{entity, "Klein coordinates must lie in the open unit ball"}});
  return point_from_chart(tag, c);
}

CameraSpec parse_camera(const json& j, GeometryTag tag) {
  const std::string path = "camera";
  Reader::expect_object(j, path, {"origin", "frame", "look_at", "up", "vfov_deg"});
  const Vec3 from = Reader::vec3(Reader::member(j, path, "origin"), path + ".origin");
  const double vfov = Reader::number(Reader::member(j, path, "vfov_deg"), path + ".vfov_deg") * kPi / 180;
  lift(tag, from, "camera");

  if (j.contains("frame") == j.contains("look_at"))
    throw ParseError(path + ": exactly one of 'frame' or 'look_at' is required");
  if (j.contains("look_at")) {
    const Vec3 target = Reader::vec3(j["look_at"], path + ".look_at");
    const Vec3 up = j.contains("up") ? Reader::vec3(j["up"], path + ".up") : Vec3{0, 1, 0};
    lift(tag, target, "camera.look_at");
    return look_at_camera(tag, from, target, up, vfov);
  }
  if (j.contains("up")) throw ParseError(path + ": 'up' only applies with 'look_at'");
  const json& f = j["frame"];
  Reader::expect_object(f, path + ".frame", {"right", "up", "forward"});
  CameraSpec cam;
  cam.origin = point_from_chart(tag, from);
  cam.vfov = vfov;
  cam.right = tangent_from_chart_frame(tag, cam.origin,
                                       Reader::vec3(Reader::member(f, path + ".frame", "right"), path + ".frame.right"));
  cam.up = tangent_from_chart_frame(tag, cam.origin,
                                    Reader::vec3(Reader::member(f, path + ".frame", "up"), path + ".frame.up"));
  cam.forward = tangent_from_chart_frame(
      tag, cam.origin, Reader::vec3(Reader::member(f, path + ".frame", "forward"), path + ".frame.forward"));
  return cam;
}

SceneObject parse_object(const json& j, int index, const QuotientManifold& manifold) {
  const std::string path = "objects[" + std::to_string(index) + "]";
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  const std::string type = Reader::string(Reader::member(j, path, "type"), path + ".type");
  SceneObject obj;
  obj.id = index;
  obj.name = j.contains("name") ? Reader::string(j["name"], path + ".name") : path;
  const GeometryTag tag = manifold.tag;

  if (type == "sphere") {
    Reader::expect_object(j, path, {"type", "name", "center", "radius", "material"});
    Sphere s;
    s.center = lift(tag, Reader::vec3(Reader::member(j, path, "center"), path + ".center"), obj.name);
    s.radius = Reader::number(Reader::member(j, path, "radius"), path + ".radius");
    obj.shape = s;
  } else if (type == "quad") {
    Reader::expect_object(j, path, {"type", "name", "corner", "edge_u", "edge_v", "material"});
    if (tag != GeometryTag::Euclidean)
      throw ValidationError({{obj.name, "quads are only supported in Euclidean manifolds"}});
    const Vec3 c = Reader::vec3(Reader::member(j, path, "corner"), path + ".corner");
    const Vec3 u = Reader::vec3(Reader::member(j, path, "edge_u"), path + ".edge_u");
    const Vec3 v = Reader::vec3(Reader::member(j, path, "edge_v"), path + ".edge_v");
    obj.shape = Quad{euclidean_point(c.x, c.y, c.z), euclidean_vector(u.x, u.y, u.z),
                     euclidean_vector(v.x, v.y, v.z)};
  } else if (type == "edge_tubes") {
    Reader::expect_object(j, path, {"type", "name", "radius", "beads_per_edge", "material"});
    if (manifold.name != "mirrored_dodecahedron")
      throw ValidationError({{obj.name, "edge_tubes require the mirrored_dodecahedron manifold"}});
    const double r = Reader::number(Reader::member(j, path, "radius"), path + ".radius");
    const int n = j.contains("beads_per_edge")
                      ? Reader::integer(j["beads_per_edge"], path + ".beads_per_edge")
                      : 16;
    if (!(r > 0) || n < 2)
      throw ValidationError({{obj.name, "edge_tubes need radius > 0 and beads_per_edge >= 2"}});
    obj.shape = make_edge_tubes(manifold, r, n);
  } else {
    throw ParseError(path + ".type: unknown object type '" + type + "'");
  }
  obj.material = parse_material(Reader::member(j, path, "material"), path + ".material", obj.name);
  return obj;
}

void check_material(const Material& m, std::vector<Violation>& out) {
  auto in_unit = [](const Rgb& c) {
    for (int i = 0; i < 3; ++i)
      if (!(c[i] >= 0 && c[i] <= 1)) return false;
    return true;
  };
  if (!in_unit(m.ka) || !in_unit(m.kd) || !in_unit(m.ks))
    out.push_back({m.name, "ka, kd and ks must lie in [0,1]"});
  for (int i = 0; i < 3; ++i)
    if (m.kd[i] + m.ks[i] > 1) {
      out.push_back({m.name, "kd + ks exceeds 1 in channel " + std::to_string(i) + " (energy conservation)"});
      break;
    }
  if (!(m.ke >= 1)) out.push_back({m.name, "ke must be >= 1"});
  if (!(m.emission.r >= 0 && m.emission.g >= 0 && m.emission.b >= 0))
    out.push_back({m.name, "emission must be non-negative"});
}

// Distance to the nearest face, negative outside.
Real clearance(const QuotientManifold& q, const ModelPoint& p) {
  Real best = std::numeric_limits<Real>::infinity();
  for (const DomainFace& f : q.faces) best = std::min(best, -face_distance(q, f, p));
  return best;
}

bool inside_object(GeometryTag tag, const SceneObject& obj, const ModelPoint& p) {
  if (const auto* s = std::get_if<Sphere>(&obj.shape)) return distance(tag, s->center, p) <= s->radius;
  if (const auto* t = std::get_if<EdgeTubes>(&obj.shape))
    for (const auto& e : t->edges)
      for (const Sphere& b : e.beads)
        if (distance(tag, b.center, p) <= b.radius) return true;
  return false;
}

}  // namespace

ParseError::ParseError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

ModelPoint point_from_chart(GeometryTag tag, const Vec3& c) {
  switch (tag) {
    case GeometryTag::Euclidean: return euclidean_point(c.x, c.y, c.z);
    case GeometryTag::Hyperbolic: return from_klein(c);
    case GeometryTag::Spherical: break;
  }
  throw std::invalid_argument("spherical scenes have no chart");
}

Vec3 point_to_chart(GeometryTag tag, const ModelPoint& p) {
  switch (tag) {
    case GeometryTag::Euclidean: return {p.x, p.y, p.z};
    case GeometryTag::Hyperbolic: return to_klein(p);
    case GeometryTag::Spherical: break;
  }
  throw std::invalid_argument("spherical scenes have no chart");
}

CameraSpec look_at_camera(GeometryTag tag, const Vec3& from, const Vec3& target, const Vec3& up_hint,
                          double vfov) {
  CameraSpec cam;
  cam.origin = point_from_chart(tag, from);
  cam.vfov = vfov;
  // Build the frame at the chart origin, where T_o is plain R3, then carry it over.
  const ModelPoint t = apply_isometry(chart_translation_inverse(tag, cam.origin), point_from_chart(tag, target));
  const Vec3 fwd = normalized({t.x, t.y, t.z});
  const Real uf = up_hint.x * fwd.x + up_hint.y * fwd.y + up_hint.z * fwd.z;
  const Vec3 up = normalized({up_hint.x - uf * fwd.x, up_hint.y - uf * fwd.y, up_hint.z - uf * fwd.z});
  const Vec3 right = cross(fwd, up);
  cam.forward = tangent_from_chart_frame(tag, cam.origin, fwd);
  cam.up = tangent_from_chart_frame(tag, cam.origin, up);
  cam.right = tangent_from_chart_frame(tag, cam.origin, right);
  return cam;
}

EdgeTubes make_edge_tubes(const QuotientManifold& q, Real radius, int beads_per_edge) {
  EdgeTubes tubes;
  tubes.radius = radius;
  tubes.beads_per_edge = beads_per_edge;
  for (const auto& [ka, kb] : dodecahedron_edges(q)) {
    const ModelPoint a = from_klein(ka);
    const Connection c = connect(q.tag, a, from_klein(kb));
    EdgeTubes::Edge edge;
    for (int k = 0; k < beads_per_edge; ++k) {
      const Real t = c.length * k / (beads_per_edge - 1);
      edge.beads.push_back({geodesic(q.tag, a, c.direction, t).point, radius});
    }
    edge.bound = {geodesic(q.tag, a, c.direction, c.length / 2).point, c.length / 2 + radius};
    tubes.edges.push_back(std::move(edge));
  }
  return tubes;
}

Scene parse_scene(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  Reader::expect_object(root, "scene", {"manifold", "ambient", "camera", "lights", "objects"});

  Scene scene;
  const std::string name = Reader::string(Reader::member(root, "scene", "manifold"), "manifold");
  auto manifold = manifold_by_name(name);
  if (!manifold) throw ParseError("manifold: unknown manifold '" + name + "'");
  scene.manifold = std::move(*manifold);
  const GeometryTag tag = scene.manifold.tag;

  scene.ambient = root.contains("ambient") ? Reader::rgb(root["ambient"], "ambient") : Rgb{};
  scene.camera = parse_camera(Reader::member(root, "scene", "camera"), tag);

  if (root.contains("lights")) {
    const json& lights = root["lights"];
    if (!lights.is_array()) throw ParseError("lights: expected an array");
    for (std::size_t i = 0; i < lights.size(); ++i) {
      const std::string path = "lights[" + std::to_string(i) + "]";
      Reader::expect_object(lights[i], path, {"name", "position", "intensity"});
      PointLight l;
      l.name = lights[i].contains("name") ? Reader::string(lights[i]["name"], path + ".name") : path;
      l.position = lift(tag, Reader::vec3(Reader::member(lights[i], path, "position"), path + ".position"), l.name);
      l.intensity = Reader::rgb(Reader::member(lights[i], path, "intensity"), path + ".intensity");
      scene.lights.push_back(std::move(l));
    }
  }
  if (root.contains("objects")) {
    const json& objects = root["objects"];
    if (!objects.is_array()) throw ParseError("objects: expected an array");
    for (std::size_t i = 0; i < objects.size(); ++i)
      scene.objects.push_back(parse_object(objects[i], static_cast<int>(i), scene.manifold));
  }

  if (auto violations = validate(scene); !violations.empty()) throw ValidationError(std::move(violations));
  return scene;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SceneFileError("cannot open scene file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

std::string serialize_scene(const Scene& scene) {
  const GeometryTag tag = scene.tag();
  json root;
  root["manifold"] = scene.manifold.name;
  root["ambient"] = to_json(scene.ambient);

  const CameraSpec& cam = scene.camera;
  root["camera"] = {
      {"origin", to_json(point_to_chart(tag, cam.origin))},
      {"frame",
       {{"right", to_json(tangent_to_chart_frame(tag, cam.origin, cam.right))},
        {"up", to_json(tangent_to_chart_frame(tag, cam.origin, cam.up))},
        {"forward", to_json(tangent_to_chart_frame(tag, cam.origin, cam.forward))}}},
      {"vfov_deg", cam.vfov * 180 / kPi}};

  root["lights"] = json::array();
  for (const PointLight& l : scene.lights)
    root["lights"].push_back({{"name", l.name},
                              {"position", to_json(point_to_chart(tag, l.position))},
                              {"intensity", to_json(l.intensity)}});

  root["objects"] = json::array();
  for (const SceneObject& obj : scene.objects) {
    json o;
    o["name"] = obj.name;
    if (const auto* s = std::get_if<Sphere>(&obj.shape)) {
      o["type"] = "sphere";
      o["center"] = to_json(point_to_chart(tag, s->center));
      o["radius"] = static_cast<double>(s->radius);
    } else if (const auto* q = std::get_if<Quad>(&obj.shape)) {
      o["type"] = "quad";
      o["corner"] = to_json(point_to_chart(tag, q->corner));
      o["edge_u"] = to_json(Vec3{q->edge_u.x, q->edge_u.y, q->edge_u.z});
      o["edge_v"] = to_json(Vec3{q->edge_v.x, q->edge_v.y, q->edge_v.z});
    } else if (const auto* t = std::get_if<EdgeTubes>(&obj.shape)) {
      o["type"] = "edge_tubes";
      o["radius"] = static_cast<double>(t->radius);
      o["beads_per_edge"] = t->beads_per_edge;
    }
    o["material"] = material_to_json(obj.material);
    root["objects"].push_back(std::move(o));
  }
  return root.dump(2) + "\n";
}

std::vector<Violation> validate(const Scene& scene) {
  std::vector<Violation> out;
  const QuotientManifold& q = scene.manifold;
  const GeometryTag tag = q.tag;

  auto check_point = [&](const ModelPoint& p, const std::string& entity) {
    if (manifold_residual(tag, p) > kLiftTol) out.push_back({entity, "point is off the manifold"});
    if (!contains(q, p)) out.push_back({entity, "lies outside the fundamental domain"});
  };

  if (!(scene.ambient.r >= 0 && scene.ambient.g >= 0 && scene.ambient.b >= 0))
    out.push_back({"ambient", "must be non-negative"});

  const CameraSpec& cam = scene.camera;
  check_point(cam.origin, "camera");
  const TangentVec* frame[3] = {&cam.right, &cam.up, &cam.forward};
  bool orthonormal = true;
  for (int a = 0; a < 3; ++a) {
    if (tangency_residual(tag, cam.origin, *frame[a]) > kFrameTol) orthonormal = false;
    for (int b = a; b < 3; ++b)
      if (std::fabs(inner(tag, *frame[a], *frame[b]) - (a == b ? 1 : 0)) > kFrameTol) orthonormal = false;
  }
  if (!orthonormal) out.push_back({"camera", "frame is not orthonormal under the metric"});
  if (!(cam.vfov > 0 && cam.vfov < kPi)) out.push_back({"camera", "vfov must lie in (0, 180) degrees"});

  for (const SceneObject& obj : scene.objects) {
    check_material(obj.material, out);
    if (const auto* s = std::get_if<Sphere>(&obj.shape)) {
      if (!(s->radius > 0)) out.push_back({obj.name, "radius must be positive"});
      check_point(s->center, obj.name);
      if (contains(q, s->center) && !(s->radius < clearance(q, s->center)))
        out.push_back({obj.name, "sphere does not fit inside the fundamental domain"});
      if (tag == GeometryTag::Spherical && !(s->radius < kPi / 2))
        out.push_back({obj.name, "radius exceeds the injectivity bound"});
    } else if (const auto* qd = std::get_if<Quad>(&obj.shape)) {
      if (tag != GeometryTag::Euclidean) out.push_back({obj.name, "quads need a Euclidean manifold"});
      const Vec4 corners[4] = {qd->corner, qd->corner + qd->edge_u, qd->corner + qd->edge_v,
                               qd->corner + qd->edge_u + qd->edge_v};
      bool inside = true;
      for (const Vec4& c : corners) inside = inside && contains(q, ModelPoint(c));
      if (!inside) out.push_back({obj.name, "quad lies outside the fundamental domain"});
      const Vec3 n = cross({qd->edge_u.x, qd->edge_u.y, qd->edge_u.z}, {qd->edge_v.x, qd->edge_v.y, qd->edge_v.z});
      if (!(norm3(n) > 1e-12L)) out.push_back({obj.name, "quad edges are degenerate"});
    } else if (const auto* t = std::get_if<EdgeTubes>(&obj.shape)) {
      if (!(t->radius > 0)) out.push_back({obj.name, "radius must be positive"});
    }
  }

  for (const PointLight& l : scene.lights) {
    check_point(l.position, l.name);
    if (!(l.intensity.r >= 0 && l.intensity.g >= 0 && l.intensity.b >= 0))
      out.push_back({l.name, "intensity must be non-negative"});
    for (const SceneObject& obj : scene.objects)
      if (inside_object(tag, obj, l.position)) out.push_back({l.name, "light lies inside " + obj.name});
  }
  for (const SceneObject& obj : scene.objects)
    if (inside_object(tag, obj, cam.origin)) out.push_back({"camera", "origin lies inside " + obj.name});
  return out;
}

}  // namespace qtrace
