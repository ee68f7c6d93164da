#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "qtrace/render.hpp"
#include "scene_builder.hpp"

using namespace qtrace;

namespace {

constexpr GeometryTag E = GeometryTag::Euclidean;
constexpr GeometryTag H = GeometryTag::Hyperbolic;

Camera axis_camera(GeometryTag tag, double vfov) {
  return {tag, origin(), TangentVec(1, 0, 0, 0), TangentVec(0, 1, 0, 0), TangentVec(0, 0, -1, 0), vfov};
}

// A lit sphere in the torus, cheap enough to render many times.
Scene small_scene() {
  Scene s = test::empty_scene(flat_torus());
  s.camera.origin = euclidean_point(0.5L, 0.5L, 0.9L);
  s.camera.vfov = 1.2;
  Material m = test::diffuse(0.6);
  m.ks = Rgb::gray(0.3);
  m.ke = 20;
  test::add_sphere(s, euclidean_point(0.5L, 0.5L, 0.4L), 0.2L, m);
  test::add_light(s, euclidean_point(0.2L, 0.8L, 0.8L), Rgb::gray(1));
  return s;
}

std::string payload(const std::string& ppm) {
  // Header "P6\n1 1\n255\n" is 11 bytes for a 1x1 image.
  return ppm.substr(11);
}

}  // namespace

TEST_CASE("camera rays") {
  SUBCASE("center pixel looks forward") {
    const Camera cam = axis_camera(E, 1.0);
    const Ray r = generate_camera_ray(cam, 3, 3, 1, 1, 0.5, 0.5);
    CHECK(r.v == cam.forward);
  }
  SUBCASE("top edge at 90 degrees vfov") {
    const Camera cam = axis_camera(E, std::numbers::pi / 2);
    const Ray r = generate_camera_ray(cam, 3, 3, 1, 0, 0.5, 0.0);
    CHECK(std::fabs(inner(E, r.v, cam.forward) - std::cos(std::numbers::pi_v<Real> / 4)) < 1e-9L);
    CHECK(r.v.y > 0);
  }
  SUBCASE("left edge respects the aspect ratio") {
    const Camera cam = axis_camera(E, std::numbers::pi / 2);
    const Ray r = generate_camera_ray(cam, 4, 2, 0, 0, 0.0, 1.0);
    // s_x = -tan(45) * 2, s_y = 0.
    CHECK(std::fabs(inner(E, r.v, cam.forward) - 1 / std::sqrt(5.0L)) < 1e-12L);
  }
  SUBCASE("every direction is a unit tangent") {
    const Camera cams[] = {axis_camera(E, 1.0), {H, from_klein({0.2L, 0.1L, 0}), {}, {}, {}, 1.3}};
    Camera hc = cams[1];
    // Frame at a point off the apex, carried by the boost.
    const Isometry b = Isometry::hyperbolic_translation_to(hc.origin);
    hc.right = apply_isometry(b, origin(), TangentVec(1, 0, 0, 0));
    hc.up = apply_isometry(b, origin(), TangentVec(0, 1, 0, 0));
    hc.forward = apply_isometry(b, origin(), TangentVec(0, 0, -1, 0));
    for (const Camera& cam : {cams[0], hc})
      for (int j = 0; j < 12; ++j)
        for (int i = 0; i < 16; ++i) {
          const Ray r = generate_camera_ray(cam, 16, 12, i, j, 0.3, 0.7);
          REQUIRE(std::fabs(tangent_norm(cam.tag, r.v) - 1) < 1e-12L);
          REQUIRE(tangency_residual(cam.tag, r.p, r.v) < 1e-12L);
        }
  }
}

TEST_CASE("tiles partition the image") {
  const int w = 37, h = 21;
  std::vector<int> covered(w * h, 0);
  for (const Tile& t : make_tiles(w, h)) {
    CHECK(t.x1 - t.x0 <= kTileSize);
    CHECK(t.y1 - t.y0 <= kTileSize);
    for (int j = t.y0; j < t.y1; ++j)
      for (int i = t.x0; i < t.x1; ++i) ++covered[j * w + i];
  }
  for (int c : covered) CHECK(c == 1);
  CHECK(make_tiles(37, 21).size() == 6);
}

TEST_CASE("render") {
  SUBCASE("a scene without light is black") {
    Scene s = small_scene();
    s.lights.clear();
    const Image img = render(s, 8, 6, {.spp = 2, .depth = 2});
    for (const Rgb& c : img.data) CHECK(c.is_black());
  }
  SUBCASE("reruns are bit-identical") {
    const Scene s = small_scene();
    const RenderSettings settings{.spp = 1, .depth = 3, .seed = 5};
    const Image a = render(s, 24, 18, settings, 1);
    const Image b = render(s, 24, 18, settings, 1);
    CHECK(encode_ppm(a) == encode_ppm(b));
    CHECK(a.data == b.data);
    CHECK(a.mean_luminance() > 0);
  }
  SUBCASE("thread count does not change the image") {
    const Scene s = small_scene();
    const RenderSettings settings{.spp = 4, .depth = 2, .seed = 1};
    const Image one = render(s, 40, 35, settings, 1);
    const Image three = render(s, 40, 35, settings, 3);
    CHECK(one.data == three.data);
  }
  SUBCASE("seeds change the noise") {
    const Scene s = small_scene();
    CHECK(render(s, 16, 12, {.spp = 1, .seed = 1}, 1).data != render(s, 16, 12, {.spp = 1, .seed = 2}, 1).data);
  }
  SUBCASE("every pixel is finite") {
    for (const Rgb& c : render(small_scene(), 16, 12, {.spp = 2}).data)
      CHECK((std::isfinite(c.r) && std::isfinite(c.g) && std::isfinite(c.b)));
  }
}

TEST_CASE("ppm encoding") {
  Image img(1, 1);
  img.at(0, 0) = {0, 0, 0};
  CHECK(encode_ppm(img) == std::string("P6\n1 1\n255\n\x00\x00\x00", 14));
  img.at(0, 0) = {1, 1, 1};
  CHECK(payload(encode_ppm(img)) == "\xFF\xFF\xFF");
  // floor(255 * 0.5^(1/2.2) + 0.5) = floor(186.08...)
  img.at(0, 0) = {0.5, 0.5, 0.5};
  CHECK(payload(encode_ppm(img)) == "\xBA\xBA\xBA");
  CHECK(encode_channel(0.5) == 186);
  CHECK(encode_channel(-3) == 0);
  CHECK(encode_channel(7) == 255);
  CHECK(encode_channel(std::nan("")) == 0);
  // Round half up: 255 * c^(1/2.2) = 127.5 exactly at c = 0.5^2.2.
  CHECK(encode_channel(std::pow(127.5 / 255, 2.2) + 1e-12) == 128);

  Image wide(2, 1);
  wide.at(0, 0) = {1, 0, 0};
  wide.at(1, 0) = {0, 0, 1};
  CHECK(encode_ppm(wide) == std::string("P6\n2 1\n255\n\xFF\x00\x00\x00\x00\xFF", 17));
}

TEST_CASE("write_ppm") {
  const auto path = std::filesystem::temp_directory_path() / "qtrace_test_render.ppm";
  Image img(3, 2);
  img.at(2, 1) = {0.25, 0.5, 1};
  write_ppm(img, path);
  std::ifstream in(path, std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(bytes == encode_ppm(img));
  std::filesystem::remove(path);

  CHECK_THROWS_AS(write_ppm(img, "/nonexistent-dir/out.ppm"), IoError);
}
