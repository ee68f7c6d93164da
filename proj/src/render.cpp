#include "qtrace/render.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

namespace qtrace {

Camera Camera::from_spec(GeometryTag tag, const CameraSpec& spec) {
  return {tag, spec.origin, spec.right, spec.up, spec.forward, spec.vfov};
}

double Image::mean_luminance() const {
  if (data.empty()) return 0;
  double sum = 0;
  for (const Rgb& c : data) sum += c.luminance();
  return sum / static_cast<double>(data.size());
}

Ray generate_camera_ray(const Camera& camera, int width, int height, int i, int j, double u, double v) {
  const double half = std::tan(camera.vfov / 2);
  const double aspect = static_cast<double>(width) / height;
  const double sx = (2 * (i + u) / width - 1) * half * aspect;
  const double sy = (1 - 2 * (j + v) / height) * half;
  const Vec4 dir = camera.forward + Real(sx) * Vec4(camera.right) + Real(sy) * Vec4(camera.up);
  return {camera.origin, unit_tangent(camera.tag, camera.origin, dir), camera.tag};
}

std::vector<Tile> make_tiles(int width, int height, int tile_size) {
  std::vector<Tile> tiles;
  for (int y = 0; y < height; y += tile_size)
    for (int x = 0; x < width; x += tile_size)
      tiles.push_back({x, y, std::min(x + tile_size, width), std::min(y + tile_size, height)});
  return tiles;
}

int default_thread_count() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

namespace {

Rgb render_pixel(const Scene& scene, const Camera& camera, int width, int height, int i, int j,
                 const RenderSettings& settings) {
  const int spp = std::max(settings.spp, 1);
  const int strata = static_cast<int>(std::sqrt(static_cast<double>(spp)));
  Rgb sum;
  for (int s = 0; s < spp; ++s) {
    const PathKey key{settings.seed, static_cast<std::uint64_t>(j) * width + i, static_cast<std::uint64_t>(s)};
    Rng jitter = key.at_bounce(0);
    double u = jitter.uniform(), v = jitter.uniform();
    // Stratified over a strata x strata grid; the remainder samples are uniform.
    if (s < strata * strata) {
      u = (s % strata + u) / strata;
      v = (s / strata + v) / strata;
    }
    const Ray ray = generate_camera_ray(camera, width, height, i, j, u, v);
    sum += radiance(scene, ray.p, ray.v, settings, key);
  }
  return sum * (1.0 / spp);
}

}  // namespace

Image render(const Scene& scene, int width, int height, const RenderSettings& settings, int threads) {
  Image image(width, height);
  const Camera camera = Camera::from_spec(scene.tag(), scene.camera);
  const std::vector<Tile> tiles = make_tiles(width, height);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k = next++; k < tiles.size(); k = next++) {
      const Tile& t = tiles[k];
      for (int j = t.y0; j < t.y1; ++j)
        for (int i = t.x0; i < t.x1; ++i) image.at(i, j) = render_pixel(scene, camera, width, height, i, j, settings);
    }
  };

  const int n = std::max(1, threads > 0 ? threads : default_thread_count());
  std::vector<std::jthread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  return image;
}

std::uint8_t encode_channel(double c) {
  const double x = std::isfinite(c) ? std::clamp(c, 0.0, 1.0) : 0.0;
  return static_cast<std::uint8_t>(std::floor(255.0 * std::pow(x, 1.0 / 2.2) + 0.5));
}

std::string encode_ppm(const Image& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.reserve(out.size() + image.data.size() * 3);
  for (const Rgb& c : image.data) {
    out.push_back(static_cast<char>(encode_channel(c.r)));
    out.push_back(static_cast<char>(encode_channel(c.g)));
    out.push_back(static_cast<char>(encode_channel(c.b)));
  }
  return out;
}

void write_ppm(const Image& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  const std::string bytes = encode_ppm(image);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace qtrace
