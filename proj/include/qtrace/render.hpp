#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtrace/color.hpp"
#include "qtrace/integrator.hpp"
#include "qtrace/scene.hpp"
#include "qtrace/tracer.hpp"

namespace qtrace {

struct Camera {
  GeometryTag tag = GeometryTag::Euclidean;
  ModelPoint origin;
  TangentVec right, up, forward;
  double vfov = 1;  // radians

  static Camera from_spec(GeometryTag tag, const CameraSpec& spec);
};

/// Row-major linear RGB.
struct Image {
  int width = 0, height = 0;
  std::vector<Rgb> data;

  Image() = default;
  Image(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h) {}

  Rgb& at(int i, int j) { return data[static_cast<std::size_t>(j) * width + i]; }
  const Rgb& at(int i, int j) const { return data[static_cast<std::size_t>(j) * width + i]; }
  double mean_luminance() const;
};

/// Pinhole ray through pixel (i, j) (column, row from the top) offset by the
/// jitter (u, v) in [0,1)^2.
Ray generate_camera_ray(const Camera& camera, int width, int height, int i, int j, double u, double v);

struct Tile {
  int x0, y0, x1, y1;  // half-open pixel bounds
};
inline constexpr int kTileSize = 16;
std::vector<Tile> make_tiles(int width, int height, int tile_size = kTileSize);

/// Worker count used for threads == 0.
int default_thread_count();

/// Box-filtered average of settings.spp stratified radiance samples per pixel.
/// The output does not depend on the number of threads.
Image render(const Scene& scene, int width, int height, const RenderSettings& settings, int threads = 0);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gamma-mapped byte: round-half-up of 255 * clamp(c, 0, 1)^(1/2.2).
std::uint8_t encode_channel(double c);

/// Binary P6 bytes.
std::string encode_ppm(const Image& image);
void write_ppm(const Image& image, const std::filesystem::path& path);

}  // namespace qtrace
