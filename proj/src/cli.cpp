#include "qtrace/cli.hpp"

#include <chrono>
#include <ostream>

#include "CLI11.hpp"
#include "qtrace/render.hpp"
#include "qtrace/scene.hpp"

#ifndef QTRACE_SCENE_DIR
#define QTRACE_SCENE_DIR "scenes"
#endif

namespace qtrace {

std::filesystem::path resolve_scene_path(const std::string& arg) {
  std::filesystem::path p(arg);
  if (std::filesystem::exists(p)) return p;
  if (!p.has_parent_path() && !p.has_extension()) {
    const std::filesystem::path bundled = std::filesystem::path(QTRACE_SCENE_DIR) / (arg + ".json");
    if (std::filesystem::exists(bundled)) return bundled;
  }
  return p;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Path tracer for flat and hyperbolic quotient manifolds"};
  std::string scene_arg;
  std::string output = "out.ppm";
  std::string threads_arg = "auto";
  int width = 640, height = 480;
  RenderSettings settings;
  bool no_indirect = false;

  app.add_option("--scene", scene_arg, "Scene file, or the name of a bundled scene")->required();
  app.add_option("--width", width, "Image width in pixels")->check(CLI::PositiveNumber);
  app.add_option("--height", height, "Image height in pixels")->check(CLI::PositiveNumber);
  app.add_option("--spp", settings.spp, "Samples per pixel")->check(CLI::PositiveNumber);
  app.add_option("--max-bounces", settings.depth, "Indirect bounces")->check(CLI::NonNegativeNumber);
  app.add_option("--max-transport-level", settings.maxlevel, "Domain crossings per ray")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", settings.seed, "Random seed");
  app.add_flag("--no-indirect", no_indirect, "Direct light plus ambient term only");
  app.add_option("-o,--output", output, "Output PPM path");
  app.add_option("--threads", threads_arg, "Worker count or 'auto'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  settings.indirect_enabled = !no_indirect;

  int threads = 0;
  if (threads_arg != "auto") {
    try {
      std::size_t used = 0;
      threads = std::stoi(threads_arg, &used);
      if (used != threads_arg.size() || threads < 1) throw std::invalid_argument(threads_arg);
    } catch (const std::exception&) {
      err << "error: --threads expects a positive integer or 'auto', got '" << threads_arg << "'\n";
      return kExitInputError;
    }
  }

  Scene scene;
  try {
    scene = load_scene(resolve_scene_path(scene_arg));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  const auto start = std::chrono::steady_clock::now();
  const Image image = render(scene, width, height, settings, threads);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    write_ppm(image, output);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }
  out << "wrote " << output << " (" << width << "x" << height << ", " << settings.spp << " spp, "
      << seconds << " s)\n";
  return kExitOk;
}

}  // namespace qtrace
