#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace qtrace {

/// Exit codes of the renderer command line.
enum ExitCode : int { kExitOk = 0, kExitInputError = 1, kExitIoError = 2 };

/// Resolves --scene: an existing file path, or the name of a bundled scene
/// ("cornell_torus" -> <scene dir>/cornell_torus.json).
std::filesystem::path resolve_scene_path(const std::string& arg);

/// Parses flags, loads the scene, renders and writes the PPM.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qtrace
