#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace autozoom::cli {

// Text file: `width height fps` on the first line, then one frame path per
// line. Relative paths are relative to the manifest's directory.
struct ClipManifest {
  std::size_t width = 0;
  std::size_t height = 0;
  double fps = 0.0;
  std::vector<std::filesystem::path> frame_paths;  // resolved
};

// Throws IoError when the file or a listed frame is missing or the list is
// empty, ParseError on a malformed header.
ClipManifest load_manifest(const std::filesystem::path& path);

// Frame paths inside the manifest's directory are written relative to it.
void save_manifest(const std::filesystem::path& path, const ClipManifest& manifest);

}  // namespace autozoom::cli
