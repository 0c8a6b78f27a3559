#include "autozoom/cli/manifest.hpp"

#include <fstream>
#include <sstream>

#include "autozoom/core/errors.hpp"
#include "autozoom/locator/detections.hpp"

namespace autozoom::cli {

namespace fs = std::filesystem;

ClipManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  const fs::path base = path.parent_path();
  const std::string source = path.string();

  ClipManifest m;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (!header) {
      std::istringstream fields(line);
      long long w = 0, h = 0;
      std::string extra;
      if (!(fields >> w >> h >> m.fps) || (fields >> extra)) {
        throw ParseError(source, lineno, "expected `width height fps`");
      }
      if (w <= 0 || h <= 0 || !(m.fps > 0.0)) {
        throw ParseError(source, lineno, "width, height and fps must be positive");
      }
      m.width = static_cast<std::size_t>(w);
      m.height = static_cast<std::size_t>(h);
      header = true;
      continue;
    }
    fs::path frame = line.substr(first, line.find_last_not_of(" \t") - first + 1);
    if (frame.is_relative()) frame = base / frame;
    if (!fs::is_regular_file(frame)) {
      throw IoError(source + ":" + std::to_string(lineno) + ": missing frame " + frame.string());
    }
    m.frame_paths.push_back(std::move(frame));
  }
  if (in.bad()) throw IoError("failed reading manifest " + source);
  if (!header) throw IoError("manifest " + source + " is empty");
  if (m.frame_paths.empty()) throw IoError("manifest " + source + " lists no frames");
  return m;
}

void save_manifest(const fs::path& path, const ClipManifest& m) {
  const fs::path base = fs::absolute(path).parent_path().lexically_normal();
  std::ostringstream out;
  out << m.width << ' ' << m.height << ' ' << locator::format_number(m.fps) << '\n';
  for (const auto& p : m.frame_paths) {
    const fs::path abs = fs::absolute(p).lexically_normal();
    const fs::path rel = abs.lexically_relative(base);
    const bool inside = !rel.empty() && *rel.begin() != "..";
    out << (inside ? rel : abs).generic_string() << '\n';
  }
  locator::write_file_atomically(path, out.str());
}

}  // namespace autozoom::cli
