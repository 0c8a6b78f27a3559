#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "autozoom/core/bbox.hpp"
#include "autozoom/core/track.hpp"

namespace autozoom::locator {

// Detections keyed by frame index. Frames without detections are absent.
struct DetectionSet {
  std::map<std::size_t, std::vector<BBox>> by_frame;

  std::size_t box_count() const noexcept;
  const std::vector<BBox>* find(std::size_t frame_index) const noexcept;

  friend bool operator==(const DetectionSet&, const DetectionSet&) = default;
};

// Line format: `frame_index cx cy w h score`, blank lines and `#` comments
// ignored. Throws ParseError naming the first bad line, IoError if the file
// cannot be read.
DetectionSet parse_detections(std::istream& in, const std::string& source = "<stream>");
DetectionSet load_detections(const std::filesystem::path& path);
void write_detections(std::ostream& out, const DetectionSet& dets);
void save_detections(const std::filesystem::path& path, const DetectionSet& dets);

// Track files use the same records plus a 7th provenance field (D, P or I).
// The writer emits a `# track frames=N width=W height=H` comment that the
// reader uses to recover the track geometry; without it, frame_size must be
// supplied and frame_count is taken as the largest index + 1.
Track parse_track(std::istream& in, const std::string& source = "<stream>",
                  std::optional<FrameSize> frame_size = std::nullopt);
Track load_track(const std::filesystem::path& path,
                 std::optional<FrameSize> frame_size = std::nullopt);
void write_track(std::ostream& out, const Track& track);
void save_track(const std::filesystem::path& path, const Track& track);

// Boxes with score strictly greater than threshold, order preserved.
std::vector<BBox> filter_by_score(const std::vector<BBox>& dets, double threshold);

// Highest score; ties go to the larger area, then to the earlier box.
std::optional<BBox> best_detection(const std::vector<BBox>& dets);

// Shortest decimal text that parses back to exactly the same double.
std::string format_number(double v);

// Writes via a sibling temporary file and renames it into place.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace autozoom::locator
