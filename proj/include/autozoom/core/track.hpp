#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "autozoom/core/bbox.hpp"

namespace autozoom {

enum class Provenance { Detected, Predicted, Interpolated };

char provenance_code(Provenance p) noexcept;
// Accepts 'D', 'P' or 'I'.
std::optional<Provenance> provenance_from_code(char c) noexcept;

struct TrackEntry {
  std::size_t frame_index = 0;
  BBox bbox;
  Provenance provenance = Provenance::Detected;

  friend bool operator==(const TrackEntry&, const TrackEntry&) = default;
};

struct FrameSize {
  std::size_t width = 0;
  std::size_t height = 0;

  friend bool operator==(const FrameSize&, const FrameSize&) = default;
};

// Per-frame bbox sequence for a single target.
//
// Entries are kept sorted by frame index with no duplicates, and every center
// lies inside [0, width] x [0, height]. A track is complete once it holds one
// entry for every frame in [0, frame_count).
class Track {
 public:
  Track(std::size_t frame_count, FrameSize frame_size, std::vector<TrackEntry> entries = {});

  std::size_t frame_count() const noexcept { return frame_count_; }
  FrameSize frame_size() const noexcept { return frame_size_; }
  const std::vector<TrackEntry>& entries() const noexcept { return entries_; }

  bool complete() const noexcept;
  // Entry for a frame, if present.
  const TrackEntry* find(std::size_t frame_index) const noexcept;
  // Throws ValidationError when the frame has no entry.
  const TrackEntry& at(std::size_t frame_index) const;

  std::size_t count(Provenance p) const noexcept;

  friend bool operator==(const Track&, const Track&) = default;

 private:
  std::size_t frame_count_;
  FrameSize frame_size_;
  std::vector<TrackEntry> entries_;
};

}  // namespace autozoom
