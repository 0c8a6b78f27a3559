#include "autozoom/core/track.hpp"

#include <algorithm>

#include "autozoom/core/errors.hpp"

namespace autozoom {

char provenance_code(Provenance p) noexcept {
  switch (p) {
    case Provenance::Detected:
      return 'D';
    case Provenance::Predicted:
      return 'P';
    case Provenance::Interpolated:
      return 'I';
  }
  return '?';
}

std::optional<Provenance> provenance_from_code(char c) noexcept {
  switch (c) {
    case 'D':
      return Provenance::Detected;
    case 'P':
      return Provenance::Predicted;
    case 'I':
      return Provenance::Interpolated;
    default:
      return std::nullopt;
  }
}

Track::Track(std::size_t frame_count, FrameSize frame_size, std::vector<TrackEntry> entries)
    : frame_count_(frame_count), frame_size_(frame_size), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const TrackEntry& a, const TrackEntry& b) { return a.frame_index < b.frame_index; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (i > 0 && entries_[i - 1].frame_index == e.frame_index) {
      throw ValidationError("duplicate track entry for frame " + std::to_string(e.frame_index));
    }
    if (e.frame_index >= frame_count_) {
      throw ValidationError("track entry frame " + std::to_string(e.frame_index) +
                            " outside frame count " + std::to_string(frame_count_));
    }
    const double w = static_cast<double>(frame_size_.width);
    const double h = static_cast<double>(frame_size_.height);
    if (e.bbox.cx() < 0.0 || e.bbox.cx() > w || e.bbox.cy() < 0.0 || e.bbox.cy() > h) {
      throw ValidationError("track entry for frame " + std::to_string(e.frame_index) +
                            " has its center outside the frame");
    }
  }
}

bool Track::complete() const noexcept {
  // Sorted and unique, so a full-size list covers every index.
  return entries_.size() == frame_count_;
}

const TrackEntry* Track::find(std::size_t frame_index) const noexcept {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), frame_index,
      [](const TrackEntry& e, std::size_t f) { return e.frame_index < f; });
  if (it == entries_.end() || it->frame_index != frame_index) return nullptr;
  return &*it;
}

const TrackEntry& Track::at(std::size_t frame_index) const {
  if (const auto* e = find(frame_index)) return *e;
  throw ValidationError("track has no entry for frame " + std::to_string(frame_index));
}

std::size_t Track::count(Provenance p) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [p](const TrackEntry& e) { return e.provenance == p; }));
}

}  // namespace autozoom
