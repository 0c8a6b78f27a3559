#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "autozoom/core/bbox.hpp"
#include "autozoom/core/frame_buffer.hpp"
#include "autozoom/core/track.hpp"
#include "autozoom/zoom/params.hpp"

namespace autozoom::zoom {

// Pixel window [x0, x0 + width) x [y0, y0 + height).
struct CropWindow {
  std::size_t x0 = 0;
  std::size_t y0 = 0;
  std::size_t width = 0;
  std::size_t height = 0;

  std::size_t area() const noexcept { return width * height; }
  friend bool operator==(const CropWindow&, const CropWindow&) = default;
};

struct CropSize {
  std::size_t width = 0;
  std::size_t height = 0;

  friend bool operator==(const CropSize&, const CropSize&) = default;
};

// Smallest square candidate c with area / c^2 inside [low, high]; otherwise
// the candidate whose ratio lies closest to the band. Throws ValidationError
// on an empty candidate list or non-positive area.
std::size_t select_crop_size(double bbox_area, std::span<const std::size_t> candidates, double low,
                             double high);

// Square when select_crop_size's band test succeeds. Otherwise, if allowed,
// the smallest-area width/height pair from the candidates inside the band,
// long side along the box's long side. Falls back to the nearest square.
CropSize select_crop_window(const BBox& bbox, const ZoomParams& params);

// Window of the requested size centered on the rounded center, shifted (not
// shrunk) to stay inside the frame; sizes larger than the frame are clamped.
CropWindow place_window(FrameSize frame, Point center, std::size_t width, std::size_t height);

FrameBuffer crop(const FrameBuffer& frame, const CropWindow& window);
FrameBuffer crop_region(const FrameBuffer& frame, Point center, std::size_t size);

// Half-pixel-center bilinear resampling; source coordinates are clamped to
// the image.
FrameBuffer resize_bilinear(const FrameBuffer& frame, std::size_t out_w, std::size_t out_h);

struct ZoomPlan {
  CropWindow window;
  double occupancy = 0.0;  // bbox area / window area
};

// Crop window per frame of a complete track. Throws ValidationError when the
// track has gaps.
std::vector<ZoomPlan> plan_zoom(const Track& track, const ZoomParams& params);

// Crop each frame around its track box and scale it to input_size^2.
std::vector<FrameBuffer> auto_zoom_clip(std::span<const FrameBuffer> frames, const Track& track,
                                        const ZoomParams& params);

}  // namespace autozoom::zoom
