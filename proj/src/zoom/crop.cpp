#include "autozoom/zoom/crop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "autozoom/core/errors.hpp"

namespace autozoom::zoom {

namespace {

bool in_band(double ratio, double low, double high) { return ratio >= low && ratio <= high; }

double band_distance(double ratio, double low, double high) {
  if (ratio < low) return low - ratio;
  if (ratio > high) return ratio - high;
  return 0.0;
}

void check_selection_inputs(double area, std::span<const std::size_t> candidates) {
  if (candidates.empty()) throw ValidationError("crop candidate list is empty");
  if (!(area > 0.0)) throw ValidationError("bbox area must be positive");
  for (auto c : candidates)
    if (c == 0) throw ValidationError("crop candidates must be positive");
}

std::optional<std::size_t> smallest_square_in_band(double area,
                                                   std::span<const std::size_t> candidates,
                                                   double low, double high) {
  std::optional<std::size_t> best;
  for (auto c : candidates) {
    const double ratio = area / (static_cast<double>(c) * static_cast<double>(c));
    if (in_band(ratio, low, high) && (!best || c < *best)) best = c;
  }
  return best;
}

}  // namespace

std::size_t select_crop_size(double bbox_area, std::span<const std::size_t> candidates, double low,
                             double high) {
  check_selection_inputs(bbox_area, candidates);
  if (auto c = smallest_square_in_band(bbox_area, candidates, low, high)) return *c;
  std::size_t best = candidates.front();
  double best_dist = std::numeric_limits<double>::infinity();
  for (auto c : candidates) {
    const double ratio = bbox_area / (static_cast<double>(c) * static_cast<double>(c));
    const double d = band_distance(ratio, low, high);
    if (d < best_dist || (d == best_dist && c < best)) {
      best = c;
      best_dist = d;
    }
  }
  return best;
}

CropSize select_crop_window(const BBox& bbox, const ZoomParams& params) {
  const double area = bbox.area();
  const std::span<const std::size_t> cands(params.crop_candidates);
  check_selection_inputs(area, cands);
  const double low = params.occupancy_low, high = params.occupancy_high;

  if (auto c = smallest_square_in_band(area, cands, low, high)) return {*c, *c};

  if (params.allow_rectangular) {
    std::optional<std::pair<std::size_t, std::size_t>> best;  // (short, long)
    auto better = [](std::pair<std::size_t, std::size_t> a, std::pair<std::size_t, std::size_t> b) {
      const auto area_a = a.first * a.second, area_b = b.first * b.second;
      if (area_a != area_b) return area_a < area_b;
      // Same area: the less elongated window.
      return a.second * b.first < b.second * a.first;
    };
    for (auto s : cands)
      for (auto l : cands) {
        if (!(s < l)) continue;
        const double ratio = area / (static_cast<double>(s) * static_cast<double>(l));
        if (!in_band(ratio, low, high)) continue;
        if (!best || better({s, l}, *best)) best = {s, l};
      }
    if (best) {
      if (bbox.w() >= bbox.h()) return {best->second, best->first};
      return {best->first, best->second};
    }
  }

  const auto c = select_crop_size(area, cands, low, high);
  return {c, c};
}

CropWindow place_window(FrameSize frame, Point center, std::size_t width, std::size_t height) {
  auto place = [](double c, std::size_t want, std::size_t limit, std::size_t& origin,
                  std::size_t& extent) {
    extent = std::min(want, limit);
    const long long start = std::llround(c) - static_cast<long long>(extent / 2);
    const long long max_start = static_cast<long long>(limit - extent);
    origin = static_cast<std::size_t>(std::clamp(start, 0LL, max_start));
  };
  CropWindow w;
  place(center.x, width, frame.width, w.x0, w.width);
  place(center.y, height, frame.height, w.y0, w.height);
  return w;
}

FrameBuffer crop(const FrameBuffer& frame, const CropWindow& window) {
  if (window.x0 + window.width > frame.width() || window.y0 + window.height > frame.height()) {
    throw ValidationError("crop window exceeds frame");
  }
  const std::size_t ch = frame.channels();
  FrameBuffer out(window.width, window.height, ch);
  auto src = frame.data();
  auto dst = out.data();
  for (std::size_t y = 0; y < window.height; ++y) {
    const auto row = src.subspan(((window.y0 + y) * frame.width() + window.x0) * ch,
                                 window.width * ch);
    std::copy(row.begin(), row.end(), dst.begin() + static_cast<std::ptrdiff_t>(y * window.width * ch));
  }
  return out;
}

FrameBuffer crop_region(const FrameBuffer& frame, Point center, std::size_t size) {
  return crop(frame, place_window({frame.width(), frame.height()}, center, size, size));
}

FrameBuffer resize_bilinear(const FrameBuffer& frame, std::size_t out_w, std::size_t out_h) {
  if (out_w == 0 || out_h == 0) throw ValidationError("resize target must be at least 1x1");
  if (frame.empty()) throw ValidationError("cannot resize an empty frame");
  const std::size_t in_w = frame.width(), in_h = frame.height(), ch = frame.channels();
  const double sx = static_cast<double>(in_w) / static_cast<double>(out_w);
  const double sy = static_cast<double>(in_h) / static_cast<double>(out_h);

  struct Tap {
    std::size_t i0, i1;
    double frac;
  };
  auto taps = [](std::size_t n_out, std::size_t n_in, double scale) {
    std::vector<Tap> t(n_out);
    for (std::size_t o = 0; o < n_out; ++o) {
      double s = (static_cast<double>(o) + 0.5) * scale - 0.5;
      s = std::clamp(s, 0.0, static_cast<double>(n_in - 1));
      const auto i0 = static_cast<std::size_t>(std::floor(s));
      t[o] = {i0, std::min(i0 + 1, n_in - 1), s - static_cast<double>(i0)};
    }
    return t;
  };
  const auto xs = taps(out_w, in_w, sx);
  const auto ys = taps(out_h, in_h, sy);

  FrameBuffer out(out_w, out_h, ch);
  for (std::size_t y = 0; y < out_h; ++y) {
    const auto& ty = ys[y];
    for (std::size_t x = 0; x < out_w; ++x) {
      const auto& tx = xs[x];
      for (std::size_t c = 0; c < ch; ++c) {
        const double top = frame.at(tx.i0, ty.i0, c) * (1.0 - tx.frac) + frame.at(tx.i1, ty.i0, c) * tx.frac;
        const double bot = frame.at(tx.i0, ty.i1, c) * (1.0 - tx.frac) + frame.at(tx.i1, ty.i1, c) * tx.frac;
        const double v = top * (1.0 - ty.frac) + bot * ty.frac;
        out.at(x, y, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }
  return out;
}

std::vector<ZoomPlan> plan_zoom(const Track& track, const ZoomParams& params) {
  params.validate();
  if (!track.complete()) {
    throw ValidationError("track covers " + std::to_string(track.entries().size()) + " of " +
                          std::to_string(track.frame_count()) + " frames");
  }
  std::vector<ZoomPlan> plan;
  plan.reserve(track.frame_count());
  for (const auto& e : track.entries()) {
    const CropSize size = select_crop_window(e.bbox, params);
    ZoomPlan p;
    p.window = place_window(track.frame_size(), e.bbox.center(), size.width, size.height);
    p.occupancy = e.bbox.area() / static_cast<double>(p.window.area());
    plan.push_back(p);
  }
  return plan;
}

std::vector<FrameBuffer> auto_zoom_clip(std::span<const FrameBuffer> frames, const Track& track,
                                        const ZoomParams& params) {
  if (frames.size() != track.frame_count()) {
    throw ValidationError("clip has " + std::to_string(frames.size()) + " frames but track has " +
                          std::to_string(track.frame_count()));
  }
  const auto plan = plan_zoom(track, params);
  std::vector<FrameBuffer> out;
  out.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    if (f.width() != track.frame_size().width || f.height() != track.frame_size().height) {
      throw ValidationError("frame " + std::to_string(i) + " size differs from the track's");
    }
    out.push_back(resize_bilinear(crop(f, plan[i].window), params.input_size, params.input_size));
  }
  return out;
}

}  // namespace autozoom::zoom
