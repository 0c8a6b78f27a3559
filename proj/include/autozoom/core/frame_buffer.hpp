#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace autozoom {

// Dense row-major image, interleaved channels, values in [0,1].
class FrameBuffer {
 public:
  FrameBuffer() = default;
  FrameBuffer(std::size_t width, std::size_t height, std::size_t channels, float fill = 0.0f);
  FrameBuffer(std::size_t width, std::size_t height, std::size_t channels,
              std::vector<float> data);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }

  float at(std::size_t x, std::size_t y, std::size_t c = 0) const {
    return data_[(y * width_ + x) * channels_ + c];
  }
  float& at(std::size_t x, std::size_t y, std::size_t c = 0) {
    return data_[(y * width_ + x) * channels_ + c];
  }

  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }

  friend bool operator==(const FrameBuffer&, const FrameBuffer&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::size_t channels_ = 1;
  std::vector<float> data_;
};

}  // namespace autozoom
