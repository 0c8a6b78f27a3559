#include "autozoom/core/frame_buffer.hpp"

#include "autozoom/core/errors.hpp"

namespace autozoom {

namespace {

void check_channels(std::size_t channels) {
  if (channels != 1 && channels != 3) {
    throw ValidationError("frame buffers hold 1 or 3 channels, got " + std::to_string(channels));
  }
}

}  // namespace

FrameBuffer::FrameBuffer(std::size_t width, std::size_t height, std::size_t channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  check_channels(channels);
  data_.assign(width * height * channels, fill);
}

FrameBuffer::FrameBuffer(std::size_t width, std::size_t height, std::size_t channels,
                         std::vector<float> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_channels(channels);
  if (data_.size() != width * height * channels) {
    throw ValidationError("frame buffer data length does not match width*height*channels");
  }
}

}  // namespace autozoom
