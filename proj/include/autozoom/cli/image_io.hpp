#pragma once

#include <filesystem>
#include <string>

#include "autozoom/core/frame_buffer.hpp"

namespace autozoom::cli {

// Binary PPM (P6, maxval 255). Gray frames are written with the value
// replicated into all three channels; values are rounded to 8 bits.
std::string encode_ppm(const FrameBuffer& frame);
void write_ppm(const std::filesystem::path& path, const FrameBuffer& frame);

// Reads P6 (3 channels) or P5 (1 channel), 8-bit. Throws ParseError on a
// malformed header or short payload, IoError if the file cannot be read.
FrameBuffer decode_ppm(const std::string& bytes, const std::string& source = "<memory>");
FrameBuffer read_ppm(const std::filesystem::path& path);

}  // namespace autozoom::cli
