#include "autozoom/cli/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "autozoom/core/errors.hpp"
#include "autozoom/locator/detections.hpp"

namespace autozoom::cli {

namespace {

unsigned char to_byte(float v) {
  const float c = std::clamp(v, 0.0f, 1.0f);
  return static_cast<unsigned char>(std::lround(c * 255.0f));
}

class HeaderReader {
 public:
  HeaderReader(const std::string& bytes, const std::string& source)
      : bytes_(bytes), source_(source) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t number(const char* what) {
    skip_space_and_comments();
    std::size_t v = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      ++pos_;
      if (++digits > 9) throw ParseError(source_, 1, std::string(what) + " too large");
    }
    if (digits == 0) throw ParseError(source_, 1, std::string("expected ") + what);
    return v;
  }

  std::size_t pos_ = 0;

 private:
  const std::string& bytes_;
  const std::string& source_;
};

}  // namespace

std::string encode_ppm(const FrameBuffer& frame) {
  if (frame.empty()) throw ValidationError("cannot encode an empty frame");
  std::string out = "P6\n" + std::to_string(frame.width()) + " " + std::to_string(frame.height()) +
                    "\n255\n";
  out.reserve(out.size() + frame.width() * frame.height() * 3);
  for (std::size_t y = 0; y < frame.height(); ++y) {
    for (std::size_t x = 0; x < frame.width(); ++x) {
      for (std::size_t c = 0; c < 3; ++c) {
        const std::size_t src = frame.channels() == 1 ? 0 : c;
        out.push_back(static_cast<char>(to_byte(frame.at(x, y, src))));
      }
    }
  }
  return out;
}

void write_ppm(const std::filesystem::path& path, const FrameBuffer& frame) {
  locator::write_file_atomically(path, encode_ppm(frame));
}

FrameBuffer decode_ppm(const std::string& bytes, const std::string& source) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '5')) {
    throw ParseError(source, 1, "not a binary PPM/PGM (expected P6 or P5)");
  }
  const std::size_t channels = bytes[1] == '6' ? 3 : 1;
  HeaderReader r(bytes, source);
  r.pos_ = 2;
  const std::size_t w = r.number("width");
  const std::size_t h = r.number("height");
  const std::size_t maxval = r.number("maxval");
  if (w == 0 || h == 0) throw ParseError(source, 1, "image has zero size");
  if (maxval != 255) throw ParseError(source, 1, "only 8-bit images (maxval 255) are supported");
  if (r.pos_ >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[r.pos_]))) {
    throw ParseError(source, 1, "missing whitespace after header");
  }
  ++r.pos_;
  const std::size_t n = w * h * channels;
  if (bytes.size() - r.pos_ < n) throw ParseError(source, 1, "truncated pixel data");
  std::vector<float> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    data[i] = static_cast<float>(static_cast<unsigned char>(bytes[r.pos_ + i])) / 255.0f;
  }
  return FrameBuffer(w, h, channels, std::move(data));
}

FrameBuffer read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading image " + path.string());
  return decode_ppm(bytes, path.string());
}

}  // namespace autozoom::cli
