#include "autozoom/locator/detections.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unistd.h>

#include "autozoom/core/errors.hpp"

namespace autozoom::locator {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

template <typename T>
bool parse_field(std::string_view text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

struct Record {
  std::size_t frame = 0;
  double cx = 0, cy = 0, w = 0, h = 0, score = 0;
  char provenance = 0;
};

// Returns false for blank/comment lines.
bool parse_record(std::string_view line, std::size_t expected_fields, const std::string& source,
                  std::size_t lineno, Record& rec) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  auto f = split_fields(line);
  if (f.empty()) return false;
  if (f.size() != expected_fields) {
    throw ParseError(source, lineno,
                     "expected " + std::to_string(expected_fields) + " fields, got " +
                         std::to_string(f.size()));
  }
  if (!parse_field(f[0], rec.frame)) throw ParseError(source, lineno, "bad frame index");
  double* nums[] = {&rec.cx, &rec.cy, &rec.w, &rec.h, &rec.score};
  for (std::size_t k = 0; k < 5; ++k) {
    if (!parse_field(f[k + 1], *nums[k])) {
      throw ParseError(source, lineno, "bad number '" + std::string(f[k + 1]) + "'");
    }
  }
  if (expected_fields == 7) {
    if (f[6].size() != 1 || !provenance_from_code(f[6][0])) {
      throw ParseError(source, lineno, "provenance must be one of D, P, I");
    }
    rec.provenance = f[6][0];
  }
  return true;
}

BBox make_box(const Record& r, const std::string& source, std::size_t lineno) {
  try {
    return BBox(r.cx, r.cy, r.w, r.h, r.score);
  } catch (const ValidationError& e) {
    throw ParseError(source, lineno, e.what());
  }
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

void write_box_fields(std::ostream& out, std::size_t frame, const BBox& b) {
  out << frame << ' ' << format_number(b.cx()) << ' ' << format_number(b.cy()) << ' '
      << format_number(b.w()) << ' ' << format_number(b.h()) << ' ' << format_number(b.score());
}

}  // namespace

std::size_t DetectionSet::box_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [frame, boxes] : by_frame) n += boxes.size();
  return n;
}

const std::vector<BBox>* DetectionSet::find(std::size_t frame_index) const noexcept {
  auto it = by_frame.find(frame_index);
  return it == by_frame.end() ? nullptr : &it->second;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string());
  }
}

DetectionSet parse_detections(std::istream& in, const std::string& source) {
  DetectionSet dets;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    Record r;
    if (!parse_record(line, 6, source, lineno, r)) continue;
    dets.by_frame[r.frame].push_back(make_box(r, source, lineno));
  }
  if (in.bad()) throw IoError("read error on " + source);
  return dets;
}

DetectionSet load_detections(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return parse_detections(in, path.string());
}

void write_detections(std::ostream& out, const DetectionSet& dets) {
  out << "# frame_index cx cy w h score\n";
  for (const auto& [frame, boxes] : dets.by_frame) {
    for (const auto& b : boxes) {
      write_box_fields(out, frame, b);
      out << '\n';
    }
  }
}

void save_detections(const std::filesystem::path& path, const DetectionSet& dets) {
  std::ostringstream s;
  write_detections(s, dets);
  write_file_atomically(path, s.str());
}

Track parse_track(std::istream& in, const std::string& source,
                  std::optional<FrameSize> frame_size) {
  std::vector<TrackEntry> entries;
  std::optional<std::size_t> frame_count;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (view.starts_with("# track ")) {
      std::size_t frames = 0, width = 0, height = 0;
      int matched = 0;
      for (auto field : split_fields(view.substr(8))) {
        auto eq = field.find('=');
        if (eq == std::string_view::npos) continue;
        auto key = field.substr(0, eq);
        auto val = field.substr(eq + 1);
        if (key == "frames" && parse_field(val, frames)) ++matched;
        if (key == "width" && parse_field(val, width)) ++matched;
        if (key == "height" && parse_field(val, height)) ++matched;
      }
      if (matched != 3) throw ParseError(source, lineno, "malformed track header");
      frame_count = frames;
      frame_size = FrameSize{width, height};
      continue;
    }
    Record r;
    if (!parse_record(view, 7, source, lineno, r)) continue;
    entries.push_back(TrackEntry{r.frame, make_box(r, source, lineno),
                                 *provenance_from_code(r.provenance)});
  }
  if (in.bad()) throw IoError("read error on " + source);
  if (!frame_size) throw ParseError(source, lineno, "track has no header and no frame size given");
  if (!frame_count) {
    std::size_t last = 0;
    for (const auto& e : entries) last = std::max(last, e.frame_index + 1);
    frame_count = last;
  }
  try {
    return Track(*frame_count, *frame_size, std::move(entries));
  } catch (const ValidationError& e) {
    throw ParseError(source, lineno, e.what());
  }
}

Track load_track(const std::filesystem::path& path, std::optional<FrameSize> frame_size) {
  auto in = open_for_read(path);
  return parse_track(in, path.string(), frame_size);
}

void write_track(std::ostream& out, const Track& track) {
  out << "# track frames=" << track.frame_count() << " width=" << track.frame_size().width
      << " height=" << track.frame_size().height << '\n';
  out << "# frame_index cx cy w h score provenance\n";
  for (const auto& e : track.entries()) {
    write_box_fields(out, e.frame_index, e.bbox);
    out << ' ' << provenance_code(e.provenance) << '\n';
  }
}

void save_track(const std::filesystem::path& path, const Track& track) {
  std::ostringstream s;
  write_track(s, track);
  write_file_atomically(path, s.str());
}

std::vector<BBox> filter_by_score(const std::vector<BBox>& dets, double threshold) {
  std::vector<BBox> kept;
  std::copy_if(dets.begin(), dets.end(), std::back_inserter(kept),
               [threshold](const BBox& b) { return b.score() > threshold; });
  return kept;
}

std::optional<BBox> best_detection(const std::vector<BBox>& dets) {
  if (dets.empty()) return std::nullopt;
  const BBox* best = &dets.front();
  for (const auto& b : dets) {
    if (b.score() > best->score() || (b.score() == best->score() && b.area() > best->area())) {
      best = &b;
    }
  }
  return *best;
}

}  // namespace autozoom::locator
