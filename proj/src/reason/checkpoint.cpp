#include "autozoom/reason/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "autozoom/core/errors.hpp"
#include "autozoom/locator/detections.hpp"

namespace autozoom::reason {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_f64(std::ostream& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

class Reader {
 public:
  Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  void bytes(char* dst, std::size_t n, const char* what) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw ParseError(source_, 0, std::string("truncated checkpoint while reading ") + what);
    }
  }

  std::uint64_t raw(std::size_t n, const char* what) {
    unsigned char b[8] = {};
    bytes(reinterpret_cast<char*>(b), n, what);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }

  std::int32_t i32(const char* what) {
    return static_cast<std::int32_t>(static_cast<std::uint32_t>(raw(4, what)));
  }
  double f64(const char* what) { return std::bit_cast<double>(raw(8, what)); }

  [[noreturn]] void fail(const std::string& reason) const { throw ParseError(source_, 0, reason); }

  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::istream& in_;
  std::string source_;
};

std::vector<std::size_t*> size_fields(ReasonConfig& c) {
  return {&c.T, &c.D, &c.N, &c.M, &c.S, &c.L};
}

std::vector<std::size_t*> conv_fields(ReasonConfig& c) {
  return {&c.conv.channels,       &c.conv.spatial_filters, &c.conv.temporal_filters,
          &c.conv.spatial_kernel, &c.conv.temporal_kernel, &c.conv.spatial_padding,
          &c.conv.temporal_padding};
}

}  // namespace

void write_checkpoint(std::ostream& out, const ReasonConfig& cfg, const ModelWeights& w) {
  cfg.validate();
  ReasonConfig c = cfg;
  out.write(kCheckpointMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(kCheckpointVersion));
  for (auto* f : size_fields(c)) put_u32(out, static_cast<std::uint32_t>(*f));
  put_u32(out, static_cast<std::uint32_t>(c.variant));
  put_u32(out, static_cast<std::uint32_t>(c.num_classes));
  put_u32(out, static_cast<std::uint32_t>(c.in_features));
  put_u32(out, c.residual ? 1u : 0u);
  put_u32(out, c.positional_encoding ? 1u : 0u);
  for (auto* f : conv_fields(c)) put_u32(out, static_cast<std::uint32_t>(*f));

  const ModelWeights shape = zero_weights(cfg);
  const auto want = parameter_list(shape);
  const auto have = parameter_list(w);
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (want[i]->shape() != have[i]->shape()) {
      throw ValidationError("weight tensor " + std::to_string(i) + " has shape " +
                            tensor::shape_string(have[i]->shape()) + ", config needs " +
                            tensor::shape_string(want[i]->shape()));
    }
    for (double v : have[i]->values()) put_f64(out, v);
  }
  if (!out) throw IoError("failed writing checkpoint");
}

void save_checkpoint(const std::filesystem::path& path, const ReasonConfig& cfg,
                     const ModelWeights& w) {
  std::ostringstream buf(std::ios::binary);
  write_checkpoint(buf, cfg, w);
  locator::write_file_atomically(path, buf.str());
}

Checkpoint read_checkpoint(std::istream& in, const std::string& source) {
  Reader r(in, source);
  char magic[4];
  r.bytes(magic, 4, "magic");
  if (std::memcmp(magic, kCheckpointMagic, 4) != 0) r.fail("not a checkpoint (bad magic)");
  const auto version = r.i32("version");
  if (version != kCheckpointVersion) {
    r.fail("unsupported checkpoint version " + std::to_string(version));
  }

  auto field = [&](const char* what) {
    const auto v = r.i32(what);
    if (v < 0) r.fail(std::string("negative config field ") + what);
    return static_cast<std::size_t>(v);
  };

  Checkpoint ck;
  ReasonConfig& c = ck.config;
  for (auto* f : size_fields(c)) *f = field("config");
  const auto variant = field("variant");
  if (variant > 2) r.fail("unknown variant code " + std::to_string(variant));
  c.variant = static_cast<Variant>(variant);
  c.num_classes = field("num_classes");
  c.in_features = field("in_features");
  c.residual = field("residual") != 0;
  c.positional_encoding = field("positional_encoding") != 0;
  for (auto* f : conv_fields(c)) *f = field("conv config");
  try {
    c.validate();
  } catch (const ValidationError& e) {
    r.fail(e.what());
  }

  ck.weights = zero_weights(c);
  for (auto* t : parameter_list(ck.weights)) {
    for (std::size_t i = 0; i < t->size(); ++i) (*t)[i] = r.f64("weights");
  }
  if (!r.at_end()) r.fail("trailing bytes after weights");
  return ck;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  return read_checkpoint(in, path.string());
}

}  // namespace autozoom::reason
