#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "autozoom/reason/config.hpp"
#include "autozoom/reason/weights.hpp"

namespace autozoom::reason {

inline constexpr char kCheckpointMagic[4] = {'A', 'Z', 'T', 'R'};
inline constexpr std::int32_t kCheckpointVersion = 1;

// Binary layout, all little-endian:
//   "AZTR", int32 version, int32 config fields
//     (T, D, N, M, S, L, variant, num_classes, in_features, residual,
//      positional_encoding, conv.channels, conv.spatial_filters,
//      conv.temporal_filters, conv.spatial_kernel, conv.temporal_kernel,
//      conv.spatial_padding, conv.temporal_padding),
//   then every weight tensor in parameter_list order as float64.
struct Checkpoint {
  ReasonConfig config;
  ModelWeights weights;
};

void write_checkpoint(std::ostream& out, const ReasonConfig& cfg, const ModelWeights& w);
void save_checkpoint(const std::filesystem::path& path, const ReasonConfig& cfg,
                     const ModelWeights& w);

// Throws ParseError on a bad magic/version or truncated payload, IoError if
// the file cannot be opened.
Checkpoint read_checkpoint(std::istream& in, const std::string& source = "<stream>");
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace autozoom::reason
