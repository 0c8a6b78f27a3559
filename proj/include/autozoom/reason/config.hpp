#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace autozoom::reason {

enum class Variant : int { Attention = 0, Conv2Plus1 = 1, Conv3D = 2 };

std::string_view variant_name(Variant v) noexcept;
// "attention", "conv2plus1" or "conv3d"; throws ValidationError otherwise.
Variant parse_variant(std::string_view name);

// Convolutional paths: spatial kernel k x k over C channels into
// spatial_filters maps, temporal kernel of width temporal_kernel into
// temporal_filters features.
struct ConvDims {
  std::size_t channels = 3;
  std::size_t spatial_filters = 4;
  std::size_t temporal_filters = 4;
  std::size_t spatial_kernel = 3;
  std::size_t temporal_kernel = 3;
  std::size_t spatial_padding = 1;
  std::size_t temporal_padding = 1;

  friend bool operator==(const ConvDims&, const ConvDims&) = default;
};

struct ReasonConfig {
  std::size_t T = 8;   // frames
  std::size_t D = 16;  // frame embedding width
  std::size_t N = 4;   // latent queries
  std::size_t M = 16;  // latent width
  std::size_t S = 16;  // projected key/value width
  std::size_t L = 1;   // self-attention layers
  Variant variant = Variant::Attention;
  std::size_t num_classes = 4;
  // Width of a flattened input frame for the learned frame embedding; 0 means
  // callers pass T x D embeddings directly.
  std::size_t in_features = 0;
  bool residual = true;
  bool positional_encoding = true;
  ConvDims conv;

  // Throws ValidationError if any dimension is zero.
  void validate() const;

  friend bool operator==(const ReasonConfig&, const ReasonConfig&) = default;
};

}  // namespace autozoom::reason
