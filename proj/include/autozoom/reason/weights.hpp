#pragma once

#include <cstdint>
#include <vector>

#include "autozoom/reason/config.hpp"
#include "autozoom/tensor/tensor.hpp"

namespace autozoom::reason {

using tensor::Tensor;

// Latents -> queries [M x S]; frame embeddings -> keys and values [D x S];
// attended values back to latent width [S x M].
struct CrossAttentionWeights {
  Tensor query;
  Tensor key;
  Tensor value;
  Tensor out;
};

// Projections [M x S] and output projection [S x M].
struct SelfAttentionWeights {
  Tensor query;
  Tensor key;
  Tensor value;
  Tensor out;
};

struct AttentionWeights {
  CrossAttentionWeights cross;
  std::vector<SelfAttentionWeights> layers;
};

// spatial [F1 x C x k x k] and temporal [F2 x F1 x kt] for the (2D+1) path,
// volume [F2 x C x kt x k x k] for the 3-D path.
struct ConvWeights {
  Tensor spatial;
  Tensor temporal;
  Tensor volume;
};

struct HeadWeights {
  Tensor weight;  // [features x classes]
  Tensor bias;    // [classes]
};

// Only the tensors the configured variant uses are non-empty.
struct ModelWeights {
  Tensor embed;    // [in_features x D], attention variant with in_features > 0
  Tensor latents;  // [N x M]
  AttentionWeights attention;
  ConvWeights conv;
  HeadWeights head;
};

// Zero tensors of the right shapes for cfg.
ModelWeights zero_weights(const ReasonConfig& cfg);

// Seeded Glorot-uniform init. Conv3D volume kernels are built from the same
// draws as the (2D+1) kernels (see separable_volume), so both conv variants
// start out computing identical features.
ModelWeights init_weights(const ReasonConfig& cfg, std::uint64_t seed);

// Every tensor in declaration order, empty ones included.
std::vector<Tensor*> parameter_list(ModelWeights& w);
std::vector<const Tensor*> parameter_list(const ModelWeights& w);

// volume[f2][c][t][y][x] = sum_f1 temporal[f2][f1][t] * spatial[f1][c][y][x]
Tensor separable_volume(const Tensor& spatial, const Tensor& temporal);

}  // namespace autozoom::reason
