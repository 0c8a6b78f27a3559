#pragma once

#include <cstddef>

#include "autozoom/tensor/tensor.hpp"

namespace autozoom::tensor {

// All ops throw ValidationError on shape violations. Only matmul and the
// convolutions count MACs; elementwise work and softmax exponentials are free.

// [m x k] * [k x n] -> [m x n], counts m*n*k.
Tensor matmul(const Tensor& a, const Tensor& b, FlopCounter* flops = nullptr);
Tensor transpose(const Tensor& a);

Tensor add(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);

// Max-subtracted softmax over each row of a rank-2 tensor.
Tensor softmax_rows(const Tensor& x);

// Cross-correlation (no kernel flip) with zero padding.
// input [C x T], kernels [F x C x k] -> [F x T'].
Tensor conv1d(const Tensor& input, const Tensor& kernels, std::size_t stride,
              std::size_t padding, FlopCounter* flops = nullptr);

// input [C x H x W], kernels [F x C x kh x kw] -> [F x H' x W'].
Tensor conv2d(const Tensor& input, const Tensor& kernels, std::size_t stride,
              std::size_t padding, FlopCounter* flops = nullptr);

struct Conv3dOptions {
  std::size_t temporal_stride = 1;
  std::size_t spatial_stride = 1;
  std::size_t temporal_padding = 0;
  std::size_t spatial_padding = 0;
};

// input [C x T x H x W], kernels [F x C x kt x kh x kw] -> [F x T' x H' x W'].
Tensor conv3d(const Tensor& input, const Tensor& kernels, const Conv3dOptions& options,
              FlopCounter* flops = nullptr);

// floor((n + 2p - k) / s) + 1; throws when the kernel does not fit.
std::size_t conv_output_size(std::size_t n, std::size_t kernel, std::size_t stride,
                             std::size_t padding);

}  // namespace autozoom::tensor
