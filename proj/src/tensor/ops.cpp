#include "autozoom/tensor/ops.hpp"

#include <algorithm>
#include <cmath>

#include "autozoom/core/errors.hpp"

namespace autozoom::tensor {

namespace {

void require_rank(const Tensor& t, std::size_t rank, const char* what) {
  if (t.rank() != rank) {
    throw ValidationError(std::string(what) + " expects rank " + std::to_string(rank) +
                          ", got " + shape_string(t.shape()));
  }
}

void count(FlopCounter* flops, std::uint64_t macs) {
  if (flops) flops->add(macs);
}

}  // namespace

std::size_t conv_output_size(std::size_t n, std::size_t kernel, std::size_t stride,
                             std::size_t padding) {
  if (stride == 0) throw ValidationError("convolution stride must be positive");
  if (kernel == 0 || kernel > n + 2 * padding) {
    throw ValidationError("kernel of size " + std::to_string(kernel) +
                          " does not fit padded input of size " + std::to_string(n + 2 * padding));
  }
  return (n + 2 * padding - kernel) / stride + 1;
}

Tensor matmul(const Tensor& a, const Tensor& b, FlopCounter* flops) {
  require_rank(a, 2, "matmul");
  require_rank(b, 2, "matmul");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw ValidationError("matmul inner dimension mismatch: " + shape_string(a.shape()) + " * " +
                          shape_string(b.shape()));
  }
  Tensor c({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a(i, p);
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aip * b(p, j);
    }
  }
  count(flops, static_cast<std::uint64_t>(m) * n * k);
  return c;
}

Tensor transpose(const Tensor& a) {
  require_rank(a, 2, "transpose");
  Tensor t({a.dim(1), a.dim(0)});
  for (std::size_t i = 0; i < a.dim(0); ++i)
    for (std::size_t j = 0; j < a.dim(1); ++j) t(j, i) = a(i, j);
  return t;
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ValidationError("add shape mismatch " + shape_string(a.shape()) + " vs " +
                          shape_string(b.shape()));
  }
  Tensor c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return c;
}

Tensor scale(const Tensor& a, double factor) {
  Tensor c = a;
  for (auto& v : c.data()) v *= factor;
  return c;
}

Tensor softmax_rows(const Tensor& x) {
  require_rank(x, 2, "softmax_rows");
  Tensor y = x;
  const std::size_t cols = x.dim(1);
  for (std::size_t r = 0; r < x.dim(0); ++r) {
    double mx = -INFINITY;
    for (std::size_t c = 0; c < cols; ++c) mx = std::max(mx, x(r, c));
    double z = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      y(r, c) = std::exp(x(r, c) - mx);
      z += y(r, c);
    }
    for (std::size_t c = 0; c < cols; ++c) y(r, c) /= z;
  }
  return y;
}

Tensor conv1d(const Tensor& input, const Tensor& kernels, std::size_t stride, std::size_t padding,
              FlopCounter* flops) {
  require_rank(input, 2, "conv1d input");
  require_rank(kernels, 3, "conv1d kernels");
  const std::size_t C = input.dim(0), T = input.dim(1);
  const std::size_t F = kernels.dim(0), K = kernels.dim(2);
  if (kernels.dim(1) != C) throw ValidationError("conv1d channel mismatch");
  const std::size_t To = conv_output_size(T, K, stride, padding);

  Tensor out({F, To});
  const auto in = input.data();
  const auto ker = kernels.data();
  for (std::size_t f = 0; f < F; ++f) {
    for (std::size_t t = 0; t < To; ++t) {
      double acc = 0.0;
      for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t k = 0; k < K; ++k) {
          const auto src = static_cast<std::ptrdiff_t>(t * stride + k) -
                           static_cast<std::ptrdiff_t>(padding);
          if (src < 0 || src >= static_cast<std::ptrdiff_t>(T)) continue;
          acc += ker[(f * C + c) * K + k] * in[c * T + static_cast<std::size_t>(src)];
        }
      }
      out[f * To + t] = acc;
    }
  }
  count(flops, static_cast<std::uint64_t>(F) * To * C * K);
  return out;
}

Tensor conv2d(const Tensor& input, const Tensor& kernels, std::size_t stride, std::size_t padding,
              FlopCounter* flops) {
  require_rank(input, 3, "conv2d input");
  require_rank(kernels, 4, "conv2d kernels");
  // Same arithmetic as a 3-D convolution over a single frame.
  const std::size_t C = input.dim(0), H = input.dim(1), W = input.dim(2);
  const std::size_t F = kernels.dim(0), KH = kernels.dim(2), KW = kernels.dim(3);
  if (kernels.dim(1) != C) throw ValidationError("conv2d channel mismatch");
  Tensor volume = input.reshaped({C, 1, H, W});
  Tensor k3 = kernels.reshaped({F, C, 1, KH, KW});
  Conv3dOptions opt;
  opt.spatial_stride = stride;
  opt.spatial_padding = padding;
  Tensor out = conv3d(volume, k3, opt, flops);
  return out.reshaped({F, out.dim(2), out.dim(3)});
}

Tensor conv3d(const Tensor& input, const Tensor& kernels, const Conv3dOptions& opt,
              FlopCounter* flops) {
  require_rank(input, 4, "conv3d input");
  require_rank(kernels, 5, "conv3d kernels");
  const std::size_t C = input.dim(0), T = input.dim(1), H = input.dim(2), W = input.dim(3);
  const std::size_t F = kernels.dim(0), KT = kernels.dim(2), KH = kernels.dim(3),
                    KW = kernels.dim(4);
  if (kernels.dim(1) != C) throw ValidationError("conv3d channel mismatch");
  const std::size_t To = conv_output_size(T, KT, opt.temporal_stride, opt.temporal_padding);
  const std::size_t Ho = conv_output_size(H, KH, opt.spatial_stride, opt.spatial_padding);
  const std::size_t Wo = conv_output_size(W, KW, opt.spatial_stride, opt.spatial_padding);

  Tensor out({F, To, Ho, Wo});
  const auto in = input.data();
  const auto ker = kernels.data();
  auto shifted = [](std::size_t o, std::size_t s, std::size_t k, std::size_t p) {
    return static_cast<std::ptrdiff_t>(o * s + k) - static_cast<std::ptrdiff_t>(p);
  };
  for (std::size_t f = 0; f < F; ++f)
    for (std::size_t t = 0; t < To; ++t)
      for (std::size_t y = 0; y < Ho; ++y)
        for (std::size_t x = 0; x < Wo; ++x) {
          double acc = 0.0;
          for (std::size_t c = 0; c < C; ++c)
            for (std::size_t kt = 0; kt < KT; ++kt) {
              const auto st = shifted(t, opt.temporal_stride, kt, opt.temporal_padding);
              if (st < 0 || st >= static_cast<std::ptrdiff_t>(T)) continue;
              for (std::size_t ky = 0; ky < KH; ++ky) {
                const auto sy = shifted(y, opt.spatial_stride, ky, opt.spatial_padding);
                if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(H)) continue;
                const std::size_t row =
                    ((c * T + static_cast<std::size_t>(st)) * H + static_cast<std::size_t>(sy)) * W;
                const std::size_t krow = (((f * C + c) * KT + kt) * KH + ky) * KW;
                for (std::size_t kx = 0; kx < KW; ++kx) {
                  const auto sx = shifted(x, opt.spatial_stride, kx, opt.spatial_padding);
                  if (sx < 0 || sx >= static_cast<std::ptrdiff_t>(W)) continue;
                  acc += ker[krow + kx] * in[row + static_cast<std::size_t>(sx)];
                }
              }
            }
          out[((f * To + t) * Ho + y) * Wo + x] = acc;
        }
  count(flops, static_cast<std::uint64_t>(F) * To * Ho * Wo * C * KT * KH * KW);
  return out;
}

}  // namespace autozoom::tensor
