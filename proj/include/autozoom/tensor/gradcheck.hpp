#pragma once

#include <functional>

#include "autozoom/tensor/tensor.hpp"

namespace autozoom::tensor {

// Central-difference comparison of an analytic gradient of a scalar function.
// Returns max over coordinates of
//   |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
double finite_diff_check(const std::function<double(const Tensor&)>& f, const Tensor& x,
                         const Tensor& analytic_grad, double eps = 1e-5);

}  // namespace autozoom::tensor
