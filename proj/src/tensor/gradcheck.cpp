#include "autozoom/tensor/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "autozoom/core/errors.hpp"

namespace autozoom::tensor {

double finite_diff_check(const std::function<double(const Tensor&)>& f, const Tensor& x,
                         const Tensor& analytic_grad, double eps) {
  if (analytic_grad.shape() != x.shape()) {
    throw ValidationError("analytic gradient shape " + shape_string(analytic_grad.shape()) +
                          " does not match input " + shape_string(x.shape()));
  }
  Tensor probe = x;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + eps;
    const double up = f(probe);
    probe[i] = orig - eps;
    const double down = f(probe);
    probe[i] = orig;
    const double numeric = (up - down) / (2.0 * eps);
    const double analytic = analytic_grad[i];
    const double denom = std::max(1e-8, std::abs(analytic) + std::abs(numeric));
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
  }
  return worst;
}

}  // namespace autozoom::tensor
