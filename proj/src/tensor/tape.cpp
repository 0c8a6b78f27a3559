#include "autozoom/tensor/tape.hpp"

#include <cmath>

#include "autozoom/core/errors.hpp"
#include "autozoom/tensor/ops.hpp"

namespace autozoom::tensor {

namespace {

void accumulate(std::optional<Tensor>& slot, const Tensor& g) {
  if (!slot) {
    slot = g;
    return;
  }
  for (std::size_t i = 0; i < g.size(); ++i) (*slot)[i] += g[i];
}

std::size_t logits_width(const Tensor& t) {
  if (t.rank() == 1) return t.dim(0);
  if (t.rank() == 2 && t.dim(0) == 1) return t.dim(1);
  throw ValidationError("cross_entropy expects [K] or [1 x K] logits, got " +
                        shape_string(t.shape()));
}

}  // namespace

const Tensor& Gradients::operator[](Var v) const {
  if (!has(v)) throw ValidationError("no gradient recorded for tape value " + std::to_string(v.id()));
  return *grads_[v.id()];
}

void Tape::check_open() const {
  if (consumed_) throw ValidationError("tape already differentiated; record a new graph");
}

Var Tape::push(Node node) {
  check_open();
#ifndef NDEBUG
  if (!node.value.all_finite()) throw ValidationError("non-finite value produced on tape");
#endif
  nodes_.push_back(std::move(node));
  return Var(nodes_.size() - 1);
}

Var Tape::leaf(Tensor value, bool requires_grad) {
  Node n{Op::Leaf, std::move(value)};
  n.requires_grad = requires_grad;
  return push(std::move(n));
}

Var Tape::matmul(Var a, Var b) {
  Node n{Op::MatMul, tensor::matmul(value(a), value(b), &flops_)};
  n.lhs = a.id();
  n.rhs = b.id();
  n.requires_grad = nodes_[a.id()].requires_grad || nodes_[b.id()].requires_grad;
  return push(std::move(n));
}

Var Tape::transpose(Var a) {
  Node n{Op::Transpose, tensor::transpose(value(a))};
  n.lhs = a.id();
  n.requires_grad = nodes_[a.id()].requires_grad;
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  Node n{Op::Add, tensor::add(value(a), value(b))};
  n.lhs = a.id();
  n.rhs = b.id();
  n.requires_grad = nodes_[a.id()].requires_grad || nodes_[b.id()].requires_grad;
  return push(std::move(n));
}

Var Tape::add_row(Var x, Var row) {
  const Tensor& xv = value(x);
  const Tensor& rv = value(row);
  if (xv.rank() != 2 || rv.size() != xv.dim(1)) {
    throw ValidationError("add_row shape mismatch " + shape_string(xv.shape()) + " + " +
                          shape_string(rv.shape()));
  }
  Tensor out = xv;
  for (std::size_t r = 0; r < xv.dim(0); ++r)
    for (std::size_t c = 0; c < xv.dim(1); ++c) out(r, c) += rv[c];
  Node n{Op::AddRow, std::move(out)};
  n.lhs = x.id();
  n.rhs = row.id();
  n.requires_grad = nodes_[x.id()].requires_grad || nodes_[row.id()].requires_grad;
  return push(std::move(n));
}

Var Tape::scale(Var a, double factor) {
  Node n{Op::Scale, tensor::scale(value(a), factor)};
  n.lhs = a.id();
  n.factor = factor;
  n.requires_grad = nodes_[a.id()].requires_grad;
  return push(std::move(n));
}

Var Tape::softmax_rows(Var x) {
  Node n{Op::Softmax, tensor::softmax_rows(value(x))};
  n.lhs = x.id();
  n.requires_grad = nodes_[x.id()].requires_grad;
  return push(std::move(n));
}

Var Tape::mean_rows(Var x) {
  const Tensor& xv = value(x);
  if (xv.rank() != 2 || xv.dim(0) == 0) throw ValidationError("mean_rows expects a non-empty matrix");
  Tensor out({1, xv.dim(1)});
  for (std::size_t r = 0; r < xv.dim(0); ++r)
    for (std::size_t c = 0; c < xv.dim(1); ++c) out(0, c) += xv(r, c);
  for (auto& v : out.data()) v /= static_cast<double>(xv.dim(0));
  Node n{Op::MeanRows, std::move(out)};
  n.lhs = x.id();
  n.requires_grad = nodes_[x.id()].requires_grad;
  return push(std::move(n));
}

Var Tape::sum(Var x) {
  double s = 0.0;
  for (double v : value(x).data()) s += v;
  Node n{Op::Sum, Tensor({1}, std::vector<double>{s})};
  n.lhs = x.id();
  n.requires_grad = nodes_[x.id()].requires_grad;
  return push(std::move(n));
}

Var Tape::cross_entropy(Var logits, std::size_t label) {
  const Tensor& z = value(logits);
  const std::size_t k = logits_width(z);
  if (label >= k) throw ValidationError("label " + std::to_string(label) + " out of range");
  double mx = -INFINITY;
  for (double v : z.data()) mx = std::max(mx, v);
  double lse = 0.0;
  for (double v : z.data()) lse += std::exp(v - mx);
  lse = mx + std::log(lse);
  Node n{Op::CrossEntropy, Tensor({1}, std::vector<double>{lse - z[label]})};
  n.lhs = logits.id();
  n.label = label;
  n.requires_grad = nodes_[logits.id()].requires_grad;
  return push(std::move(n));
}

Gradients Tape::backward(Var output) {
  if (value(output).size() != 1) {
    throw ValidationError("backward without an explicit gradient needs a scalar output");
  }
  return backward(output, Tensor(value(output).shape(), 1.0));
}

Gradients Tape::backward(Var output, const Tensor& output_grad) {
  check_open();
  if (output_grad.shape() != value(output).shape()) {
    throw ValidationError("output gradient shape " + shape_string(output_grad.shape()) +
                          " does not match output " + shape_string(value(output).shape()));
  }
  consumed_ = true;

  Gradients result;
  auto& g = result.grads_;
  g.resize(nodes_.size());
  g[output.id()] = output_grad;

  for (std::size_t id = output.id() + 1; id-- > 0;) {
    const Node& n = nodes_[id];
    if (!n.requires_grad || !g[id]) continue;
    const Tensor& dy = *g[id];
    const bool lhs_grad = n.op != Op::Leaf && nodes_[n.lhs].requires_grad;
    const bool rhs_grad = (n.op == Op::MatMul || n.op == Op::Add || n.op == Op::AddRow) &&
                          nodes_[n.rhs].requires_grad;
    switch (n.op) {
      case Op::Leaf:
        break;
      case Op::MatMul:
        if (lhs_grad) accumulate(g[n.lhs], tensor::matmul(dy, tensor::transpose(nodes_[n.rhs].value)));
        if (rhs_grad) accumulate(g[n.rhs], tensor::matmul(tensor::transpose(nodes_[n.lhs].value), dy));
        break;
      case Op::Transpose:
        if (lhs_grad) accumulate(g[n.lhs], tensor::transpose(dy));
        break;
      case Op::Add:
        if (lhs_grad) accumulate(g[n.lhs], dy);
        if (rhs_grad) accumulate(g[n.rhs], dy);
        break;
      case Op::AddRow: {
        if (lhs_grad) accumulate(g[n.lhs], dy);
        if (rhs_grad) {
          Tensor dr(nodes_[n.rhs].value.shape());
          for (std::size_t r = 0; r < dy.dim(0); ++r)
            for (std::size_t c = 0; c < dy.dim(1); ++c) dr[c] += dy(r, c);
          accumulate(g[n.rhs], dr);
        }
        break;
      }
      case Op::Scale:
        if (lhs_grad) accumulate(g[n.lhs], tensor::scale(dy, n.factor));
        break;
      case Op::Softmax: {
        if (!lhs_grad) break;
        const Tensor& y = n.value;
        Tensor dx(y.shape());
        for (std::size_t r = 0; r < y.dim(0); ++r) {
          double dot = 0.0;
          for (std::size_t c = 0; c < y.dim(1); ++c) dot += dy(r, c) * y(r, c);
          for (std::size_t c = 0; c < y.dim(1); ++c) dx(r, c) = y(r, c) * (dy(r, c) - dot);
        }
        accumulate(g[n.lhs], dx);
        break;
      }
      case Op::MeanRows: {
        if (!lhs_grad) break;
        const Shape& in_shape = nodes_[n.lhs].value.shape();
        Tensor dx(in_shape);
        const double inv = 1.0 / static_cast<double>(in_shape[0]);
        for (std::size_t r = 0; r < in_shape[0]; ++r)
          for (std::size_t c = 0; c < in_shape[1]; ++c) dx(r, c) = dy(0, c) * inv;
        accumulate(g[n.lhs], dx);
        break;
      }
      case Op::Sum:
        if (lhs_grad) accumulate(g[n.lhs], Tensor(nodes_[n.lhs].value.shape(), dy[0]));
        break;
      case Op::CrossEntropy: {
        if (!lhs_grad) break;
        const Tensor& z = nodes_[n.lhs].value;
        double mx = -INFINITY;
        for (double v : z.data()) mx = std::max(mx, v);
        double zsum = 0.0;
        Tensor dz(z.shape());
        for (std::size_t i = 0; i < z.size(); ++i) zsum += (dz[i] = std::exp(z[i] - mx));
        for (std::size_t i = 0; i < z.size(); ++i) {
          dz[i] = (dz[i] / zsum - (i == n.label ? 1.0 : 0.0)) * dy[0];
        }
        accumulate(g[n.lhs], dz);
        break;
      }
    }
  }

  // Leaves that never reached the output still get a (zero) gradient.
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    if (nodes_[id].op == Op::Leaf && nodes_[id].requires_grad && !g[id]) {
      g[id] = Tensor(nodes_[id].value.shape());
    }
  }
  return result;
}

}  // namespace autozoom::tensor
