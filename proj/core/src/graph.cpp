#include "blendnet/nn/graph.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "blendnet/error.hpp"
#include "blendnet/rng.hpp"

namespace blendnet::nn {

const char* op_name(OpKind kind) {
  switch (kind) {
    case OpKind::Input: return "input";
    case OpKind::Linear: return "linear";
    case OpKind::Relu: return "relu";
    case OpKind::Abs: return "abs";
    case OpKind::Add: return "add";
    case OpKind::Sub: return "sub";
    case OpKind::Concat: return "concat";
  }
  return "?";
}

int Graph::check_arg(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) {
    throw Error(Errc::IndexOutOfRange, "node id " + std::to_string(id) + " out of range");
  }
  return id;
}

int Graph::push(Node node) {
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

int Graph::input(int width) {
  if (width <= 0) {
    throw Error(Errc::BadDims, "input width must be positive");
  }
  Node n;
  n.kind = OpKind::Input;
  n.width = width;
  int id = push(std::move(n));
  inputs_.push_back(id);
  return id;
}

int Graph::linear(int arg, int out_width) {
  check_arg(arg);
  if (out_width <= 0) {
    throw Error(Errc::BadDims, "linear fan-out must be positive");
  }
  Node n;
  n.kind = OpKind::Linear;
  n.width = out_width;
  n.args = {arg};
  n.weight = Matrix(static_cast<std::size_t>(out_width),
                    static_cast<std::size_t>(nodes_[arg].width));
  n.bias.assign(static_cast<std::size_t>(out_width), 0.0);
  return push(std::move(n));
}

int Graph::linear_shared(int arg, int owner) {
  check_arg(arg);
  check_arg(owner);
  const Node& src = nodes_[owner];
  if (src.kind != OpKind::Linear || src.share >= 0) {
    throw Error(Errc::BadDims, "shared linear must reference a parameter-owning linear node");
  }
  if (src.weight.cols() != static_cast<std::size_t>(nodes_[arg].width)) {
    throw Error(Errc::ShapeMismatch, "shared linear fan-in " + std::to_string(src.weight.cols()) +
                                         " vs argument width " + std::to_string(nodes_[arg].width));
  }
  Node n;
  n.kind = OpKind::Linear;
  n.width = src.width;
  n.args = {arg};
  n.share = owner;
  return push(std::move(n));
}

int Graph::relu(int arg) {
  check_arg(arg);
  Node n;
  n.kind = OpKind::Relu;
  n.width = nodes_[arg].width;
  n.args = {arg};
  return push(std::move(n));
}

int Graph::abs(int arg) {
  check_arg(arg);
  Node n;
  n.kind = OpKind::Abs;
  n.width = nodes_[arg].width;
  n.args = {arg};
  return push(std::move(n));
}

int Graph::add(int a, int b) {
  check_arg(a);
  check_arg(b);
  if (nodes_[a].width != nodes_[b].width) {
    throw Error(Errc::ShapeMismatch, "add widths differ: " + std::to_string(nodes_[a].width) +
                                         " vs " + std::to_string(nodes_[b].width));
  }
  Node n;
  n.kind = OpKind::Add;
  n.width = nodes_[a].width;
  n.args = {a, b};
  return push(std::move(n));
}

int Graph::sub(int a, int b) {
  check_arg(a);
  check_arg(b);
  if (nodes_[a].width != nodes_[b].width) {
    throw Error(Errc::ShapeMismatch, "sub widths differ: " + std::to_string(nodes_[a].width) +
                                         " vs " + std::to_string(nodes_[b].width));
  }
  Node n;
  n.kind = OpKind::Sub;
  n.width = nodes_[a].width;
  n.args = {a, b};
  return push(std::move(n));
}

int Graph::concat(const std::vector<int>& args) {
  if (args.empty()) {
    throw Error(Errc::BadDims, "concat needs at least one argument");
  }
  Node n;
  n.kind = OpKind::Concat;
  for (int arg : args) {
    check_arg(arg);
    n.width += nodes_[arg].width;
  }
  n.args = args;
  return push(std::move(n));
}

void Graph::set_output(int id) {
  check_arg(id);
  output_ = id;
}

std::size_t Graph::param_count() const {
  std::size_t total = 0;
  for (const Node& n : nodes_) {
    if (n.kind == OpKind::Linear && n.share < 0) {
      total += n.weight.data().size() + n.bias.size();
    }
  }
  return total;
}

std::vector<double> Graph::params() const {
  std::vector<double> flat;
  flat.reserve(param_count());
  for (const Node& n : nodes_) {
    if (n.kind != OpKind::Linear || n.share >= 0) continue;
    flat.insert(flat.end(), n.weight.data().begin(), n.weight.data().end());
    flat.insert(flat.end(), n.bias.begin(), n.bias.end());
  }
  return flat;
}

void Graph::set_params(const std::vector<double>& flat) {
  if (flat.size() != param_count()) {
    throw Error(Errc::LengthMismatch, "got " + std::to_string(flat.size()) + " parameters, graph has " +
                                          std::to_string(param_count()));
  }
  std::size_t at = 0;
  for (Node& n : nodes_) {
    if (n.kind != OpKind::Linear || n.share >= 0) continue;
    for (double& w : n.weight.data()) w = flat[at++];
    for (double& b : n.bias) b = flat[at++];
  }
}

void Graph::init_uniform(Rng& rng) {
  for (Node& n : nodes_) {
    if (n.kind != OpKind::Linear || n.share >= 0) continue;
    const double bound = 1.0 / std::sqrt(static_cast<double>(n.weight.cols()));
    for (double& w : n.weight.data()) w = rng.real(-bound, bound);
    for (double& b : n.bias) b = rng.real(-bound, bound);
  }
}

Matrix Graph::forward(const std::vector<Matrix>& batch, Tape* tape) const {
  if (output_ < 0) {
    throw Error(Errc::EmptyResult, "graph output is not set");
  }
  if (batch.size() != inputs_.size()) {
    throw Error(Errc::ShapeMismatch, "got " + std::to_string(batch.size()) + " inputs, graph has " +
                                         std::to_string(inputs_.size()));
  }
  const std::size_t rows = batch.empty() ? 0 : batch[0].rows();
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Node& n = nodes_[static_cast<std::size_t>(inputs_[i])];
    if (batch[i].cols() != static_cast<std::size_t>(n.width) || batch[i].rows() != rows) {
      throw Error(Errc::ShapeMismatch,
                  "input " + std::to_string(i) + " is " + std::to_string(batch[i].rows()) + "x" +
                      std::to_string(batch[i].cols()) + ", expected " + std::to_string(rows) +
                      "x" + std::to_string(n.width));
    }
  }

  Tape local;
  Tape& t = tape ? *tape : local;
  t.values.assign(nodes_.size(), Matrix());

  std::size_t next_input = 0;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    Matrix& out = t.values[id];
    switch (n.kind) {
      case OpKind::Input:
        out = batch[next_input++];
        break;
      case OpKind::Linear: {
        const Node& owner = n.share >= 0 ? nodes_[static_cast<std::size_t>(n.share)] : n;
        out = linear_forward(t.values[static_cast<std::size_t>(n.args[0])], owner.weight, owner.bias);
        break;
      }
      case OpKind::Relu: {
        out = t.values[static_cast<std::size_t>(n.args[0])];
        for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
        break;
      }
      case OpKind::Abs: {
        out = t.values[static_cast<std::size_t>(n.args[0])];
        for (double& v : out.data()) v = std::abs(v);
        break;
      }
      case OpKind::Add: {
        out = t.values[static_cast<std::size_t>(n.args[0])];
        const Matrix& rhs = t.values[static_cast<std::size_t>(n.args[1])];
        for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] += rhs.data()[k];
        break;
      }
      case OpKind::Sub: {
        out = t.values[static_cast<std::size_t>(n.args[0])];
        const Matrix& rhs = t.values[static_cast<std::size_t>(n.args[1])];
        for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] -= rhs.data()[k];
        break;
      }
      case OpKind::Concat: {
        out = Matrix(rows, static_cast<std::size_t>(n.width));
        std::size_t col0 = 0;
        for (int arg : n.args) {
          const Matrix& part = t.values[static_cast<std::size_t>(arg)];
          for (std::size_t r = 0; r < rows; ++r) {
            double* dst = out.row(r) + col0;
            const double* src = part.row(r);
            for (std::size_t c = 0; c < part.cols(); ++c) dst[c] = src[c];
          }
          col0 += part.cols();
        }
        break;
      }
    }
  }
  return t.values[static_cast<std::size_t>(output_)];
}

std::vector<double> Graph::backward(const Tape& tape, const Matrix& out_grad) const {
  if (output_ < 0) {
    throw Error(Errc::EmptyResult, "graph output is not set");
  }
  if (tape.values.size() != nodes_.size()) {
    throw Error(Errc::TapeMismatch, "tape has " + std::to_string(tape.values.size()) +
                                        " activations, graph has " + std::to_string(nodes_.size()));
  }
  const Matrix& out_value = tape.values[static_cast<std::size_t>(output_)];
  if (out_grad.rows() != out_value.rows() || out_grad.cols() != out_value.cols()) {
    throw Error(Errc::TapeMismatch, "output gradient is " + std::to_string(out_grad.rows()) + "x" +
                                        std::to_string(out_grad.cols()) + ", output is " +
                                        std::to_string(out_value.rows()) + "x" +
                                        std::to_string(out_value.cols()));
  }
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const Matrix& v = tape.values[id];
    if (v.cols() != static_cast<std::size_t>(nodes_[id].width) || v.rows() != out_value.rows()) {
      throw Error(Errc::TapeMismatch, "tape activation " + std::to_string(id) +
                                          " does not match node " + op_name(nodes_[id].kind));
    }
  }

  std::vector<Matrix> node_grad(nodes_.size());
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    node_grad[id] = Matrix(tape.values[id].rows(), tape.values[id].cols());
  }
  node_grad[static_cast<std::size_t>(output_)] = out_grad;

  std::vector<double> param_grad(param_count(), 0.0);

  // Parameter slots mirror the flattening in params(); shared linear nodes
  // accumulate into their owner's slot.
  std::vector<std::size_t> offset(nodes_.size(), 0);
  std::size_t at = 0;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    offset[id] = at;
    if (nodes_[id].kind == OpKind::Linear && nodes_[id].share < 0) {
      at += nodes_[id].weight.data().size() + nodes_[id].bias.size();
    }
  }
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    if (nodes_[id].share >= 0) offset[id] = offset[static_cast<std::size_t>(nodes_[id].share)];
  }

  for (std::size_t id = nodes_.size(); id-- > 0;) {
    const Node& n = nodes_[id];
    const Matrix& gy = node_grad[id];
    switch (n.kind) {
      case OpKind::Input:
        break;
      case OpKind::Linear: {
        const Node& owner = n.share >= 0 ? nodes_[static_cast<std::size_t>(n.share)] : n;
        const Matrix& x = tape.values[static_cast<std::size_t>(n.args[0])];
        Matrix& gx = node_grad[static_cast<std::size_t>(n.args[0])];
        double* gw = param_grad.data() + offset[id];
        double* gb = gw + owner.weight.data().size();
        for (std::size_t i = 0; i < x.rows(); ++i) {
          const double* gyi = gy.row(i);
          const double* xi = x.row(i);
          double* gxi = gx.row(i);
          for (std::size_t o = 0; o < owner.weight.rows(); ++o) {
            const double g = gyi[o];
            if (g == 0.0) continue;
            const double* wo = owner.weight.row(o);
            double* gwo = gw + o * owner.weight.cols();
            for (std::size_t k = 0; k < owner.weight.cols(); ++k) {
              gxi[k] += g * wo[k];
              gwo[k] += g * xi[k];
            }
            gb[o] += g;
          }
        }
        break;
      }
      case OpKind::Relu: {
        const Matrix& x = tape.values[static_cast<std::size_t>(n.args[0])];
        Matrix& gx = node_grad[static_cast<std::size_t>(n.args[0])];
        for (std::size_t k = 0; k < x.data().size(); ++k) {
          if (x.data()[k] > 0.0) gx.data()[k] += gy.data()[k];
        }
        break;
      }
      case OpKind::Abs: {
        const Matrix& x = tape.values[static_cast<std::size_t>(n.args[0])];
        Matrix& gx = node_grad[static_cast<std::size_t>(n.args[0])];
        for (std::size_t k = 0; k < x.data().size(); ++k) {
          if (x.data()[k] > 0.0) {
            gx.data()[k] += gy.data()[k];
          } else if (x.data()[k] < 0.0) {
            gx.data()[k] -= gy.data()[k];
          }
        }
        break;
      }
      case OpKind::Add: {
        for (int arg : n.args) {
          Matrix& gx = node_grad[static_cast<std::size_t>(arg)];
          for (std::size_t k = 0; k < gx.data().size(); ++k) gx.data()[k] += gy.data()[k];
        }
        break;
      }
      case OpKind::Sub: {
        Matrix& ga = node_grad[static_cast<std::size_t>(n.args[0])];
        Matrix& gb2 = node_grad[static_cast<std::size_t>(n.args[1])];
        for (std::size_t k = 0; k < ga.data().size(); ++k) {
          ga.data()[k] += gy.data()[k];
          gb2.data()[k] -= gy.data()[k];
        }
        break;
      }
      case OpKind::Concat: {
        std::size_t col0 = 0;
        for (int arg : n.args) {
          Matrix& gx = node_grad[static_cast<std::size_t>(arg)];
          for (std::size_t r = 0; r < gx.rows(); ++r) {
            const double* src = gy.row(r) + col0;
            double* dst = gx.row(r);
            for (std::size_t c = 0; c < gx.cols(); ++c) dst[c] += src[c];
          }
          col0 += gx.cols();
        }
        break;
      }
    }
  }
  return param_grad;
}

}  // namespace blendnet::nn
