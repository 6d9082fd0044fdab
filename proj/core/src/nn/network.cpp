#include "tubempc/nn/network.hpp"

#include "tubempc/math/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tubempc::nn {

namespace {

inline double softplus(double z) {
  if (z > 30.0) return z;
  if (z < -30.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// value, first and second derivative of the hidden activation at z.
inline void eval_activation(Activation act, double z, double& v, double& d1, double& d2) {
  switch (act) {
    case Activation::Tanh: {
      const double a = std::tanh(z);
      v = a;
      d1 = 1.0 - a * a;
      d2 = -2.0 * a * d1;
      return;
    }
    case Activation::Relu: {
      v = z > 0.0 ? z : 0.0;
      d1 = z > 0.0 ? 1.0 : 0.0;
      d2 = 0.0;
      return;
    }
    case Activation::Softplus: {
      const double s = sigmoid(z);
      v = softplus(z);
      d1 = s;
      d2 = s * (1.0 - s);
      return;
    }
  }
  throw std::logic_error("unknown activation");
}

inline void eval_output_activation(OutputActivation act, double z, double& v, double& d1,
                                   double& d2) {
  switch (act) {
    case OutputActivation::Identity:
      v = z;
      d1 = 1.0;
      d2 = 0.0;
      return;
    case OutputActivation::Softplus: {
      const double s = sigmoid(z);
      v = softplus(z);
      d1 = s;
      d2 = s * (1.0 - s);
      return;
    }
  }
  throw std::logic_error("unknown output activation");
}

// Applies the activation of layer `layer` (0-based) elementwise; fills value
// and derivatives.
void layer_activation(const Network& net, int layer, const Eigen::VectorXd& pre,
                      Eigen::VectorXd* value, Eigen::VectorXd* d1, Eigen::VectorXd* d2) {
  const bool is_output = (layer == net.num_layers() - 1);
  const auto n = pre.size();
  if (value) value->resize(n);
  if (d1) d1->resize(n);
  if (d2) d2->resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double v, g, h;
    if (is_output) {
      eval_output_activation(net.spec.output_activation, pre[i], v, g, h);
    } else {
      eval_activation(net.spec.hidden_activation, pre[i], v, g, h);
    }
    if (value) (*value)[i] = v;
    if (d1) (*d1)[i] = g;
    if (d2) (*d2)[i] = h;
  }
}

}  // namespace

std::string to_string(Activation a) {
  switch (a) {
    case Activation::Tanh: return "tanh";
    case Activation::Relu: return "relu";
    case Activation::Softplus: return "softplus";
  }
  return "?";
}

std::string to_string(OutputActivation a) {
  return a == OutputActivation::Identity ? "identity" : "softplus";
}

Activation activation_from_string(const std::string& s) {
  if (s == "tanh") return Activation::Tanh;
  if (s == "relu") return Activation::Relu;
  if (s == "softplus") return Activation::Softplus;
  throw std::invalid_argument("unknown activation: " + s);
}

OutputActivation output_activation_from_string(const std::string& s) {
  if (s == "identity") return OutputActivation::Identity;
  if (s == "softplus") return OutputActivation::Softplus;
  throw std::invalid_argument("unknown output activation: " + s);
}

std::int64_t NetworkSpec::parameter_count() const {
  std::int64_t count = 0;
  for (std::size_t l = 0; l + 1 < layer_widths.size(); ++l) {
    count += static_cast<std::int64_t>(layer_widths[l]) * layer_widths[l + 1];
    count += layer_widths[l + 1];
  }
  return count;
}

void NetworkSpec::validate() const {
  if (layer_widths.size() < 2) {
    throw std::invalid_argument("NetworkSpec: need at least input and output layers");
  }
  for (int w : layer_widths) {
    if (w < 1) throw std::invalid_argument("NetworkSpec: all layer widths must be >= 1");
  }
}

Gradients Gradients::zeros_like(const Network& net) {
  Gradients g;
  g.weights.reserve(net.weights.size());
  g.biases.reserve(net.biases.size());
  for (const auto& w : net.weights) g.weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  for (const auto& b : net.biases) g.biases.push_back(Eigen::VectorXd::Zero(b.size()));
  return g;
}

void Gradients::set_zero() {
  for (auto& w : weights) w.setZero();
  for (auto& b : biases) b.setZero();
}

void Gradients::add_scaled(const Gradients& other, double scale) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l] += scale * other.weights[l];
    biases[l] += scale * other.biases[l];
  }
}

void Gradients::scale(double s) {
  for (auto& w : weights) w *= s;
  for (auto& b : biases) b *= s;
}

double Gradients::squared_norm() const {
  double acc = 0.0;
  for (const auto& w : weights) acc += w.squaredNorm();
  for (const auto& b : biases) acc += b.squaredNorm();
  return acc;
}

bool Gradients::all_finite() const {
  for (const auto& w : weights) {
    if (!w.allFinite()) return false;
  }
  for (const auto& b : biases) {
    if (!b.allFinite()) return false;
  }
  return true;
}

Network init_network(const NetworkSpec& spec, std::uint64_t seed) {
  spec.validate();
  Network net;
  net.spec = spec;
  net.rng_seed = seed;
  Rng rng(seed);
  for (int l = 0; l < spec.num_layers(); ++l) {
    const int in = spec.layer_widths[l];
    const int out = spec.layer_widths[l + 1];
    Eigen::MatrixXd w(out, in);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) w(r, c) = rng.uniform(-bound, bound);
    }
    net.weights.push_back(std::move(w));
    net.biases.push_back(Eigen::VectorXd::Zero(out));
  }
  return net;
}

Eigen::VectorXd forward(const Network& net, const Eigen::VectorXd& input) {
  ForwardTrace trace;
  return forward(net, input, trace);
}

Eigen::VectorXd forward(const Network& net, const Eigen::VectorXd& input, ForwardTrace& trace) {
  if (input.size() != net.input_dim()) {
    throw std::invalid_argument("forward: input has length " + std::to_string(input.size()) +
                                ", expected " + std::to_string(net.input_dim()));
  }
  const int layers = net.num_layers();
  trace.inputs.resize(layers);
  trace.pre_activations.resize(layers);
  Eigen::VectorXd a = input;
  for (int l = 0; l < layers; ++l) {
    trace.inputs[l] = a;
    Eigen::VectorXd pre = net.weights[l] * a + net.biases[l];
    trace.pre_activations[l] = pre;
    layer_activation(net, l, pre, &a, nullptr, nullptr);
  }
  trace.output = a;
  return a;
}

Eigen::VectorXd backward(const Network& net, const ForwardTrace& trace,
                         const Eigen::VectorXd& output_cotangent, Gradients* grads,
                         double scale) {
  if (output_cotangent.size() != net.output_dim()) {
    throw std::invalid_argument("backward: cotangent has length " +
                                std::to_string(output_cotangent.size()) + ", expected " +
                                std::to_string(net.output_dim()));
  }
  const int layers = net.num_layers();
  Eigen::VectorXd delta = output_cotangent;
  for (int l = layers - 1; l >= 0; --l) {
    Eigen::VectorXd d1;
    layer_activation(net, l, trace.pre_activations[l], nullptr, &d1, nullptr);
    delta = delta.cwiseProduct(d1);
    if (grads) {
      grads->weights[l].noalias() += scale * delta * trace.inputs[l].transpose();
      grads->biases[l] += scale * delta;
    }
    delta = net.weights[l].transpose() * delta;
  }
  return delta;  // gradient with respect to the network input
}

std::pair<Gradients, Eigen::VectorXd> backward(const Network& net, const Eigen::VectorXd& input,
                                               const Eigen::VectorXd& output_cotangent) {
  ForwardTrace trace;
  forward(net, input, trace);
  Gradients grads = Gradients::zeros_like(net);
  Eigen::VectorXd input_grad = backward(net, trace, output_cotangent, &grads);
  return {std::move(grads), std::move(input_grad)};
}

Eigen::MatrixXd input_jacobian(const Network& net, const Eigen::VectorXd& input,
                               const std::vector<int>& input_indices) {
  for (int idx : input_indices) {
    if (idx < 0 || idx >= net.input_dim()) {
      throw std::invalid_argument("input_jacobian: index " + std::to_string(idx) +
                                  " out of range for input width " +
                                  std::to_string(net.input_dim()));
    }
  }
  ForwardTrace trace;
  forward(net, input, trace);
  const int n_out = net.output_dim();
  Eigen::MatrixXd jac(n_out, static_cast<Eigen::Index>(input_indices.size()));
  Eigen::VectorXd cot = Eigen::VectorXd::Zero(n_out);
  for (int r = 0; r < n_out; ++r) {
    cot.setZero();
    cot[r] = 1.0;
    const Eigen::VectorXd g = backward(net, trace, cot, nullptr);
    for (std::size_t c = 0; c < input_indices.size(); ++c) {
      jac(r, static_cast<Eigen::Index>(c)) = g[input_indices[c]];
    }
  }
  return jac;
}

Eigen::MatrixXd input_jacobian(const Network& net, const Eigen::VectorXd& input) {
  std::vector<int> all(net.input_dim());
  for (int i = 0; i < net.input_dim(); ++i) all[i] = i;
  return input_jacobian(net, input, all);
}

void forward_with_tangent(const Network& net, const Eigen::VectorXd& input,
                          const Eigen::VectorXd& tangent_in, TangentTrace& trace) {
  if (tangent_in.size() != net.input_dim()) {
    throw std::invalid_argument("forward_with_tangent: tangent dimension mismatch");
  }
  const int layers = net.num_layers();
  trace.primal.inputs.resize(layers);
  trace.primal.pre_activations.resize(layers);
  trace.tangent_inputs.resize(layers);
  trace.tangent_pre.resize(layers);
  Eigen::VectorXd a = input;
  Eigen::VectorXd da = tangent_in;
  for (int l = 0; l < layers; ++l) {
    trace.primal.inputs[l] = a;
    trace.tangent_inputs[l] = da;
    Eigen::VectorXd pre = net.weights[l] * a + net.biases[l];
    Eigen::VectorXd dpre = net.weights[l] * da;
    trace.primal.pre_activations[l] = pre;
    trace.tangent_pre[l] = dpre;
    Eigen::VectorXd d1;
    layer_activation(net, l, pre, &a, &d1, nullptr);
    da = d1.cwiseProduct(dpre);
  }
  trace.primal.output = a;
  trace.tangent_output = da;
}

void tangent_backward(const Network& net, const TangentTrace& trace,
                      const Eigen::VectorXd& tangent_cotangent, Gradients& grads, double scale) {
  const int layers = net.num_layers();
  // r: cotangent on the primal activation, rt: cotangent on the tangent.
  Eigen::VectorXd r = Eigen::VectorXd::Zero(net.output_dim());
  Eigen::VectorXd rt = tangent_cotangent;
  for (int l = layers - 1; l >= 0; --l) {
    Eigen::VectorXd d1, d2;
    layer_activation(net, l, trace.primal.pre_activations[l], nullptr, &d1, &d2);
    // a = act(z), da = act'(z) .* dz
    const Eigen::VectorXd dz_cot = d1.cwiseProduct(rt);
    const Eigen::VectorXd z_cot =
        d2.cwiseProduct(trace.tangent_pre[l]).cwiseProduct(rt) + d1.cwiseProduct(r);
    grads.weights[l].noalias() += scale * z_cot * trace.primal.inputs[l].transpose();
    grads.weights[l].noalias() += scale * dz_cot * trace.tangent_inputs[l].transpose();
    grads.biases[l] += scale * z_cot;
    r = net.weights[l].transpose() * z_cot;
    rt = net.weights[l].transpose() * dz_cot;
  }
}

}  // namespace tubempc::nn
