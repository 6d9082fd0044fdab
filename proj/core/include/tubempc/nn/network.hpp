#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace tubempc::nn {

enum class Activation { Tanh, Relu, Softplus };
enum class OutputActivation { Identity, Softplus };

std::string to_string(Activation a);
std::string to_string(OutputActivation a);
Activation activation_from_string(const std::string& s);
OutputActivation output_activation_from_string(const std::string& s);

/// Architecture of a dense feedforward network: layer widths including input
/// and output, one hidden activation applied to every hidden layer, and an
/// optional output activation.
struct NetworkSpec {
  std::vector<int> layer_widths;
  Activation hidden_activation = Activation::Tanh;
  OutputActivation output_activation = OutputActivation::Identity;

  int input_dim() const { return layer_widths.front(); }
  int output_dim() const { return layer_widths.back(); }
  /// Number of affine layers.
  int num_layers() const { return static_cast<int>(layer_widths.size()) - 1; }
  std::int64_t parameter_count() const;

  /// Throws std::invalid_argument if the spec is malformed (fewer than two
  /// layers, or any width < 1).
  void validate() const;

  bool operator==(const NetworkSpec&) const = default;
};

/// A dense network: immutable value type. Weight matrices are (out x in).
struct Network {
  NetworkSpec spec;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  std::uint64_t rng_seed = 0;

  int input_dim() const { return spec.input_dim(); }
  int output_dim() const { return spec.output_dim(); }
  int num_layers() const { return spec.num_layers(); }
};

/// Per-parameter accumulator with the same shapes as a Network. Used for
/// gradients and for optimizer moments.
struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  static Gradients zeros_like(const Network& net);
  void set_zero();
  void add_scaled(const Gradients& other, double scale);
  void scale(double s);
  double squared_norm() const;
  bool all_finite() const;
};

/// Deterministic initialization: weights uniform in
/// [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
Network init_network(const NetworkSpec& spec, std::uint64_t seed);

/// Stored activations from a forward pass, reused by backward.
struct ForwardTrace {
  std::vector<Eigen::VectorXd> inputs;          // input to each affine layer
  std::vector<Eigen::VectorXd> pre_activations; // affine outputs
  Eigen::VectorXd output;
};

Eigen::VectorXd forward(const Network& net, const Eigen::VectorXd& input);
Eigen::VectorXd forward(const Network& net, const Eigen::VectorXd& input,
                        ForwardTrace& trace);

/// Exact reverse-mode gradients of <cotangent, forward(net, input)>.
/// Parameter gradients are accumulated (scaled by `scale`) into `grads` when
/// non-null; the return value is the gradient with respect to the input.
Eigen::VectorXd backward(const Network& net, const ForwardTrace& trace,
                         const Eigen::VectorXd& output_cotangent,
                         Gradients* grads = nullptr, double scale = 1.0);

/// Convenience single-shot form.
std::pair<Gradients, Eigen::VectorXd> backward(const Network& net,
                                               const Eigen::VectorXd& input,
                                               const Eigen::VectorXd& output_cotangent);

/// Jacobian of the outputs with respect to a selected set of input
/// coordinates: rows = outputs, columns = selected inputs. One backward pass
/// per output row.
Eigen::MatrixXd input_jacobian(const Network& net, const Eigen::VectorXd& input,
                               const std::vector<int>& input_indices);
/// Full input Jacobian.
Eigen::MatrixXd input_jacobian(const Network& net, const Eigen::VectorXd& input);

/// Forward pass carrying a tangent (directional derivative) alongside the
/// primal values. `tangent_out` receives J * tangent_in exactly.
struct TangentTrace {
  ForwardTrace primal;
  std::vector<Eigen::VectorXd> tangent_inputs;
  std::vector<Eigen::VectorXd> tangent_pre;
  Eigen::VectorXd tangent_output;
};

void forward_with_tangent(const Network& net, const Eigen::VectorXd& input,
                          const Eigen::VectorXd& tangent_in, TangentTrace& trace);

/// Reverse pass through forward_with_tangent: given a cotangent on the
/// *tangent output* (i.e. on the Jacobian-vector product), accumulate exact
/// parameter gradients. Needed to train penalties defined on Jacobian
/// entries.
void tangent_backward(const Network& net, const TangentTrace& trace,
                      const Eigen::VectorXd& tangent_cotangent, Gradients& grads,
                      double scale = 1.0);

}  // namespace tubempc::nn
