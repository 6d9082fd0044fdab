#pragma once

#include "tubempc/nn/network.hpp"

namespace tubempc::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_stab = 1e-8;
};

/// First/second moment state for the adaptive update, one accumulator per
/// parameter tensor.
struct OptimizerState {
  long step_count = 0;
  Gradients first_moment;
  Gradients second_moment;
  AdamConfig config;
};

OptimizerState init_optimizer(const Network& net, const AdamConfig& config = {});

/// One adaptive first-order step with bias correction. Mutates the network
/// in place and increments step_count. Throws std::runtime_error naming the
/// offending tensor if a gradient entry is non-finite.
void adam_update(Network& net, const Gradients& grads, OptimizerState& state);

/// Adam over a free parameter matrix (used for the epistemic head and for
/// pseudo-control sequences in trajectory fitting).
struct MatrixAdam {
  explicit MatrixAdam(Eigen::Index rows, Eigen::Index cols, const AdamConfig& config = {});
  void step(Eigen::MatrixXd& params, const Eigen::MatrixXd& grad);

  long step_count = 0;
  Eigen::MatrixXd m, v;
  AdamConfig config;
};

}  // namespace tubempc::nn
