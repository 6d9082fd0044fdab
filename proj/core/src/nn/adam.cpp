#include "tubempc/nn/adam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tubempc::nn {

OptimizerState init_optimizer(const Network& net, const AdamConfig& config) {
  OptimizerState state;
  state.first_moment = Gradients::zeros_like(net);
  state.second_moment = Gradients::zeros_like(net);
  state.config = config;
  return state;
}

namespace {

void check_finite(const Eigen::MatrixXd& g, const std::string& where) {
  if (!g.allFinite()) {
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      for (Eigen::Index c = 0; c < g.cols(); ++c) {
        if (!std::isfinite(g(r, c))) {
          throw std::runtime_error("adam_update: non-finite gradient at " + where + "(" +
                                   std::to_string(r) + "," + std::to_string(c) + ")");
        }
      }
    }
  }
}

}  // namespace

void adam_update(Network& net, const Gradients& grads, OptimizerState& state) {
  const auto& cfg = state.config;
  state.step_count += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step_count));
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    check_finite(grads.weights[l], "layer " + std::to_string(l) + " weights");
    check_finite(grads.biases[l], "layer " + std::to_string(l) + " biases");

    auto& mw = state.first_moment.weights[l];
    auto& vw = state.second_moment.weights[l];
    mw = cfg.beta1 * mw + (1.0 - cfg.beta1) * grads.weights[l];
    vw = cfg.beta2 * vw + (1.0 - cfg.beta2) * grads.weights[l].cwiseAbs2();
    net.weights[l].array() -=
        cfg.learning_rate * (mw.array() / bc1) / ((vw.array() / bc2).sqrt() + cfg.eps_stab);

    auto& mb = state.first_moment.biases[l];
    auto& vb = state.second_moment.biases[l];
    mb = cfg.beta1 * mb + (1.0 - cfg.beta1) * grads.biases[l];
    vb = cfg.beta2 * vb + (1.0 - cfg.beta2) * grads.biases[l].cwiseAbs2();
    net.biases[l].array() -=
        cfg.learning_rate * (mb.array() / bc1) / ((vb.array() / bc2).sqrt() + cfg.eps_stab);
  }
}

MatrixAdam::MatrixAdam(Eigen::Index rows, Eigen::Index cols, const AdamConfig& cfg)
    : m(Eigen::MatrixXd::Zero(rows, cols)), v(Eigen::MatrixXd::Zero(rows, cols)), config(cfg) {}

void MatrixAdam::step(Eigen::MatrixXd& params, const Eigen::MatrixXd& grad) {
  if (!grad.allFinite()) {
    throw std::runtime_error("MatrixAdam: non-finite gradient");
  }
  step_count += 1;
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(step_count));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(step_count));
  m = config.beta1 * m + (1.0 - config.beta1) * grad;
  v = config.beta2 * v + (1.0 - config.beta2) * grad.cwiseAbs2();
  params.array() -=
      config.learning_rate * (m.array() / bc1) / ((v.array() / bc2).sqrt() + config.eps_stab);
}

}  // namespace tubempc::nn
