#include "somnograph/adam.hpp"

#include <cmath>

namespace somnograph::nn {

void adam_step(double* params, const double* grads, Eigen::Index size, AdamState& state,
               const AdamConfig& config, const std::string& param_name) {
  if (state.m.size() != size) {
    state.m = Eigen::ArrayXd::Zero(size);
    state.v = Eigen::ArrayXd::Zero(size);
    state.step = 0;
  }
  for (Eigen::Index i = 0; i < size; ++i)
    if (!std::isfinite(grads[i]))
      throw NumericError("adam_step: non-finite gradient in parameter '" + param_name +
                         "' at index " + std::to_string(i));

  ++state.step;
  const double bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  for (Eigen::Index i = 0; i < size; ++i) {
    const double g = grads[i];
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g;
    const double m_hat = state.m[i] / bias1;
    const double v_hat = state.v[i] / bias2;
    params[i] -= config.alpha * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

AdamOptimizer::AdamOptimizer(const std::vector<ParamRef>& params, AdamConfig config)
    : config_(config), states_(params.size()) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    states_[i].m = Eigen::ArrayXd::Zero(params[i].size);
    states_[i].v = Eigen::ArrayXd::Zero(params[i].size);
  }
}

void AdamOptimizer::step(const std::vector<ParamRef>& params) {
  if (params.size() != states_.size())
    throw ArgumentError("AdamOptimizer: parameter list changed size");
  for (std::size_t i = 0; i < params.size(); ++i)
    adam_step(params[i].values, params[i].grads, params[i].size, states_[i], config_,
              params[i].name);
}

}  // namespace somnograph::nn
