#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "somnograph/layers.hpp"

namespace somnograph::nn {

struct AdamConfig {
  double alpha = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First/second moment estimates for one parameter tensor.
struct AdamState {
  Eigen::ArrayXd m;
  Eigen::ArrayXd v;
  long step = 0;
};

// One bias-corrected update. Throws NumericError naming the parameter when
// the gradient is non-finite.
void adam_step(double* params, const double* grads, Eigen::Index size, AdamState& state,
               const AdamConfig& config, const std::string& param_name);

// Drives adam_step over a fixed parameter list. The list order is part of
// the determinism contract.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(const std::vector<ParamRef>& params, AdamConfig config = {});

  void step(const std::vector<ParamRef>& params);

 private:
  AdamConfig config_;
  std::vector<AdamState> states_;
};

}  // namespace somnograph::nn
