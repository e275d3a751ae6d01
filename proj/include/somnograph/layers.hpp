#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "somnograph/rng.hpp"
#include "somnograph/tensor.hpp"

namespace somnograph::nn {

using MatRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Mode { Train, Infer };

// Flat view of one named parameter and its gradient, the currency of the
// optimizer and the checkpoint writer.
struct ParamRef {
  std::string name;
  double* values = nullptr;
  double* grads = nullptr;
  std::vector<Eigen::Index> shape;
  Eigen::Index size = 0;
};

// Time-independent linear channel mixing: y = W x with W of shape
// (virtual x input). Produces the virtual channels; no bias.
class SpatialFilter {
 public:
  SpatialFilter(Eigen::Index virtual_channels, Eigen::Index input_channels);

  MatRM forward(const MatRM& x);
  MatRM backward(const MatRM& d_out);

  void zero_grad() { grad_weight_.setZero(); }
  void collect_params(const std::string& prefix, std::vector<ParamRef>& out);

  MatRM& weight() { return weight_; }
  const MatRM& weight() const { return weight_; }
  Eigen::Index parameter_count() const { return weight_.size(); }

 private:
  MatRM weight_, grad_weight_;
  MatRM input_cache_;
};

// 1-D convolution along the time axis, applied independently per channel
// row. Input (C, T, F_in), kernels (F_out, F_in, K), output (C, T, F_out)
// with "same" zero padding: floor((K-1)/2) zeros left, the rest right.
class TemporalConv {
 public:
  TemporalConv(Eigen::Index out_filters, Eigen::Index in_filters, Eigen::Index kernel_len);

  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& d_out);

  void zero_grad();
  void collect_params(const std::string& prefix, std::vector<ParamRef>& out);

  Tensor& kernels() { return kernels_; }
  Eigen::VectorXd& bias() { return bias_; }
  Eigen::Index parameter_count() const { return kernels_.size() + bias_.size(); }

 private:
  Eigen::Index out_filters_, in_filters_, kernel_len_, pad_left_;
  Tensor kernels_, grad_kernels_;
  Eigen::VectorXd bias_, grad_bias_;
  std::vector<Eigen::Index> in_shape_;
  std::vector<MatRM> patch_cache_;  // per channel: (T, F_in*K)
};

class Relu {
 public:
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& d_out) const;

 private:
  Tensor mask_;
};

// Max pooling along the time axis (window == stride, no overlap). Trailing
// samples that do not fill a window are dropped; ties go to the earliest
// index. The backward pass routes each window's gradient entirely to the
// argmax position.
class MaxPool {
 public:
  explicit MaxPool(Eigen::Index window) : window_(window) {}

  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& d_out) const;

 private:
  Eigen::Index window_;
  std::vector<Eigen::Index> in_shape_;
  std::vector<Eigen::Index> argmax_;  // flat input offsets, one per output element
};

// Inverted-scaling dropout on a flat feature vector: train mode zeroes each
// unit with probability rate and scales survivors by 1/(1-rate); infer mode
// is the identity.
class Dropout {
 public:
  explicit Dropout(double rate);

  Eigen::VectorXd forward(const Eigen::VectorXd& x, Mode mode, Rng& rng);
  Eigen::VectorXd backward(const Eigen::VectorXd& d_out) const;

  double rate() const { return rate_; }

 private:
  double rate_;
  Eigen::ArrayXd scale_;  // cached mask / (1-rate); ones in infer mode
};

class Dense {
 public:
  Dense(Eigen::Index out_dim, Eigen::Index in_dim);

  Eigen::VectorXd forward(const Eigen::VectorXd& x);
  Eigen::VectorXd backward(const Eigen::VectorXd& d_out);

  void zero_grad();
  void collect_params(const std::string& prefix, std::vector<ParamRef>& out);

  MatRM& weight() { return weight_; }
  Eigen::VectorXd& bias() { return bias_; }
  Eigen::Index parameter_count() const { return weight_.size() + bias_.size(); }
  Eigen::Index in_dim() const { return weight_.cols(); }
  Eigen::Index out_dim() const { return weight_.rows(); }

 private:
  MatRM weight_, grad_weight_;
  Eigen::VectorXd bias_, grad_bias_;
  Eigen::VectorXd input_cache_;
};

// Max-subtraction stabilized softmax with categorical cross entropy.
// Returns the probability vector and -log p_true; the combined gradient
// with respect to the logits is p - y.
std::pair<Eigen::VectorXd, double> softmax_cross_entropy(const Eigen::VectorXd& logits,
                                                         const Eigen::VectorXd& one_hot);

Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

}  // namespace somnograph::nn
