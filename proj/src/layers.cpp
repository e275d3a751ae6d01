#include "somnograph/layers.hpp"

#include <cmath>

namespace somnograph::nn {

namespace {

ParamRef make_ref(std::string name, double* values, double* grads,
                  std::vector<Eigen::Index> shape) {
  ParamRef ref;
  ref.name = std::move(name);
  ref.values = values;
  ref.grads = grads;
  ref.shape = std::move(shape);
  ref.size = 1;
  for (Eigen::Index e : ref.shape) ref.size *= e;
  return ref;
}

}  // namespace

SpatialFilter::SpatialFilter(Eigen::Index virtual_channels, Eigen::Index input_channels)
    : weight_(MatRM::Zero(virtual_channels, input_channels)),
      grad_weight_(MatRM::Zero(virtual_channels, input_channels)) {
  if (virtual_channels < 1 || input_channels < 1)
    throw ArgumentError("SpatialFilter: channel counts must be positive");
}

MatRM SpatialFilter::forward(const MatRM& x) {
  if (x.rows() != weight_.cols())
    throw ArgumentError("SpatialFilter: input has " + std::to_string(x.rows()) +
                        " channels, weight expects " + std::to_string(weight_.cols()));
  input_cache_ = x;
  return weight_ * x;
}

MatRM SpatialFilter::backward(const MatRM& d_out) {
  grad_weight_.noalias() += d_out * input_cache_.transpose();
  return weight_.transpose() * d_out;
}

void SpatialFilter::collect_params(const std::string& prefix, std::vector<ParamRef>& out) {
  out.push_back(make_ref(prefix + ".weight", weight_.data(), grad_weight_.data(),
                         {weight_.rows(), weight_.cols()}));
}

TemporalConv::TemporalConv(Eigen::Index out_filters, Eigen::Index in_filters,
                           Eigen::Index kernel_len)
    : out_filters_(out_filters),
      in_filters_(in_filters),
      kernel_len_(kernel_len),
      pad_left_((kernel_len - 1) / 2),
      kernels_({out_filters, in_filters, kernel_len}),
      grad_kernels_({out_filters, in_filters, kernel_len}),
      bias_(Eigen::VectorXd::Zero(out_filters)),
      grad_bias_(Eigen::VectorXd::Zero(out_filters)) {
  if (out_filters < 1 || in_filters < 1 || kernel_len < 1)
    throw ArgumentError("TemporalConv: dimensions must be positive");
}

Tensor TemporalConv::forward(const Tensor& x) {
  if (x.rank() != 3 || x.dim(2) != in_filters_)
    throw ArgumentError("TemporalConv: expected (C, T, " + std::to_string(in_filters_) +
                        ") input");
  const Eigen::Index channels = x.dim(0);
  const Eigen::Index time = x.dim(1);
  if (time < kernel_len_)
    throw ArgumentError("TemporalConv: time length " + std::to_string(time) +
                        " shorter than kernel " + std::to_string(kernel_len_));

  in_shape_ = x.shape();
  patch_cache_.assign(static_cast<std::size_t>(channels), MatRM());
  const auto kernel_mat = kernels_.as_matrix(out_filters_, in_filters_ * kernel_len_);

  Tensor out({channels, time, out_filters_});
  for (Eigen::Index c = 0; c < channels; ++c) {
    const auto x_c = x.slice_matrix(c, time, in_filters_);
    MatRM& patches = patch_cache_[static_cast<std::size_t>(c)];
    patches = MatRM::Zero(time, in_filters_ * kernel_len_);
    for (Eigen::Index u = 0; u < kernel_len_; ++u) {
      const Eigen::Index src_begin = std::max<Eigen::Index>(0, pad_left_ - u);
      const Eigen::Index src_end = std::min(time, time + pad_left_ - u);
      if (src_begin >= src_end) continue;  // kernel tap never overlaps the signal
      // patches(t, fi*K + u) = x_c(t + u - pad_left, fi)
      for (Eigen::Index fi = 0; fi < in_filters_; ++fi)
        patches.col(fi * kernel_len_ + u).segment(src_begin, src_end - src_begin) =
            x_c.col(fi).segment(src_begin + u - pad_left_, src_end - src_begin);
    }
    auto out_c = out.slice_matrix(c, time, out_filters_);
    out_c.noalias() = patches * kernel_mat.transpose();
    out_c.rowwise() += bias_.transpose();
  }
  return out;
}

Tensor TemporalConv::backward(const Tensor& d_out) {
  const Eigen::Index channels = in_shape_[0];
  const Eigen::Index time = in_shape_[1];
  if (d_out.shape() != std::vector<Eigen::Index>{channels, time, out_filters_})
    throw ArgumentError("TemporalConv: gradient shape mismatch");

  auto grad_kernel_mat = grad_kernels_.as_matrix(out_filters_, in_filters_ * kernel_len_);
  const auto kernel_mat = kernels_.as_matrix(out_filters_, in_filters_ * kernel_len_);

  Tensor d_in(in_shape_);
  for (Eigen::Index c = 0; c < channels; ++c) {
    const auto d_out_c = d_out.slice_matrix(c, time, out_filters_);
    const MatRM& patches = patch_cache_[static_cast<std::size_t>(c)];
    grad_bias_.noalias() += d_out_c.colwise().sum().transpose();
    grad_kernel_mat.noalias() += d_out_c.transpose() * patches;

    const MatRM d_patches = d_out_c * kernel_mat;
    auto d_in_c = d_in.slice_matrix(c, time, in_filters_);
    for (Eigen::Index u = 0; u < kernel_len_; ++u) {
      const Eigen::Index src_begin = std::max<Eigen::Index>(0, pad_left_ - u);
      const Eigen::Index src_end = std::min(time, time + pad_left_ - u);
      if (src_begin >= src_end) continue;
      for (Eigen::Index fi = 0; fi < in_filters_; ++fi)
        d_in_c.col(fi).segment(src_begin + u - pad_left_, src_end - src_begin) +=
            d_patches.col(fi * kernel_len_ + u).segment(src_begin, src_end - src_begin);
    }
  }
  return d_in;
}

void TemporalConv::zero_grad() {
  grad_kernels_.set_zero();
  grad_bias_.setZero();
}

void TemporalConv::collect_params(const std::string& prefix, std::vector<ParamRef>& out) {
  out.push_back(make_ref(prefix + ".kernels", kernels_.data(), grad_kernels_.data(),
                         kernels_.shape()));
  out.push_back(make_ref(prefix + ".bias", bias_.data(), grad_bias_.data(),
                         {bias_.size()}));
}

Tensor Relu::forward(const Tensor& x) {
  mask_ = Tensor(x.shape());
  Tensor out(x.shape());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const bool positive = x[i] > 0.0;
    mask_[i] = positive ? 1.0 : 0.0;
    out[i] = positive ? x[i] : 0.0;
  }
  return out;
}

Tensor Relu::backward(const Tensor& d_out) const {
  if (!d_out.same_shape(mask_)) throw ArgumentError("Relu: gradient shape mismatch");
  Tensor d_in(d_out.shape());
  d_in.array() = d_out.array() * mask_.array();
  return d_in;
}

Tensor MaxPool::forward(const Tensor& x) {
  if (x.rank() != 3) throw ArgumentError("MaxPool: expected rank-3 input");
  const Eigen::Index channels = x.dim(0);
  const Eigen::Index time = x.dim(1);
  const Eigen::Index filters = x.dim(2);
  const Eigen::Index out_time = time / window_;
  if (out_time < 1)
    throw ArgumentError("MaxPool: time length " + std::to_string(time) +
                        " shorter than window " + std::to_string(window_));

  in_shape_ = x.shape();
  Tensor out({channels, out_time, filters});
  argmax_.assign(static_cast<std::size_t>(out.size()), 0);
  for (Eigen::Index c = 0; c < channels; ++c) {
    for (Eigen::Index t = 0; t < out_time; ++t) {
      for (Eigen::Index f = 0; f < filters; ++f) {
        Eigen::Index best = (c * time + t * window_) * filters + f;
        double best_value = x[best];
        for (Eigen::Index j = 1; j < window_; ++j) {
          const Eigen::Index at = (c * time + t * window_ + j) * filters + f;
          if (x[at] > best_value) {  // strict: ties keep the earliest index
            best_value = x[at];
            best = at;
          }
        }
        const Eigen::Index out_at = (c * out_time + t) * filters + f;
        out[out_at] = best_value;
        argmax_[static_cast<std::size_t>(out_at)] = best;
      }
    }
  }
  return out;
}

Tensor MaxPool::backward(const Tensor& d_out) const {
  if (d_out.size() != static_cast<Eigen::Index>(argmax_.size()))
    throw ArgumentError("MaxPool: gradient shape mismatch");
  Tensor d_in(in_shape_);
  for (Eigen::Index i = 0; i < d_out.size(); ++i)
    d_in[argmax_[static_cast<std::size_t>(i)]] += d_out[i];
  return d_in;
}

Dropout::Dropout(double rate) : rate_(rate) {
  if (!(rate >= 0.0 && rate < 1.0)) throw ArgumentError("Dropout: rate must be in [0, 1)");
}

Eigen::VectorXd Dropout::forward(const Eigen::VectorXd& x, Mode mode, Rng& rng) {
  scale_.resize(x.size());
  if (mode == Mode::Infer || rate_ == 0.0) {
    scale_.setOnes();
    return x;
  }
  const double keep = 1.0 - rate_;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    scale_[i] = rng.uniform() < rate_ ? 0.0 : 1.0 / keep;
  return (x.array() * scale_).matrix();
}

Eigen::VectorXd Dropout::backward(const Eigen::VectorXd& d_out) const {
  if (d_out.size() != scale_.size()) throw ArgumentError("Dropout: gradient shape mismatch");
  return (d_out.array() * scale_).matrix();
}

Dense::Dense(Eigen::Index out_dim, Eigen::Index in_dim)
    : weight_(MatRM::Zero(out_dim, in_dim)),
      grad_weight_(MatRM::Zero(out_dim, in_dim)),
      bias_(Eigen::VectorXd::Zero(out_dim)),
      grad_bias_(Eigen::VectorXd::Zero(out_dim)) {
  if (out_dim < 1 || in_dim < 1) throw ArgumentError("Dense: dimensions must be positive");
}

Eigen::VectorXd Dense::forward(const Eigen::VectorXd& x) {
  if (x.size() != weight_.cols())
    throw ArgumentError("Dense: input size " + std::to_string(x.size()) + " != " +
                        std::to_string(weight_.cols()));
  input_cache_ = x;
  return weight_ * x + bias_;
}

Eigen::VectorXd Dense::backward(const Eigen::VectorXd& d_out) {
  grad_weight_.noalias() += d_out * input_cache_.transpose();
  grad_bias_.noalias() += d_out;
  return weight_.transpose() * d_out;
}

void Dense::zero_grad() {
  grad_weight_.setZero();
  grad_bias_.setZero();
}

void Dense::collect_params(const std::string& prefix, std::vector<ParamRef>& out) {
  out.push_back(make_ref(prefix + ".weight", weight_.data(), grad_weight_.data(),
                         {weight_.rows(), weight_.cols()}));
  out.push_back(make_ref(prefix + ".bias", bias_.data(), grad_bias_.data(),
                         {bias_.size()}));
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double max_logit = logits.maxCoeff();
  Eigen::ArrayXd shifted = (logits.array() - max_logit).exp();
  // 64-bit accumulation; the denominator is a straight sum of the shifted
  // exponentials.
  return (shifted / shifted.sum()).matrix();
}

std::pair<Eigen::VectorXd, double> softmax_cross_entropy(const Eigen::VectorXd& logits,
                                                         const Eigen::VectorXd& one_hot) {
  if (logits.size() != one_hot.size())
    throw ArgumentError("softmax_cross_entropy: size mismatch");
  const double max_logit = logits.maxCoeff();
  const Eigen::ArrayXd shifted = logits.array() - max_logit;
  const double log_sum = std::log(shifted.exp().sum());
  Eigen::VectorXd probs = (shifted - log_sum).exp().matrix();
  const double loss = -((shifted - log_sum) * one_hot.array()).sum();
  return {std::move(probs), loss};
}

}  // namespace somnograph::nn
