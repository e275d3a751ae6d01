#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "somnograph/error.hpp"
#include "somnograph/rng.hpp"

namespace somnograph {

// Dense n-dimensional array with row-major contiguous storage. Rank-specific
// math goes through the Eigen map views; the tensor itself only owns shape
// and buffer.
template <class Scalar>
class TensorT {
 public:
  using Storage = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using MatrixMap =
      Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  using ConstMatrixMap = Eigen::Map<
      const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  using VectorMap = Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>;
  using ConstVectorMap = Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>;

  TensorT() = default;

  explicit TensorT(std::vector<Eigen::Index> shape) : shape_(std::move(shape)) {
    data_ = Storage::Zero(checked_size(shape_));
  }

  TensorT(std::initializer_list<Eigen::Index> shape)
      : TensorT(std::vector<Eigen::Index>(shape)) {}

  static TensorT zeros(std::vector<Eigen::Index> shape) { return TensorT(std::move(shape)); }

  static TensorT constant(std::vector<Eigen::Index> shape, Scalar value) {
    TensorT t(std::move(shape));
    t.data_.setConstant(value);
    return t;
  }

  const std::vector<Eigen::Index>& shape() const { return shape_; }
  Eigen::Index rank() const { return static_cast<Eigen::Index>(shape_.size()); }
  Eigen::Index size() const { return data_.size(); }
  Eigen::Index dim(std::size_t axis) const { return shape_.at(axis); }

  Scalar* data() { return data_.data(); }
  const Scalar* data() const { return data_.data(); }
  Storage& array() { return data_; }
  const Storage& array() const { return data_; }

  Scalar& operator[](Eigen::Index flat) { return data_[flat]; }
  Scalar operator[](Eigen::Index flat) const { return data_[flat]; }

  // Row-major element access: offset = sum_j idx_j * stride_j.
  Scalar& at(const std::vector<Eigen::Index>& idx) { return data_[offset(idx)]; }
  Scalar at(const std::vector<Eigen::Index>& idx) const { return data_[offset(idx)]; }

  Scalar& operator()(Eigen::Index i, Eigen::Index j) { return data_[i * shape_[1] + j]; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return data_[i * shape_[1] + j]; }
  Scalar& operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  Scalar operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  // Whole buffer viewed as a (rows x cols) row-major matrix.
  MatrixMap as_matrix(Eigen::Index rows, Eigen::Index cols) {
    require_size(rows * cols);
    return MatrixMap(data_.data(), rows, cols);
  }
  ConstMatrixMap as_matrix(Eigen::Index rows, Eigen::Index cols) const {
    require_size(rows * cols);
    return ConstMatrixMap(data_.data(), rows, cols);
  }
  VectorMap as_vector() { return VectorMap(data_.data(), data_.size()); }
  ConstVectorMap as_vector() const { return ConstVectorMap(data_.data(), data_.size()); }

  // Contiguous row-major slice along axis 0.
  MatrixMap slice_matrix(Eigen::Index index0, Eigen::Index rows, Eigen::Index cols) {
    return MatrixMap(data_.data() + index0 * rows * cols, rows, cols);
  }
  ConstMatrixMap slice_matrix(Eigen::Index index0, Eigen::Index rows,
                              Eigen::Index cols) const {
    return ConstMatrixMap(data_.data() + index0 * rows * cols, rows, cols);
  }

  void set_zero() { data_.setZero(); }

  bool same_shape(const TensorT& other) const { return shape_ == other.shape_; }

  std::vector<Eigen::Index> strides() const {
    std::vector<Eigen::Index> s(shape_.size(), 1);
    for (std::size_t j = shape_.size(); j-- > 1;) s[j - 1] = s[j] * shape_[j];
    return s;
  }

 private:
  static Eigen::Index checked_size(const std::vector<Eigen::Index>& shape) {
    Eigen::Index n = 1;
    for (Eigen::Index e : shape) {
      if (e < 0) throw ArgumentError("tensor extents must be non-negative");
      n *= e;
    }
    return n;
  }

  Eigen::Index offset(const std::vector<Eigen::Index>& idx) const {
    if (idx.size() != shape_.size()) throw ArgumentError("tensor index rank mismatch");
    Eigen::Index off = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      if (idx[j] < 0 || idx[j] >= shape_[j])
        throw ArgumentError("tensor index out of range on axis " + std::to_string(j));
      off = off * shape_[j] + idx[j];
    }
    return off;
  }

  void require_size(Eigen::Index n) const {
    if (n != data_.size()) throw ArgumentError("tensor view size mismatch");
  }

  std::vector<Eigen::Index> shape_;
  Storage data_;
};

using Tensor = TensorT<double>;

// Same buffer, new shape. The element count must be preserved.
template <class Scalar>
TensorT<Scalar> reshape(const TensorT<Scalar>& t, std::vector<Eigen::Index> shape) {
  TensorT<Scalar> out(std::move(shape));
  if (out.size() != t.size()) throw ArgumentError("reshape: element count mismatch");
  out.array() = t.array();
  return out;
}

// Axis permutation with physical row-major rearrangement. perm[j] names the
// source axis that becomes output axis j.
template <class Scalar>
TensorT<Scalar> permute(const TensorT<Scalar>& t, const std::vector<std::size_t>& perm) {
  const auto& shape = t.shape();
  if (perm.size() != shape.size()) throw ArgumentError("permute: rank mismatch");
  std::vector<bool> seen(perm.size(), false);
  std::vector<Eigen::Index> out_shape(perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) {
    if (perm[j] >= perm.size() || seen[perm[j]])
      throw ArgumentError("permute: invalid permutation");
    seen[perm[j]] = true;
    out_shape[j] = shape[perm[j]];
  }
  TensorT<Scalar> out(out_shape);
  if (t.size() == 0) return out;
  const auto in_strides = t.strides();
  std::vector<Eigen::Index> idx(perm.size(), 0);
  for (Eigen::Index flat = 0; flat < out.size(); ++flat) {
    Eigen::Index src = 0;
    for (std::size_t j = 0; j < perm.size(); ++j) src += idx[j] * in_strides[perm[j]];
    out[flat] = t[src];
    for (std::size_t j = perm.size(); j-- > 0;) {
      if (++idx[j] < out_shape[j]) break;
      idx[j] = 0;
    }
  }
  return out;
}

// I.i.d. N(mean, stddev^2) entries drawn from rng.
inline Tensor gaussian_init(std::vector<Eigen::Index> shape, double mean, double stddev,
                            Rng& rng) {
  if (stddev < 0.0) throw ArgumentError("gaussian_init: stddev must be non-negative");
  Tensor t(std::move(shape));
  for (Eigen::Index i = 0; i < t.size(); ++i) t[i] = rng.normal(mean, stddev);
  return t;
}

}  // namespace somnograph
