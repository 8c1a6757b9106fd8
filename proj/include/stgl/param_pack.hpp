#pragma once

#include <random>

#include "stgl/common.hpp"

namespace stgl {

/// Cursor-style writer for the documented parameter flattening order.
/// Matrices are written row-major.
template <typename S>
class ParamWriter {
 public:
  explicit ParamWriter(VecX<S>& out) : out_(out) {}

  void put(const MatX<S>& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) out_[pos_++] = m(r, c);
  }
  void put(const VecX<S>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out_[pos_++] = v[i];
  }
  void put(const RowVecX<S>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out_[pos_++] = v[i];
  }
  void put(S x) { out_[pos_++] = x; }

  Eigen::Index pos() const { return pos_; }

 private:
  VecX<S>& out_;
  Eigen::Index pos_ = 0;
};

template <typename S>
class ParamReader {
 public:
  explicit ParamReader(const VecX<S>& in) : in_(in) {}

  void get(MatX<S>& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = in_[pos_++];
  }
  void get(VecX<S>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = in_[pos_++];
  }
  void get(RowVecX<S>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = in_[pos_++];
  }
  void get(S& x) { x = in_[pos_++]; }

  Eigen::Index pos() const { return pos_; }

 private:
  const VecX<S>& in_;
  Eigen::Index pos_ = 0;
};

template <typename S>
MatX<S> gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double stddev,
                        std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  MatX<S> m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = static_cast<S>(dist(rng));
  return m;
}

}  // namespace stgl
