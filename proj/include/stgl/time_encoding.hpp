#pragma once

#include <cmath>

#include "stgl/common.hpp"

namespace stgl {

/// Fixed cosine feature map of an elapsed-time scalar with geometrically
/// spaced frequencies: psi(dt) = cos(dt * w), w_i = a^{-(i-1)/b} with
/// a = b = sqrt(d_t). Never trained.
class TimeEncoder {
 public:
  explicit TimeEncoder(int d_t) : w_(d_t) {
    if (d_t < 0) throw ValidationError("time encoding dimension must be >= 0");
    const double base = std::sqrt(static_cast<double>(d_t));
    for (int i = 0; i < d_t; ++i) w_[i] = std::pow(base, -static_cast<double>(i) / base);
  }

  int dim() const { return static_cast<int>(w_.size()); }
  const VecXd& frequencies() const { return w_; }

  VecXd encode(Time dt) const {
    if (dt < 0) throw ValidationError("time delta must be nonnegative");
    return (dt * w_.array()).cos();
  }

  template <typename S>
  void encode_into(Time dt, Eigen::Ref<VecX<S>> out) const {
    if (dt < 0) throw ValidationError("time delta must be nonnegative");
    for (int i = 0; i < dim(); ++i) out[i] = static_cast<S>(std::cos(dt * w_[i]));
  }

 private:
  VecXd w_;
};

}  // namespace stgl
