#pragma once

#include <cmath>

#include "stgl/common.hpp"

namespace stgl {

/// Layer normalization without learnable affine parameters, epsilon 1e-5.
/// All-zero input maps to all-zeros (centered input is zero).
template <typename S>
struct LayerNormCache {
  VecX<S> normalized;
  S inv_std = S(0);
};

template <typename S>
VecX<S> layer_norm(const VecX<S>& z, LayerNormCache<S>* cache = nullptr) {
  constexpr S eps = S(1e-5);
  const S mean = z.mean();
  const VecX<S> centered = z.array() - mean;
  const S var = centered.squaredNorm() / static_cast<S>(z.size());
  const S inv_std = S(1) / std::sqrt(var + eps);
  VecX<S> out = centered * inv_std;
  if (cache) {
    cache->normalized = out;
    cache->inv_std = inv_std;
  }
  return out;
}

template <typename S>
VecX<S> layer_norm_backward(const LayerNormCache<S>& cache, const VecX<S>& d_out) {
  const auto n = static_cast<S>(d_out.size());
  const S mean_d = d_out.mean();
  const S mean_dg = d_out.dot(cache.normalized) / n;
  return cache.inv_std *
         (d_out.array() - mean_d - cache.normalized.array() * mean_dg).matrix();
}

}  // namespace stgl
