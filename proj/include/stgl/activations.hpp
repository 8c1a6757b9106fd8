#pragma once

#include <cmath>
#include <string>

#include "stgl/common.hpp"

namespace stgl {

enum class Activation { relu, tanh, sigmoid };

inline const char* to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  return "?";
}

inline Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  if (s == "sigmoid") return Activation::sigmoid;
  throw ValidationError("unknown activation '" + s + "'");
}

template <typename S>
S activate(Activation a, S x) {
  switch (a) {
    case Activation::relu: return x > S(0) ? x : S(0);
    case Activation::tanh: return std::tanh(x);
    case Activation::sigmoid: return S(1) / (S(1) + std::exp(-x));
  }
  return S(0);
}

// Derivative in terms of the pre-activation. ReLU uses the subgradient
// choice sigma'(0) = 0.
template <typename S>
S activate_deriv(Activation a, S x) {
  switch (a) {
    case Activation::relu: return x > S(0) ? S(1) : S(0);
    case Activation::tanh: {
      const S t = std::tanh(x);
      return S(1) - t * t;
    }
    case Activation::sigmoid: {
      const S s = S(1) / (S(1) + std::exp(-x));
      return s * (S(1) - s);
    }
  }
  return S(0);
}

template <typename S>
VecX<S> activate(Activation a, const VecX<S>& x) {
  VecX<S> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = activate(a, x[i]);
  return out;
}

template <typename S>
VecX<S> activate_deriv(Activation a, const VecX<S>& x) {
  VecX<S> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = activate_deriv(a, x[i]);
  return out;
}

/// Lipschitz constant rho of the activation (Theorem constants use rho >= 1;
/// sigmoid's true constant is 1/4 but it is covered by rho = 1).
inline double activation_lipschitz(Activation a) {
  switch (a) {
    case Activation::relu:
    case Activation::tanh:
    case Activation::sigmoid: return 1.0;
  }
  return 1.0;
}

}  // namespace stgl
