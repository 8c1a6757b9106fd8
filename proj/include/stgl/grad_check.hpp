#pragma once

#include "stgl/common.hpp"

namespace stgl {

/// Central finite differences per coordinate in the model's documented
/// flattening order. Test oracle; restores the model's parameters on exit.
template <class Model>
VecXd finite_difference_grad(Model& model, const typename Model::Input& input, double eps) {
  if (eps <= 0) throw ValidationError("finite-difference step must be positive");
  const VecXd theta = model.params_flat();
  VecXd grad(theta.size());
  VecXd work = theta;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    work[i] = theta[i] + eps;
    model.set_params_flat(work);
    const double up = model.value(input);
    work[i] = theta[i] - eps;
    model.set_params_flat(work);
    const double down = model.value(input);
    work[i] = theta[i];
    grad[i] = (up - down) / (2.0 * eps);
  }
  model.set_params_flat(theta);
  return grad;
}

/// Relative infinity-norm gradient error used by the gradient oracle suite.
inline double grad_rel_error(const VecXd& analytic, const VecXd& numeric) {
  return (analytic - numeric).template lpNorm<Eigen::Infinity>() /
         (1.0 + numeric.template lpNorm<Eigen::Infinity>());
}

}  // namespace stgl
