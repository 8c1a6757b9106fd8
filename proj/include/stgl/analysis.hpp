#pragma once

#include <span>
#include <string>
#include <vector>

#include "stgl/common.hpp"

namespace stgl {

/// Rows are per-example model gradients vec(grad f_i) at initialization,
/// labels in {-1, +1}.
struct JacobianMatrix {
  MatXd j;   // N_sub x P
  VecXd y;   // N_sub
};

struct FlaReport {
  double fla = 0;  // y^T (J J^T)^{-1} y
  double r = 0;    // sqrt(fla)
  Eigen::Index n_sub = 0;
  Eigen::Index p = 0;
  double jitter = 0;  // lambda actually used
  double lambda_min_est = 0;
  double lambda_max_est = 0;
  bool overparam_ok = false;  // P > N_sub
};

/// Solves (J J^T + lambda I) v = y by Cholesky, escalating lambda through
/// {0, 1e-10, 1e-8, 1e-6} * trace(K)/N_sub from the requested starting point
/// until the factorization succeeds. Throws with eigenvalue diagnostics when
/// even the largest jitter fails.
FlaReport compute_fla(const JacobianMatrix& jac, double jitter = 0);

enum class MethodKind { gnn, rnn, memory, stone };

const char* to_string(MethodKind k);
MethodKind method_kind_from_string(const std::string& s);

struct GeScore {
  MethodKind kind = MethodKind::stone;
  int layers = 2;
  double rho = 1;
  double tau = 1;
  double c = 0;
  double d = 0;
  double ge = 0;  // D * C * R / sqrt(N)
};

/// Dominant term of the expected 0-1 error bound with the per-method
/// constants: GNN C = ((1+3 rho) tau)^{L-1}, D = L; RNN C = (1+3 rho/sqrt 2)^{L-1},
/// D = L; memory C = rho, D = 4; stone = GNN with L = 2, rho = 1, tau = 1.
GeScore generalization_error(MethodKind kind, int layers, double rho, double tau, double r,
                             double n);

/// Product composition for methods combining two families.
GeScore compose_ge(const GeScore& a, const GeScore& b);

/// Norm of the minimum-norm solution of J dtheta = C y: C * sqrt(fla).
double perturbation_norm(const JacobianMatrix& jac, double margin_c, double jitter = 0);

/// The explicit perturbation J^T (J J^T)^{-1} C y.
VecXd perturbation_delta(const JacobianMatrix& jac, double margin_c, double jitter = 0);

/// Per-epoch |train AP - validation AP|.
std::vector<double> generalization_gap(const std::vector<double>& train_ap,
                                       const std::vector<double>& val_ap);

/// Spearman rank correlation; ties get average ranks.
double spearman_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace stgl
