#include "stgl/analysis.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

namespace stgl {

namespace {

struct GramSolve {
  VecXd v;
  double jitter = 0;
  MatXd k;
  Eigen::LLT<MatXd> llt;
};

// (K + lambda I) v = y with the escalating jitter ladder.
GramSolve solve_gram(const JacobianMatrix& jac, double jitter_start) {
  const Eigen::Index n = jac.j.rows();
  if (n < 1) throw ValidationError("empty Jacobian");
  if (jac.y.size() != n) throw ValidationError("label size mismatch");
  if (!jac.j.allFinite()) throw ValidationError("non-finite Jacobian entries");

  GramSolve out;
  out.k = jac.j * jac.j.transpose();
  const double scale = out.k.trace() / static_cast<double>(n);

  std::vector<double> ladder = {0.0, 1e-10 * scale, 1e-8 * scale, 1e-6 * scale};
  ladder.erase(std::remove_if(ladder.begin(), ladder.end(),
                              [&](double l) { return l < jitter_start; }),
               ladder.end());
  if (ladder.empty() || ladder.front() != jitter_start) ladder.insert(ladder.begin(), jitter_start);

  for (double lambda : ladder) {
    MatXd shifted = out.k;
    shifted.diagonal().array() += lambda;
    out.llt.compute(shifted);
    if (out.llt.info() == Eigen::Success) {
      out.v = out.llt.solve(jac.y);
      out.jitter = lambda;
      return out;
    }
  }

  Eigen::SelfAdjointEigenSolver<MatXd> es(out.k, Eigen::EigenvaluesOnly);
  throw ValidationError(
      "Gram factorization failed at max jitter; eigenvalue range [" +
      std::to_string(es.eigenvalues().minCoeff()) + ", " +
      std::to_string(es.eigenvalues().maxCoeff()) + "]");
}

// Eigenvalue estimates of K (+jitter): exact for small Gram matrices, power
// and inverse iteration above that.
void estimate_spectrum(const GramSolve& gs, double& lambda_min, double& lambda_max) {
  const Eigen::Index n = gs.k.rows();
  if (n <= 512) {
    Eigen::SelfAdjointEigenSolver<MatXd> es(gs.k, Eigen::EigenvaluesOnly);
    lambda_min = es.eigenvalues().minCoeff();
    lambda_max = es.eigenvalues().maxCoeff();
    return;
  }
  VecXd v = VecXd::Ones(n).normalized();
  for (int it = 0; it < 60; ++it) v = (gs.k * v).normalized();
  lambda_max = v.dot(gs.k * v);
  VecXd w = VecXd::Ones(n).normalized();
  for (int it = 0; it < 60; ++it) w = gs.llt.solve(w).normalized();
  lambda_min = w.dot(gs.k * w);
}

}  // namespace

FlaReport compute_fla(const JacobianMatrix& jac, double jitter) {
  if (jitter < 0) throw ValidationError("jitter must be nonnegative");
  GramSolve gs = solve_gram(jac, jitter);

  FlaReport rep;
  rep.fla = jac.y.dot(gs.v);
  rep.r = std::sqrt(std::max(rep.fla, 0.0));
  rep.n_sub = jac.j.rows();
  rep.p = jac.j.cols();
  rep.jitter = gs.jitter;
  rep.overparam_ok = rep.p > rep.n_sub;
  estimate_spectrum(gs, rep.lambda_min_est, rep.lambda_max_est);
  return rep;
}

const char* to_string(MethodKind k) {
  switch (k) {
    case MethodKind::gnn: return "gnn";
    case MethodKind::rnn: return "rnn";
    case MethodKind::memory: return "memory";
    case MethodKind::stone: return "stone";
  }
  return "?";
}

MethodKind method_kind_from_string(const std::string& s) {
  if (s == "gnn") return MethodKind::gnn;
  if (s == "rnn") return MethodKind::rnn;
  if (s == "memory") return MethodKind::memory;
  if (s == "stone") return MethodKind::stone;
  throw ValidationError("unknown method '" + s + "'");
}

GeScore generalization_error(MethodKind kind, int layers, double rho, double tau, double r,
                             double n) {
  if (rho < 1 || tau < 1) throw ValidationError("rho and tau must be >= 1");
  if (n <= 0) throw ValidationError("training size must be positive");

  GeScore s;
  s.kind = kind;
  s.rho = rho;
  s.tau = tau;
  switch (kind) {
    case MethodKind::gnn:
      if (layers < 2) throw ValidationError("GNN needs L >= 2");
      s.layers = layers;
      s.c = std::pow((1 + 3 * rho) * tau, layers - 1);
      s.d = layers;
      break;
    case MethodKind::rnn:
      if (layers < 2) throw ValidationError("RNN needs L >= 2");
      s.layers = layers;
      s.c = std::pow(1 + 3 * rho / std::sqrt(2.0), layers - 1);
      s.d = layers;
      break;
    case MethodKind::memory:
      s.layers = 0;
      s.c = rho;
      s.d = 4;
      break;
    case MethodKind::stone:
      s.layers = 2;
      s.rho = 1;
      s.tau = 1;
      s.c = 4;  // ((1+3)*1)^(2-1)
      s.d = 2;
      break;
  }
  s.ge = s.d * s.c * r / std::sqrt(n);
  return s;
}

GeScore compose_ge(const GeScore& a, const GeScore& b) {
  GeScore s = a;
  s.c = a.c * b.c;
  s.d = a.d * b.d;
  s.ge = a.ge * b.ge;
  return s;
}

double perturbation_norm(const JacobianMatrix& jac, double margin_c, double jitter) {
  return margin_c * compute_fla(jac, jitter).r;
}

VecXd perturbation_delta(const JacobianMatrix& jac, double margin_c, double jitter) {
  GramSolve gs = solve_gram(jac, jitter);
  return jac.j.transpose() * (margin_c * gs.v);
}

std::vector<double> generalization_gap(const std::vector<double>& train_ap,
                                       const std::vector<double>& val_ap) {
  if (train_ap.size() != val_ap.size()) throw ValidationError("history lengths differ");
  if (train_ap.empty()) throw ValidationError("empty history");
  std::vector<double> gap(train_ap.size());
  for (std::size_t i = 0; i < gap.size(); ++i) gap[i] = std::abs(train_ap[i] - val_ap[i]);
  return gap;
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

}  // namespace

double spearman_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw ValidationError("need matched series, n >= 2");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0 || vb == 0) throw ValidationError("constant series has no rank correlation");
  return cov / std::sqrt(va * vb);
}

}  // namespace stgl
